#include "cogmem/agm_suite.hpp"

#include "cogmem/belief.hpp"
#include "cogmem/traversal.hpp"

#include "json.hpp"

#include <algorithm>
#include <limits>
#include <random>
#include <sstream>

namespace cogmem::agm {

const char* postulate_name(Postulate p) {
    switch (p) {
        case Postulate::K2: return "K2";
        case Postulate::K3: return "K3";
        case Postulate::K4: return "K4";
        case Postulate::K5: return "K5";
        case Postulate::K6: return "K6";
        case Postulate::Relevance: return "Relevance";
        case Postulate::CoreRetainment: return "CoreRetainment";
    }
    return "K2";
}

const char* category_name(Category c) {
    switch (c) {
        case Category::Simple: return "simple";
        case Category::MultiItem: return "multi-item";
        case Category::Chain: return "chain";
        case Category::Temporal: return "temporal";
        case Category::Adversarial: return "adversarial";
    }
    return "simple";
}

Postulate postulate_from_name(const std::string& name) {
    for (Postulate p : kAllPostulates)
        if (name == postulate_name(p)) return p;
    raise(Errc::InvalidOption, "unknown postulate \"" + name + "\"");
}

Category category_from_name(const std::string& name) {
    for (Category c : kAllCategories)
        if (name == category_name(c)) return c;
    raise(Errc::InvalidOption, "unknown category \"" + name + "\"");
}

bool is_na_cell(Postulate p, Category c) {
    return (p == Postulate::K6 && c == Category::Chain) ||
           (p == Postulate::CoreRetainment && c == Category::Temporal);
}

namespace {

void require(bool cond, const std::string& msg) {
    if (!cond) throw std::runtime_error(msg);
}

// Each scenario owns a fresh graph driven by a logical clock.
struct Ctx {
    std::shared_ptr<LogicalClock> clock = std::make_shared<LogicalClock>(1000);
    Graph g{clock};

    Kref item(const std::string& name, const std::string& kind = "decision",
              const std::string& space = "beliefs") {
        Kref k = Kref::make("agm", {space}, name, kind);
        g.ensure_item(k);
        return k;
    }
    static BeliefAtom atom(const Kref& item, const std::string& value) {
        return BeliefAtom::summary(item, value);
    }
    std::set<BeliefAtom> base(std::optional<Timestamp> at = std::nullopt) const {
        return belief_base(g, at).atoms;
    }
    std::set<BeliefAtom> surface(std::optional<Timestamp> at = std::nullopt) const {
        return retrieval_surface(g, at).atoms;
    }
};

bool is_subset(const std::set<BeliefAtom>& inner, const std::set<BeliefAtom>& outer) {
    return std::includes(outer.begin(), outer.end(), inner.begin(), inner.end());
}

std::set<BeliefAtom> set_union(std::set<BeliefAtom> a, const std::set<BeliefAtom>& b) {
    a.insert(b.begin(), b.end());
    return a;
}

std::set<BeliefAtom> set_minus(const std::set<BeliefAtom>& a, const std::set<BeliefAtom>& b) {
    std::set<BeliefAtom> out;
    std::set_difference(a.begin(), a.end(), b.begin(), b.end(),
                        std::inserter(out, out.begin()));
    return out;
}

// Relevance / Core-Retainment bookkeeping: every atom removed by
// contract(A) must have lived in a detagged revision whose content also
// carried A.
void check_removal_attribution(const Ctx& ctx, const std::set<BeliefAtom>& removed,
                               const ContractionOutcome& outcome, const BeliefAtom& contracted) {
    for (const BeliefAtom& gone : removed) {
        bool attributed = false;
        for (const auto& pair : outcome.targets.pairs) {
            Revision rev = ctx.g.revision(pair.revision);
            if (contains(rev.content, gone) && contains(rev.content, contracted)) {
                attributed = true;
                break;
            }
        }
        require(attributed, "removed atom \"" + gone.value +
                                "\" not attributable to a detagged revision carrying the "
                                "contracted belief");
    }
}

void add_scenarios(std::vector<Scenario>& out, Postulate p, Category c,
                   std::vector<std::pair<std::string, std::function<void()>>> bodies) {
    int n = 0;
    for (auto& [description, body] : bodies) {
        ++n;
        char id[64];
        std::snprintf(id, sizeof(id), "%s/%s/%02d", postulate_name(p), category_name(c), n);
        out.push_back({id, c, p, description, std::move(body)});
    }
}

std::vector<Scenario> build_catalog() {
    std::vector<Scenario> cat;

    // ---- simple -----------------------------------------------------------
    add_scenarios(cat, Postulate::K2, Category::Simple, {
        {"revised atom enters the base",
         [] {
             Ctx ctx;
             Kref it = ctx.item("color-pref");
             BeliefAtom a = Ctx::atom(it, "cool tones");
             revise(ctx.g, it, {a}, a.value);
             require(ctx.base().count(a) == 1, "A missing from base after revise");
         }},
        {"revision replaces the prior belief",
         [] {
             Ctx ctx;
             Kref it = ctx.item("color-pref");
             BeliefAtom warm = Ctx::atom(it, "warm tones");
             BeliefAtom cool = Ctx::atom(it, "cool tones");
             revise(ctx.g, it, {warm}, warm.value);
             revise(ctx.g, it, {cool}, cool.value);
             require(ctx.base().count(cool) == 1, "new atom missing");
             require(ctx.base().count(warm) == 0, "superseded atom still in base");
         }},
    });
    add_scenarios(cat, Postulate::K3, Category::Simple, {
        {"base after revise stays within before + new content",
         [] {
             Ctx ctx;
             Kref it = ctx.item("api-design");
             revise(ctx.g, it, {Ctx::atom(it, "use rest"), Ctx::atom(it, "json bodies")},
                    "initial");
             auto before = ctx.base();
             BeliefAtom next = Ctx::atom(it, "use grpc");
             revise(ctx.g, it, {next}, next.value);
             require(is_subset(ctx.base(), set_union(before, {next})),
                     "inclusion violated: revise introduced unrelated atoms");
         }},
        {"inclusion with multi-atom replacement content",
         [] {
             Ctx ctx;
             Kref it = ctx.item("deploy-plan");
             revise(ctx.g, it, {Ctx::atom(it, "weekly releases")}, "v1");
             auto before = ctx.base();
             AtomSet next{Ctx::atom(it, "daily releases"), Ctx::atom(it, "canary first")};
             revise(ctx.g, it, next, "v2");
             std::set<BeliefAtom> allowed = before;
             for (const BeliefAtom& a : next) allowed.insert(a);
             require(is_subset(ctx.base(), allowed), "inclusion violated");
         }},
    });
    add_scenarios(cat, Postulate::K4, Category::Simple, {
        {"non-conflicting expansion preserves the prior base",
         [] {
             Ctx ctx;
             Kref it = ctx.item("prefs");
             revise(ctx.g, it, {Ctx::atom(it, "dark mode")}, "prefs");
             auto before = ctx.base();
             BeliefAtom extra{it.base(), Predicate::Topic, "ui"};
             expand(ctx.g, it, extra);
             require(is_subset(set_union(before, {extra}), ctx.base()),
                     "vacuity violated: expansion lost prior beliefs");
         }},
        {"contracting an absent atom is a no-op",
         [] {
             Ctx ctx;
             Kref it = ctx.item("prefs");
             revise(ctx.g, it, {Ctx::atom(it, "dark mode")}, "prefs");
             auto before = ctx.base();
             contract(ctx.g, Ctx::atom(it, "never stored"), ctx.clock->now());
             require(ctx.base() == before, "no-op contraction changed the base");
         }},
    });
    add_scenarios(cat, Postulate::K5, Category::Simple, {
        {"supersedes replaces rather than accumulates",
         [] {
             Ctx ctx;
             Kref it = ctx.item("color-pref");
             revise(ctx.g, it, {Ctx::atom(it, "warm tones")}, "warm");
             Revision r2 = revise(ctx.g, it, {Ctx::atom(it, "cool tones")}, "cool");
             bool edge_found = false;
             for (const Edge& e : ctx.g.edges_from(r2.ref()))
                 if (e.edge_type == EdgeType::Supersedes && e.target.seq == 1)
                     edge_found = true;
             require(edge_found, "missing SUPERSEDES edge");
             auto surface = ctx.surface();
             for (const BeliefAtom& a : surface)
                 for (const BeliefAtom& b : surface)
                     require(!atoms_conflict(a, b), "conflicting atoms in surface");
         }},
        {"superseded-but-tagged stays, untagged leaves",
         [] {
             Ctx ctx;
             Kref kept = ctx.item("kept");
             Kref dropped = ctx.item("dropped");
             BeliefAtom kept_old = Ctx::atom(kept, "v1");
             BeliefAtom dropped_old = Ctx::atom(dropped, "v1");
             revise(ctx.g, kept, {kept_old}, "v1");
             ctx.g.bind_tag(kept, "initial", 1);
             revise(ctx.g, dropped, {dropped_old}, "v1");
             revise(ctx.g, kept, {Ctx::atom(kept, "v2")}, "v2");
             revise(ctx.g, dropped, {Ctx::atom(dropped, "v2")}, "v2");
             require(ctx.base().count(kept_old) == 1, "explicitly tagged revision left base");
             require(ctx.base().count(dropped_old) == 0, "untagged superseded atom stayed");
         }},
    });
    add_scenarios(cat, Postulate::K6, Category::Simple, {
        {"equal revisions from equal states yield equal bases",
         [] {
             auto play = [] {
                 Ctx ctx;
                 Kref it = ctx.item("color-pref");
                 revise(ctx.g, it, {Ctx::atom(it, "warm tones")}, "warm");
                 revise(ctx.g, it, {Ctx::atom(it, "cool tones")}, "cool");
                 return ctx.base();
             };
             require(play() == play(), "identical histories produced different bases");
         }},
        {"syntactically equal atoms are interchangeable",
         [] {
             Ctx a, b;
             Kref ia = a.item("pref");
             Kref ib = b.item("pref");
             revise(a.g, ia, {Ctx::atom(ia, "minimal style")}, "s");
             revise(b.g, ib, {BeliefAtom{ib.base(), Predicate::Summary, "minimal style"}}, "s");
             require(a.base() == b.base(), "equal atoms gave different bases");
         }},
    });
    add_scenarios(cat, Postulate::Relevance, Category::Simple, {
        {"contraction removes only co-located beliefs",
         [] {
             Ctx ctx;
             Kref it = ctx.item("notes");
             BeliefAtom a = Ctx::atom(it, "alpha");
             BeliefAtom b{it.base(), Predicate::Topic, "beta"};
             revise(ctx.g, it, {a, b}, "both");
             auto before = ctx.base();
             auto outcome = contract(ctx.g, a, ctx.clock->now());
             auto removed = set_minus(before, ctx.base());
             require(removed.count(a) == 1, "contracted atom survived");
             check_removal_attribution(ctx, removed, outcome, a);
         }},
        {"unrelated items keep their beliefs",
         [] {
             Ctx ctx;
             Kref one = ctx.item("one");
             Kref two = ctx.item("two");
             BeliefAtom target = Ctx::atom(one, "goes away");
             BeliefAtom bystander = Ctx::atom(two, "stays put");
             revise(ctx.g, one, {target}, "one");
             revise(ctx.g, two, {bystander}, "two");
             contract(ctx.g, target, ctx.clock->now());
             require(ctx.base().count(bystander) == 1, "unrelated belief removed");
             require(!ctx.g.is_deprecated(two), "unrelated item deprecated");
         }},
    });
    add_scenarios(cat, Postulate::CoreRetainment, Category::Simple, {
        {"every removed belief is attributable to the contraction",
         [] {
             Ctx ctx;
             Kref it = ctx.item("bundle");
             BeliefAtom a = Ctx::atom(it, "core");
             BeliefAtom b{it.base(), Predicate::Keyword, "side"};
             BeliefAtom c{it.base(), Predicate::Topic, "extra"};
             revise(ctx.g, it, {a, b, c}, "all");
             auto before = ctx.base();
             auto outcome = contract(ctx.g, a, ctx.clock->now());
             check_removal_attribution(ctx, set_minus(before, ctx.base()), outcome, a);
         }},
        {"contracting an absent belief removes nothing",
         [] {
             Ctx ctx;
             Kref it = ctx.item("bundle");
             revise(ctx.g, it, {Ctx::atom(it, "present")}, "p");
             auto before = ctx.base();
             auto outcome = contract(ctx.g, Ctx::atom(it, "absent"), ctx.clock->now());
             require(outcome.targets.pairs.empty(), "target set should be empty");
             require(ctx.base() == before, "base changed");
         }},
    });

    // ---- multi-item --------------------------------------------------------
    add_scenarios(cat, Postulate::K2, Category::MultiItem, {
        {"revising one item leaves the other intact",
         [] {
             Ctx ctx;
             Kref color = ctx.item("color-pref");
             Kref palette = ctx.item("palette");
             BeliefAtom pal = Ctx::atom(palette, "earth tones");
             revise(ctx.g, color, {Ctx::atom(color, "warm tones")}, "warm");
             revise(ctx.g, palette, {pal}, "palette");
             BeliefAtom cool = Ctx::atom(color, "cool tones");
             revise(ctx.g, color, {cool}, "cool");
             require(ctx.base().count(cool) == 1, "revised atom missing");
             require(ctx.base().count(pal) == 1, "unrelated item lost its belief");
         }},
        {"sequential revisions across items all succeed",
         [] {
             Ctx ctx;
             std::vector<BeliefAtom> atoms;
             for (int i = 0; i < 4; ++i) {
                 Kref it = ctx.item("item-" + std::to_string(i));
                 BeliefAtom a = Ctx::atom(it, "value " + std::to_string(i));
                 revise(ctx.g, it, {a}, a.value);
                 atoms.push_back(a);
             }
             for (const BeliefAtom& a : atoms)
                 require(ctx.base().count(a) == 1, "atom missing: " + a.value);
         }},
    });
    add_scenarios(cat, Postulate::K3, Category::MultiItem, {
        {"inclusion holds across a two-item base",
         [] {
             Ctx ctx;
             Kref one = ctx.item("one");
             Kref two = ctx.item("two");
             revise(ctx.g, one, {Ctx::atom(one, "a")}, "a");
             revise(ctx.g, two, {Ctx::atom(two, "b")}, "b");
             auto before = ctx.base();
             BeliefAtom next = Ctx::atom(one, "a2");
             revise(ctx.g, one, {next}, "a2");
             require(is_subset(ctx.base(), set_union(before, {next})), "inclusion violated");
         }},
    });
    add_scenarios(cat, Postulate::K4, Category::MultiItem, {
        {"expansion on one item preserves the whole base",
         [] {
             Ctx ctx;
             Kref one = ctx.item("one");
             Kref two = ctx.item("two");
             revise(ctx.g, one, {Ctx::atom(one, "a")}, "a");
             revise(ctx.g, two, {Ctx::atom(two, "b")}, "b");
             auto before = ctx.base();
             BeliefAtom extra{one.base(), Predicate::Keyword, "fresh"};
             expand(ctx.g, one, extra);
             require(is_subset(set_union(before, {extra}), ctx.base()), "vacuity violated");
         }},
    });
    add_scenarios(cat, Postulate::K5, Category::MultiItem, {
        {"independent subjects cannot conflict",
         [] {
             Ctx ctx;
             Kref one = ctx.item("one");
             Kref two = ctx.item("two");
             revise(ctx.g, one, {Ctx::atom(one, "x")}, "x");
             revise(ctx.g, two, {Ctx::atom(two, "y")}, "y");
             auto surface = ctx.surface();
             for (const BeliefAtom& a : surface)
                 for (const BeliefAtom& b : surface)
                     require(!atoms_conflict(a, b), "cross-item conflict found");
         }},
        {"conflict_scan reports stale cross-item claims without auto-sweeping",
         [] {
             Ctx ctx;
             Kref subject = ctx.item("api-port");
             Kref mirror = ctx.item("mirror", "fact");
             revise(ctx.g, subject, {Ctx::atom(subject, "port 8080")}, "port");
             // The mirror item repeats a claim about the subject item.
             revise(ctx.g, mirror, {BeliefAtom{subject.base(), Predicate::Summary, "port 8080"}},
                    "mirror");
             AtomSet next{Ctx::atom(subject, "port 9090")};
             auto conflicts = conflict_scan(ctx.g, next);
             require(conflicts.size() == 2, "expected both tagged holders of the stale claim");
             revise(ctx.g, subject, next, "port 9090");
             // Cross-item sweep is an agent-level decision: the mirror claim stays.
             require(ctx.base().count(
                         BeliefAtom{subject.base(), Predicate::Summary, "port 8080"}) == 1,
                     "cross-item sweep happened implicitly");
         }},
    });
    add_scenarios(cat, Postulate::K6, Category::MultiItem, {
        {"equal multi-item graphs stay equal after the same revision",
         [] {
             auto play = [] {
                 Ctx ctx;
                 Kref one = ctx.item("one");
                 Kref two = ctx.item("two");
                 revise(ctx.g, one, {Ctx::atom(one, "a")}, "a");
                 revise(ctx.g, two, {Ctx::atom(two, "b")}, "b");
                 revise(ctx.g, one, {Ctx::atom(one, "a2")}, "a2");
                 return ctx.base();
             };
             require(play() == play(), "divergent bases");
         }},
    });
    add_scenarios(cat, Postulate::Relevance, Category::MultiItem, {
        {"contraction targets every tagged holder across items",
         [] {
             Ctx ctx;
             Kref one = ctx.item("one");
             Kref two = ctx.item("two");
             BeliefAtom shared{one.base(), Predicate::Summary, "shared claim"};
             revise(ctx.g, one, {shared}, "one");
             revise(ctx.g, two, {shared, Ctx::atom(two, "own")}, "two");
             auto before = ctx.base();
             auto outcome = contract(ctx.g, shared, ctx.clock->now());
             require(outcome.targets.pairs.size() == 2, "selection not exhaustive");
             require(ctx.base().count(shared) == 0, "contracted atom survived");
             check_removal_attribution(ctx, set_minus(before, ctx.base()), outcome, shared);
             require(ctx.g.is_deprecated(one) && ctx.g.is_deprecated(two),
                     "affected items not deprecated");
         }},
    });
    add_scenarios(cat, Postulate::CoreRetainment, Category::MultiItem, {
        {"removed beliefs across items are all attributable",
         [] {
             Ctx ctx;
             Kref one = ctx.item("one");
             Kref two = ctx.item("two");
             BeliefAtom shared{one.base(), Predicate::Summary, "shared"};
             BeliefAtom co_one{one.base(), Predicate::Topic, "alpha"};
             BeliefAtom co_two{two.base(), Predicate::Topic, "beta"};
             revise(ctx.g, one, {shared, co_one}, "one");
             revise(ctx.g, two, {shared, co_two}, "two");
             auto before = ctx.base();
             auto outcome = contract(ctx.g, shared, ctx.clock->now());
             check_removal_attribution(ctx, set_minus(before, ctx.base()), outcome, shared);
         }},
    });

    // ---- chain ------------------------------------------------------------
    add_scenarios(cat, Postulate::K2, Category::Chain, {
        {"success holds at the end of a revision chain",
         [] {
             Ctx ctx;
             Kref it = ctx.item("chain");
             for (int i = 1; i <= 3; ++i)
                 revise(ctx.g, it, {Ctx::atom(it, "v" + std::to_string(i))},
                        "v" + std::to_string(i));
             require(ctx.base().count(Ctx::atom(it, "v3")) == 1, "latest atom missing");
             require(ctx.g.latest_seq(it) == 3, "chain length wrong");
         }},
    });
    add_scenarios(cat, Postulate::K3, Category::Chain, {
        {"inclusion holds at every chain step",
         [] {
             Ctx ctx;
             Kref it = ctx.item("chain");
             revise(ctx.g, it, {Ctx::atom(it, "v1")}, "v1");
             for (int i = 2; i <= 5; ++i) {
                 auto before = ctx.base();
                 BeliefAtom next = Ctx::atom(it, "v" + std::to_string(i));
                 revise(ctx.g, it, {next}, next.value);
                 require(is_subset(ctx.base(), set_union(before, {next})),
                         "inclusion violated at step " + std::to_string(i));
             }
         }},
    });
    add_scenarios(cat, Postulate::K4, Category::Chain, {
        {"repeated expansion is monotone",
         [] {
             Ctx ctx;
             Kref it = ctx.item("chain");
             revise(ctx.g, it, {Ctx::atom(it, "seed")}, "seed");
             auto previous = ctx.base();
             for (int i = 0; i < 5; ++i) {
                 expand(ctx.g, it, BeliefAtom{it.base(), Predicate::Keyword,
                                              "k" + std::to_string(i)});
                 auto current = ctx.base();
                 require(is_subset(previous, current), "expansion shrank the base");
                 previous = std::move(current);
             }
         }},
    });
    add_scenarios(cat, Postulate::K5, Category::Chain, {
        {"a conflicting chain keeps exactly the newest claim",
         [] {
             Ctx ctx;
             Kref it = ctx.item("chain");
             for (int i = 1; i <= 4; ++i)
                 revise(ctx.g, it, {Ctx::atom(it, "claim " + std::to_string(i))}, "c");
             auto surface = ctx.surface();
             require(surface.count(Ctx::atom(it, "claim 4")) == 1, "newest claim missing");
             require(surface.size() == 1, "stale chain claims leaked into the surface");
         }},
    });
    add_scenarios(cat, Postulate::Relevance, Category::Chain, {
        {"contraction touches only the binding that holds the atom",
         [] {
             Ctx ctx;
             Kref it = ctx.item("chain");
             BeliefAtom v1 = Ctx::atom(it, "v1");
             revise(ctx.g, it, {v1}, "v1");
             ctx.g.bind_tag(it, "v1", 1);
             BeliefAtom v2 = Ctx::atom(it, "v2");
             revise(ctx.g, it, {v2}, "v2");
             contract(ctx.g, v1, ctx.clock->now());
             require(!ctx.g.open_binding(it, "v1"), "targeted binding still open");
             require(ctx.g.open_binding(it, kLatestTag).has_value(),
                     "untargeted binding was removed");
             require(ctx.base().count(v2) == 1, "newest claim lost");
         }},
    });
    add_scenarios(cat, Postulate::CoreRetainment, Category::Chain, {
        {"mid-chain contraction attribution",
         [] {
             Ctx ctx;
             Kref it = ctx.item("chain");
             BeliefAtom a = Ctx::atom(it, "target");
             BeliefAtom b{it.base(), Predicate::Topic, "companion"};
             revise(ctx.g, it, {a, b}, "v1");
             ctx.g.bind_tag(it, "pinned", 1);
             revise(ctx.g, it, {Ctx::atom(it, "v2")}, "v2");
             auto before = ctx.base();
             auto outcome = contract(ctx.g, a, ctx.clock->now());
             check_removal_attribution(ctx, set_minus(before, ctx.base()), outcome, a);
         }},
    });

    // ---- temporal ------------------------------------------------------------
    add_scenarios(cat, Postulate::K2, Category::Temporal, {
        {"historical base still shows the superseded belief",
         [] {
             Ctx ctx;
             Kref it = ctx.item("color-pref");
             BeliefAtom warm = Ctx::atom(it, "warm tones");
             revise(ctx.g, it, {warm}, "warm");
             Timestamp before = ctx.clock->now();
             BeliefAtom cool = Ctx::atom(it, "cool tones");
             revise(ctx.g, it, {cool}, "cool");
             require(ctx.base().count(cool) == 1, "current base wrong");
             require(ctx.base(before).count(warm) == 1, "historical base lost old belief");
             require(ctx.base(before).count(cool) == 0, "future belief leaked into history");
         }},
    });
    add_scenarios(cat, Postulate::K3, Category::Temporal, {
        {"later operations never rewrite historical bases",
         [] {
             Ctx ctx;
             Kref it = ctx.item("journal");
             revise(ctx.g, it, {Ctx::atom(it, "entry 1")}, "e1");
             Timestamp t1 = ctx.clock->now();
             auto base_t1 = ctx.base(t1);
             revise(ctx.g, it, {Ctx::atom(it, "entry 2")}, "e2");
             expand(ctx.g, it, BeliefAtom{it.base(), Predicate::Topic, "late"});
             require(ctx.base(t1) == base_t1, "historical base is not a pure function of history");
         }},
    });
    add_scenarios(cat, Postulate::K4, Category::Temporal, {
        {"expansion leaves historical bases untouched",
         [] {
             Ctx ctx;
             Kref it = ctx.item("prefs");
             revise(ctx.g, it, {Ctx::atom(it, "dark mode")}, "p");
             Timestamp t = ctx.clock->now();
             auto before = ctx.base(t);
             expand(ctx.g, it, BeliefAtom{it.base(), Predicate::Topic, "ui"});
             require(ctx.base(t) == before, "expansion mutated history");
             require(is_subset(before, ctx.base()), "expansion dropped beliefs");
         }},
    });
    add_scenarios(cat, Postulate::K5, Category::Temporal, {
        {"temporal surfaces are internally consistent",
         [] {
             Ctx ctx;
             Kref it = ctx.item("claim");
             revise(ctx.g, it, {Ctx::atom(it, "old value")}, "old");
             Timestamp mid = ctx.clock->now();
             revise(ctx.g, it, {Ctx::atom(it, "new value")}, "new");
             for (auto at : {std::optional<Timestamp>{mid}, std::optional<Timestamp>{}}) {
                 auto surface = ctx.surface(at);
                 for (const BeliefAtom& a : surface)
                     for (const BeliefAtom& b : surface)
                         require(!atoms_conflict(a, b), "temporal surface inconsistent");
             }
         }},
    });
    add_scenarios(cat, Postulate::K6, Category::Temporal, {
        {"equal timelines resolve equally at every instant",
         [] {
             auto play = [](std::vector<std::set<BeliefAtom>>& snapshots) {
                 Ctx ctx;
                 Kref it = ctx.item("timeline");
                 revise(ctx.g, it, {Ctx::atom(it, "a")}, "a");
                 Timestamp t1 = ctx.clock->now();
                 revise(ctx.g, it, {Ctx::atom(it, "b")}, "b");
                 Timestamp t2 = ctx.clock->now();
                 snapshots.push_back(ctx.base(t1));
                 snapshots.push_back(ctx.base(t2));
             };
             std::vector<std::set<BeliefAtom>> first, second;
             play(first);
             play(second);
             require(first == second, "equal timelines diverged");
         }},
    });
    add_scenarios(cat, Postulate::Relevance, Category::Temporal, {
        {"contraction takes effect only from its timestamp",
         [] {
             Ctx ctx;
             Kref it = ctx.item("claim");
             BeliefAtom a = Ctx::atom(it, "value");
             revise(ctx.g, it, {a}, "v");
             Timestamp before = ctx.clock->now();
             contract(ctx.g, a, ctx.clock->now());
             require(ctx.base(before).count(a) == 1, "contraction rewrote history");
             require(ctx.base().count(a) == 0, "contraction ineffective now");
         }},
    });

    // ---- adversarial -----------------------------------------------------------
    add_scenarios(cat, Postulate::K2, Category::Adversarial, {
        {"success with punctuation-heavy values",
         [] {
             Ctx ctx;
             Kref it = ctx.item("odd");
             BeliefAtom a = Ctx::atom(it, "x != y && \"quoted\" <tag> 100%");
             revise(ctx.g, it, {a}, a.value);
             require(ctx.base().count(a) == 1, "odd value lost");
         }},
        {"success with a very long string value",
         [] {
             Ctx ctx;
             Kref it = ctx.item("long");
             std::string big(10'000, 'x');
             for (std::size_t i = 0; i < big.size(); i += 97) big[i] = ' ';
             BeliefAtom a = Ctx::atom(it, big);
             revise(ctx.g, it, {a}, "long value");
             require(ctx.base().count(a) == 1, "long value lost");
         }},
    });
    add_scenarios(cat, Postulate::K3, Category::Adversarial, {
        {"inclusion when new content overlaps the old",
         [] {
             Ctx ctx;
             Kref it = ctx.item("overlap");
             BeliefAtom keep = Ctx::atom(it, "keep");
             BeliefAtom drop{it.base(), Predicate::Topic, "drop"};
             revise(ctx.g, it, {keep, drop}, "v1");
             auto before = ctx.base();
             revise(ctx.g, it, {keep}, "v2");
             require(is_subset(ctx.base(), before), "inclusion violated on overlap");
             require(ctx.base().count(keep) == 1, "kept atom lost");
         }},
    });
    add_scenarios(cat, Postulate::K4, Category::Adversarial, {
        {"idempotent union: expanding by a present atom",
         [] {
             Ctx ctx;
             Kref it = ctx.item("idem");
             BeliefAtom a = Ctx::atom(it, "same");
             revise(ctx.g, it, {a}, "v1");
             auto before = ctx.base();
             expand(ctx.g, it, a);
             require(ctx.base() == before, "idempotent expansion changed the base");
         }},
        {"similar item names stay independent (color vs colour)",
         [] {
             Ctx ctx;
             Kref color = ctx.item("color");
             Kref colour = ctx.item("colour");
             BeliefAtom us = Ctx::atom(color, "red");
             BeliefAtom uk = Ctx::atom(colour, "crimson");
             revise(ctx.g, color, {us}, "us");
             revise(ctx.g, colour, {uk}, "uk");
             revise(ctx.g, color, {Ctx::atom(color, "blue")}, "us2");
             require(ctx.base().count(uk) == 1, "similar-named item disturbed");
             require(ctx.base().count(us) == 0, "superseded atom remained");
         }},
    });
    add_scenarios(cat, Postulate::K5, Category::Adversarial, {
        {"consistency after a conflicting revise",
         [] {
             Ctx ctx;
             Kref it = ctx.item("conflict");
             revise(ctx.g, it, {Ctx::atom(it, "yes")}, "y");
             revise(ctx.g, it, {Ctx::atom(it, "no")}, "n");
             auto surface = ctx.surface();
             for (const BeliefAtom& a : surface)
                 for (const BeliefAtom& b : surface)
                     require(!atoms_conflict(a, b), "conflict in surface");
         }},
        {"ten rapid sequential revisions",
         [] {
             Ctx ctx;
             Kref it = ctx.item("rapid");
             for (int i = 1; i <= 10; ++i)
                 revise(ctx.g, it, {Ctx::atom(it, "v" + std::to_string(i))},
                        "v" + std::to_string(i));
             require(ctx.g.latest_seq(it) == 10, "expected 10 revisions");
             int supersedes = 0;
             for (const Edge& e : ctx.g.edges())
                 if (e.edge_type == EdgeType::Supersedes) ++supersedes;
             require(supersedes == 9, "expected 9 SUPERSEDES edges");
             int created = 0;
             for (const Event& ev :
                  ctx.g.read_events(std::nullopt, std::numeric_limits<std::int64_t>::max()))
                 if (ev.kind == EventKind::RevisionCreated) ++created;
             require(created == 10, "expected 10 revision.created events");
             auto surface = ctx.surface();
             require(surface.size() == 1 && surface.count(Ctx::atom(it, "v10")) == 1,
                     "surface should hold exactly the newest claim");
         }},
    });
    add_scenarios(cat, Postulate::K6, Category::Adversarial, {
        {"repeat runs with identical inputs agree",
         [] {
             auto play = [] {
                 Ctx ctx;
                 Kref it = ctx.item("same");
                 revise(ctx.g, it, {Ctx::atom(it, "value")}, "v");
                 return ctx.base();
             };
             require(play() == play(), "identical runs disagreed");
         }},
        {"case-variant values are distinct beliefs",
         [] {
             Ctx a, b;
             Kref ia = a.item("case");
             Kref ib = b.item("case");
             revise(a.g, ia, {Ctx::atom(ia, "Blue")}, "B");
             revise(b.g, ib, {Ctx::atom(ib, "blue")}, "b");
             require(a.base() != b.base(), "case-variant values collapsed");
         }},
        {"idempotent revision: same atom twice equals once",
         [] {
             Ctx once, twice;
             Kref i1 = once.item("idem");
             Kref i2 = twice.item("idem");
             revise(once.g, i1, {Ctx::atom(i1, "v")}, "v");
             revise(twice.g, i2, {Ctx::atom(i2, "v")}, "v");
             revise(twice.g, i2, {Ctx::atom(i2, "v")}, "v");
             require(once.base() == twice.base(), "idempotent revision changed the base");
             require(twice.g.latest_seq(i2) == 2, "second revision should still be recorded");
         }},
    });
    add_scenarios(cat, Postulate::Relevance, Category::Adversarial, {
        {"contraction attribution under adversarial co-location",
         [] {
             Ctx ctx;
             Kref it = ctx.item("dense");
             AtomSet content{Ctx::atom(it, "target")};
             for (int i = 0; i < 8; ++i)
                 content.push_back(BeliefAtom{it.base(), Predicate::Keyword,
                                              "k" + std::to_string(i)});
             revise(ctx.g, it, content, "dense");
             auto before = ctx.base();
             auto outcome = contract(ctx.g, Ctx::atom(it, "target"), ctx.clock->now());
             check_removal_attribution(ctx, set_minus(before, ctx.base()), outcome,
                                       Ctx::atom(it, "target"));
         }},
        {"deep dependency chain survives contraction of the root",
         [] {
             Ctx ctx;
             // a depends on b depends on c depends on d.
             Kref a = ctx.item("a", "fact");
             Kref b = ctx.item("b", "fact");
             Kref c = ctx.item("c", "fact");
             Kref d = ctx.item("d", "fact");
             BeliefAtom root = Ctx::atom(d, "root assumption");
             Revision ra = revise(ctx.g, a, {Ctx::atom(a, "a")}, "a");
             Revision rb = revise(ctx.g, b, {Ctx::atom(b, "b")}, "b");
             Revision rc = revise(ctx.g, c, {Ctx::atom(c, "c")}, "c");
             Revision rd = revise(ctx.g, d, {root}, "d");
             ctx.g.add_edge(ra.ref(), EdgeType::DependsOn, rb.ref());
             ctx.g.add_edge(rb.ref(), EdgeType::DependsOn, rc.ref());
             ctx.g.add_edge(rc.ref(), EdgeType::DependsOn, rd.ref());
             auto before = ctx.base();
             auto outcome = contract(ctx.g, root, ctx.clock->now());
             check_removal_attribution(ctx, set_minus(before, ctx.base()), outcome, root);
             // Dependents remain discoverable for re-evaluation.
             auto impact = analyze_impact(ctx.g, rd.ref(), 10);
             require(impact.visited.size() == 3, "impact set should have 3 dependents");
             require(impact.contains(ra.ref()) && impact.contains(rb.ref()) &&
                         impact.contains(rc.ref()),
                     "dependency chain not discoverable after contraction");
         }},
    });
    add_scenarios(cat, Postulate::CoreRetainment, Category::Adversarial, {
        {"attribution with adversarial values",
         [] {
             Ctx ctx;
             Kref it = ctx.item("adv");
             BeliefAtom a = Ctx::atom(it, "  spaced   value  ");
             BeliefAtom b{it.base(), Predicate::Topic, "UPPER lower MiXeD"};
             revise(ctx.g, it, {a, b}, "adv");
             auto before = ctx.base();
             auto outcome = contract(ctx.g, a, ctx.clock->now());
             check_removal_attribution(ctx, set_minus(before, ctx.base()), outcome, a);
         }},
        {"mixed edge types never cause extra removals",
         [] {
             Ctx ctx;
             Kref core = ctx.item("core");
             Kref ref1 = ctx.item("ref1");
             Kref ref2 = ctx.item("bundle-item", "bundle");
             BeliefAtom target = Ctx::atom(core, "goes");
             BeliefAtom near1 = Ctx::atom(ref1, "stays referenced");
             BeliefAtom near2 = Ctx::atom(ref2, "stays contained");
             Revision r0 = revise(ctx.g, core, {target}, "core");
             Revision r1 = revise(ctx.g, ref1, {near1}, "r1");
             Revision r2 = revise(ctx.g, ref2, {near2}, "r2");
             ctx.g.add_edge(r1.ref(), EdgeType::Referenced, r0.ref());
             ctx.g.add_edge(r2.ref(), EdgeType::Contains, r0.ref());
             ctx.g.add_edge(r1.ref(), EdgeType::DependsOn, r0.ref());
             auto outcome = contract(ctx.g, target, ctx.clock->now());
             require(outcome.deprecated_items.size() == 1, "only the holder item deprecates");
             require(ctx.base().count(near1) == 1 && ctx.base().count(near2) == 1,
                     "edge-connected beliefs were removed");
         }},
    });

    return cat;
}

} // namespace

const std::vector<Scenario>& scenario_catalog() {
    static const std::vector<Scenario> catalog = build_catalog();
    return catalog;
}

ComplianceReport run_all(const RunOptions& options) {
    std::vector<const Scenario*> selected;
    for (const Scenario& s : scenario_catalog()) {
        if (options.only &&
            (s.postulate != options.only->first || s.category != options.only->second))
            continue;
        selected.push_back(&s);
    }
    if (options.shuffle) {
        std::mt19937_64 rng(options.seed);
        std::shuffle(selected.begin(), selected.end(), rng);
    }

    ComplianceReport report;
    for (const Scenario* s : selected) {
        ScenarioResult r;
        r.id = s->id;
        r.category = s->category;
        r.postulate = s->postulate;
        try {
            s->body();
            r.passed = true;
        } catch (const std::exception& e) {
            r.passed = false;
            r.message = e.what();
        }
        report.results.push_back(std::move(r));
    }

    report.total = static_cast<int>(report.results.size());
    for (const ScenarioResult& r : report.results) (r.passed ? report.passed : report.failed)++;

    for (Postulate p : kAllPostulates) {
        for (Category c : kAllCategories) {
            if (options.only && (p != options.only->first || c != options.only->second))
                continue;
            if (is_na_cell(p, c)) {
                report.matrix[{p, c}] = CellStatus::NotApplicable;
                continue;
            }
            bool any = false, all_ok = true;
            for (const ScenarioResult& r : report.results) {
                if (r.postulate != p || r.category != c) continue;
                any = true;
                all_ok = all_ok && r.passed;
            }
            if (any) report.matrix[{p, c}] = all_ok ? CellStatus::Pass : CellStatus::Fail;
        }
    }
    return report;
}

std::string ComplianceReport::render_table() const {
    std::ostringstream out;
    out << "Postulate        Simple  Multi  Chain  Temp.  Adv.   Pass\n";
    for (Postulate p : kAllPostulates) {
        bool row_present = false;
        for (Category c : kAllCategories)
            if (matrix.count({p, c})) row_present = true;
        if (!row_present) continue; // restricted run
        char row[128];
        std::snprintf(row, sizeof(row), "%-16s", postulate_name(p));
        out << row;
        bool row_pass = true;
        for (Category c : kAllCategories) {
            auto it = matrix.find({p, c});
            std::string cell = "     ";
            if (it != matrix.end()) {
                switch (it->second) {
                    case CellStatus::Pass: cell = "  ok "; break;
                    case CellStatus::Fail:
                        cell = " FAIL";
                        row_pass = false;
                        break;
                    case CellStatus::NotApplicable: cell = "  -- "; break;
                }
            }
            out << cell << "  ";
        }
        out << (row_pass ? "100%" : "FAIL") << "\n";
    }
    out << total << " scenarios: " << passed << " passed, " << failed << " failed.\n";
    return out.str();
}

std::string ComplianceReport::to_json() const {
    nlohmann::ordered_json j;
    j["total"] = total;
    j["passed"] = passed;
    j["failed"] = failed;
    nlohmann::ordered_json cells = nlohmann::ordered_json::object();
    for (const auto& [key, status] : matrix) {
        std::string name =
            std::string(postulate_name(key.first)) + "/" + category_name(key.second);
        cells[name] = status == CellStatus::Pass            ? "pass"
                      : status == CellStatus::Fail          ? "fail"
                                                            : "n/a";
    }
    j["matrix"] = cells;
    nlohmann::ordered_json scenarios = nlohmann::ordered_json::array();
    for (const ScenarioResult& r : results) {
        nlohmann::ordered_json s;
        s["id"] = r.id;
        s["passed"] = r.passed;
        if (!r.message.empty()) s["message"] = r.message;
        scenarios.push_back(s);
    }
    j["scenarios"] = scenarios;
    return j.dump(2);
}

} // namespace cogmem::agm
