#pragma once
// belief: the AGM layer over tag bindings.
//
// The belief base is the union of the content of every tag-bound revision
// (all tags, all items) at a point in time; the retrieval surface is the
// same set restricted to non-deprecated items. Expansion, revision,
// contraction and rollback are implemented purely through revision
// creation, SUPERSEDES edges and tag moves: nothing is ever destroyed.
//
// Contract-then-expand deliberately does not resurrect beliefs that were
// co-located with the contracted one; restoring them takes an explicit,
// audited tag rollback.

#include "cogmem/store.hpp"

#include <set>

namespace cogmem {

struct BeliefBase {
    std::set<BeliefAtom> atoms;
    std::optional<Timestamp> as_of;

    bool contains(const BeliefAtom& a) const { return atoms.count(a) > 0; }
};

// All (tag, revision) pairs among open bindings whose content carries the
// contracted atom. Content-based and exhaustive.
struct TargetSet {
    struct Pair {
        std::string tag;
        RevisionRef revision;
    };
    std::vector<Pair> pairs;
};

struct ContractionOutcome {
    std::vector<std::pair<Kref, std::string>> removed_tags; // (item, tag)
    std::vector<Kref> deprecated_items;
    TargetSet targets;
};

BeliefBase belief_base(const Graph& g, std::optional<Timestamp> at = std::nullopt);
BeliefBase retrieval_surface(const Graph& g, std::optional<Timestamp> at = std::nullopt);

// Expansion: new revision whose content is the currently latest-tagged
// revision's content plus `atom`; binds "latest"; removes nothing. After a
// contraction there is no latest-tagged revision, so the union starts empty
// and re-expanding recovers only the expanded atom itself.
Revision expand(Graph& g, const Kref& item, const BeliefAtom& atom);

// Revision: atomically create revision k+1 with the given content, add the
// SUPERSEDES edge to revision k (when one exists) and re-bind "latest".
// opts.bind_latest is forced on; author and embedding-text override pass
// through to the store.
Revision revise(Graph& g, const Kref& item, AtomSet content, std::string summary,
                Metadata metadata = {}, RevisionOptions opts = RevisionOptions());

TargetSet targets(const Graph& g, const BeliefAtom& atom);

// Contraction: remove every targeted tag and soft-deprecate the affected
// items. Contracting an absent atom is a no-op.
ContractionOutcome contract(Graph& g, const BeliefAtom& atom,
                            std::optional<Timestamp> at = std::nullopt);

// Deliberate, audited re-binding of a tag to a prior revision.
TagHistoryEntry rollback(Graph& g, const Kref& item, const std::string& tag, std::int64_t seq,
                         std::optional<Timestamp> at = std::nullopt);

// Optional helper: open bindings whose content shares (subject, predicate)
// with any atom in `content` but differs in value. Cross-item conflict
// sweeps are an agent-level decision; this only lists the candidates.
std::vector<TargetSet::Pair> conflict_scan(const Graph& g, const AtomSet& content);

} // namespace cogmem
