#include "cogmem/belief.hpp"

#include <algorithm>

namespace cogmem {

BeliefBase belief_base(const Graph& g, std::optional<Timestamp> at) {
    BeliefBase base;
    base.as_of = at;
    for (const auto& bound : g.bound_revisions(at))
        base.atoms.insert(bound.revision.content.begin(), bound.revision.content.end());
    return base;
}

BeliefBase retrieval_surface(const Graph& g, std::optional<Timestamp> at) {
    BeliefBase base;
    base.as_of = at;
    for (const auto& bound : g.bound_revisions(at)) {
        if (bound.item_deprecated) continue;
        base.atoms.insert(bound.revision.content.begin(), bound.revision.content.end());
    }
    return base;
}

Revision expand(Graph& g, const Kref& item, const BeliefAtom& atom) {
    auto wl = g.write_lock();
    AtomSet content;
    std::string summary = atom.value;
    Metadata metadata;
    if (auto binding = g.open_binding(item, kLatestTag)) {
        Revision prev = g.revision({binding->item, binding->revision_seq});
        content = prev.content;
        summary = prev.summary;
        metadata = prev.metadata;
    } else if (!g.has_item(item)) {
        raise(Errc::UnknownItem, item.base().format());
    }
    content.push_back(atom);
    return g.create_revision(item, std::move(content), std::move(summary),
                             std::move(metadata));
}

Revision revise(Graph& g, const Kref& item, AtomSet content, std::string summary,
                Metadata metadata, RevisionOptions opts) {
    if (content.empty()) raise(Errc::EmptyContent, "revise requires non-empty content");
    auto wl = g.write_lock();
    if (!g.has_item(item)) raise(Errc::UnknownItem, item.base().format());
    std::int64_t prev_seq = g.latest_seq(item);
    opts.bind_latest = true;
    Revision rev = g.create_revision(item, std::move(content), std::move(summary),
                                     std::move(metadata), std::move(opts));
    if (prev_seq >= 1)
        g.add_edge(rev.ref(), EdgeType::Supersedes, {rev.item, prev_seq});
    return rev;
}

TargetSet targets(const Graph& g, const BeliefAtom& atom) {
    TargetSet out;
    for (const auto& bound : g.bound_revisions()) {
        if (contains(bound.revision.content, atom))
            out.pairs.push_back({bound.binding.tag, bound.revision.ref()});
    }
    return out;
}

ContractionOutcome contract(Graph& g, const BeliefAtom& atom, std::optional<Timestamp> at) {
    auto wl = g.write_lock();
    ContractionOutcome outcome;
    outcome.targets = targets(g, atom);
    std::vector<Kref> items_to_deprecate;
    for (const auto& pair : outcome.targets.pairs) {
        g.remove_tag(pair.revision.item, pair.tag, at);
        outcome.removed_tags.emplace_back(pair.revision.item, pair.tag);
        items_to_deprecate.push_back(pair.revision.item);
    }
    std::sort(items_to_deprecate.begin(), items_to_deprecate.end());
    items_to_deprecate.erase(std::unique(items_to_deprecate.begin(), items_to_deprecate.end()),
                             items_to_deprecate.end());
    for (const Kref& item : items_to_deprecate) {
        g.set_deprecated(item, true, at);
        outcome.deprecated_items.push_back(item);
    }
    return outcome;
}

TagHistoryEntry rollback(Graph& g, const Kref& item, const std::string& tag, std::int64_t seq,
                         std::optional<Timestamp> at) {
    return g.bind_tag(item, tag, seq, at);
}

std::vector<TargetSet::Pair> conflict_scan(const Graph& g, const AtomSet& content) {
    std::vector<TargetSet::Pair> out;
    for (const auto& bound : g.bound_revisions()) {
        bool conflicting = false;
        for (const BeliefAtom& held : bound.revision.content) {
            for (const BeliefAtom& incoming : content) {
                if (atoms_conflict(held, incoming)) {
                    conflicting = true;
                    break;
                }
            }
            if (conflicting) break;
        }
        if (conflicting) out.push_back({bound.binding.tag, bound.revision.ref()});
    }
    return out;
}

} // namespace cogmem
