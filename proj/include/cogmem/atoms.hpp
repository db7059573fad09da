#pragma once
// Propositional units of the memory logic: ground triples
// <item, predicate, value>, plus the revision reference and edge types
// shared across the store, belief and traversal modules.

#include "cogmem/kref.hpp"

#include <string>
#include <tuple>
#include <vector>

namespace cogmem {

enum class Predicate { Summary, Topic, Keyword, Type, Tag, EdgeTypeName };

const char* predicate_name(Predicate p);
Predicate predicate_from_name(const std::string& name);

// A ground triple. Atoms compare by full triple equality; subjects are
// item-level krefs (no pin, no artifact).
struct BeliefAtom {
    Kref subject;
    Predicate predicate = Predicate::Summary;
    std::string value;

    static BeliefAtom summary(const Kref& item, std::string value) {
        return {item.base(), Predicate::Summary, std::move(value)};
    }

    friend bool operator==(const BeliefAtom& a, const BeliefAtom& b) {
        return a.predicate == b.predicate && a.value == b.value && a.subject == b.subject;
    }
    friend bool operator!=(const BeliefAtom& a, const BeliefAtom& b) { return !(a == b); }
    friend bool operator<(const BeliefAtom& a, const BeliefAtom& b) {
        return std::tie(a.subject, a.predicate, a.value) <
               std::tie(b.subject, b.predicate, b.value);
    }
};

// Two atoms conflict iff same subject and predicate but different value.
inline bool atoms_conflict(const BeliefAtom& a, const BeliefAtom& b) {
    return a.subject == b.subject && a.predicate == b.predicate && a.value != b.value;
}

using AtomSet = std::vector<BeliefAtom>; // kept sorted and deduplicated

void normalize(AtomSet& atoms);
bool contains(const AtomSet& atoms, const BeliefAtom& atom);

// Address of one revision: the item's base kref plus its sequence number.
struct RevisionRef {
    Kref item; // base form
    std::int64_t seq = 0;

    std::string format() const { return item.with_pin(seq).format(); }

    friend bool operator==(const RevisionRef& a, const RevisionRef& b) {
        return a.seq == b.seq && a.item == b.item;
    }
    friend bool operator!=(const RevisionRef& a, const RevisionRef& b) { return !(a == b); }
    friend bool operator<(const RevisionRef& a, const RevisionRef& b) {
        return std::tie(a.item, a.seq) < std::tie(b.item, b.seq);
    }
};

enum class EdgeType { DependsOn, DerivedFrom, Supersedes, Referenced, Contains, CreatedFrom };

const char* edge_type_name(EdgeType t);
EdgeType edge_type_from_name(const std::string& name);

inline constexpr EdgeType kAllEdgeTypes[] = {
    EdgeType::DependsOn,  EdgeType::DerivedFrom, EdgeType::Supersedes,
    EdgeType::Referenced, EdgeType::Contains,    EdgeType::CreatedFrom,
};

} // namespace cogmem
