#include "cogmem/atoms.hpp"

#include "cogmem/errors.hpp"

#include <algorithm>

namespace cogmem {

const char* predicate_name(Predicate p) {
    switch (p) {
        case Predicate::Summary: return "summary";
        case Predicate::Topic: return "topic";
        case Predicate::Keyword: return "keyword";
        case Predicate::Type: return "type";
        case Predicate::Tag: return "tag";
        case Predicate::EdgeTypeName: return "edge-type";
    }
    return "summary";
}

Predicate predicate_from_name(const std::string& name) {
    if (name == "summary") return Predicate::Summary;
    if (name == "topic") return Predicate::Topic;
    if (name == "keyword") return Predicate::Keyword;
    if (name == "type") return Predicate::Type;
    if (name == "tag") return Predicate::Tag;
    if (name == "edge-type") return Predicate::EdgeTypeName;
    raise(Errc::InvalidOption, "unknown predicate \"" + name + "\"");
}

void normalize(AtomSet& atoms) {
    std::sort(atoms.begin(), atoms.end());
    atoms.erase(std::unique(atoms.begin(), atoms.end()), atoms.end());
}

bool contains(const AtomSet& atoms, const BeliefAtom& atom) {
    return std::binary_search(atoms.begin(), atoms.end(), atom);
}

const char* edge_type_name(EdgeType t) {
    switch (t) {
        case EdgeType::DependsOn: return "DEPENDS_ON";
        case EdgeType::DerivedFrom: return "DERIVED_FROM";
        case EdgeType::Supersedes: return "SUPERSEDES";
        case EdgeType::Referenced: return "REFERENCED";
        case EdgeType::Contains: return "CONTAINS";
        case EdgeType::CreatedFrom: return "CREATED_FROM";
    }
    return "REFERENCED";
}

EdgeType edge_type_from_name(const std::string& name) {
    if (name == "DEPENDS_ON") return EdgeType::DependsOn;
    if (name == "DERIVED_FROM") return EdgeType::DerivedFrom;
    if (name == "SUPERSEDES") return EdgeType::Supersedes;
    if (name == "REFERENCED") return EdgeType::Referenced;
    if (name == "CONTAINS") return EdgeType::Contains;
    if (name == "CREATED_FROM") return EdgeType::CreatedFrom;
    raise(Errc::InvalidOption, "unknown edge type \"" + name + "\"");
}

} // namespace cogmem
