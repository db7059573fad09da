#include "cogmem/traversal.hpp"

#include <algorithm>
#include <cctype>
#include <deque>
#include <map>
#include <sstream>

namespace cogmem {

const char* direction_name(Direction d) {
    switch (d) {
        case Direction::Outgoing: return "outgoing";
        case Direction::Incoming: return "incoming";
        case Direction::Both: return "both";
    }
    return "outgoing";
}

namespace {

void check_depth(int depth) {
    if (depth < kMinTraversalDepth || depth > kMaxTraversalDepth)
        raise(Errc::DepthOutOfRange, "depth must be in [1, 20], got " + std::to_string(depth));
}

struct Neighbor {
    RevisionRef ref;
    EdgeType via;
};

// Neighbors of `ref` under direction/type filters, in deterministic
// (kref, seq) order so BFS output and path tie-breaks are stable.
std::vector<Neighbor> neighbors(const Graph& g, const RevisionRef& ref, Direction direction,
                                const std::set<EdgeType>& types) {
    std::vector<Neighbor> out;
    auto want = [&types](EdgeType t) { return types.empty() || types.count(t) > 0; };
    if (direction == Direction::Outgoing || direction == Direction::Both) {
        for (const Edge& e : g.edges_from(ref))
            if (want(e.edge_type)) out.push_back({e.target, e.edge_type});
    }
    if (direction == Direction::Incoming || direction == Direction::Both) {
        for (const Edge& e : g.edges_to(ref))
            if (want(e.edge_type)) out.push_back({e.source, e.edge_type});
    }
    std::sort(out.begin(), out.end(), [](const Neighbor& a, const Neighbor& b) {
        return a.ref < b.ref;
    });
    return out;
}

} // namespace

TraversalResult traverse(const Graph& g, const RevisionRef& origin, Direction direction,
                         const std::set<EdgeType>& edge_types, int depth,
                         std::optional<std::size_t> node_cap) {
    check_depth(depth);
    g.revision(origin); // UnknownRevision check

    TraversalResult result;
    result.origin = origin;
    result.direction = direction;

    std::set<RevisionRef> seen{origin};
    std::deque<std::pair<RevisionRef, int>> frontier{{origin, 0}};
    while (!frontier.empty()) {
        auto [current, d] = frontier.front();
        frontier.pop_front();
        if (d == depth) continue;
        for (const Neighbor& n : neighbors(g, current, direction, edge_types)) {
            if (seen.count(n.ref)) continue;
            seen.insert(n.ref);
            result.visited.push_back({n.ref, d + 1, n.via});
            if (node_cap && result.visited.size() >= *node_cap) return result;
            frontier.emplace_back(n.ref, d + 1);
        }
    }
    return result;
}

std::optional<std::vector<PathHop>> shortest_path(const Graph& g, const RevisionRef& a,
                                                  const RevisionRef& b) {
    g.revision(a);
    g.revision(b);
    if (a == b) return std::vector<PathHop>{};

    // BFS over undirected edges, exploring neighbors in lexicographic
    // order; the first parent assignment is the lexicographically least
    // minimal-hop predecessor chain.
    std::map<RevisionRef, PathHop> parent; // child -> (parent, via)
    std::deque<RevisionRef> frontier{a};
    std::set<RevisionRef> seen{a};
    while (!frontier.empty()) {
        RevisionRef current = frontier.front();
        frontier.pop_front();
        for (const Neighbor& n : neighbors(g, current, Direction::Both, {})) {
            if (seen.count(n.ref)) continue;
            seen.insert(n.ref);
            parent[n.ref] = {current, n.via};
            if (n.ref == b) {
                std::vector<PathHop> path;
                RevisionRef walk = b;
                while (!(walk == a)) {
                    auto& p = parent[walk];
                    path.push_back({walk, p.via});
                    walk = p.ref;
                }
                std::reverse(path.begin(), path.end());
                return path;
            }
            frontier.push_back(n.ref);
        }
    }
    return std::nullopt;
}

TraversalResult analyze_impact(const Graph& g, const RevisionRef& origin, int depth) {
    static const std::set<EdgeType> kImpactEdges{EdgeType::DependsOn, EdgeType::DerivedFrom,
                                                 EdgeType::Supersedes};
    TraversalResult full = traverse(g, origin, Direction::Both, kImpactEdges, depth);
    TraversalResult result;
    result.origin = full.origin;
    result.direction = Direction::Both;
    for (const auto& visit : full.visited) {
        if (visit.ref.item == origin.item) continue; // versions of the origin, not dependents
        result.visited.push_back(visit);
    }
    return result;
}

TraversalResult provenance_summary(const Graph& g, const RevisionRef& origin, int depth) {
    static const std::set<EdgeType> kProvenanceEdges{EdgeType::DerivedFrom,
                                                     EdgeType::CreatedFrom};
    return traverse(g, origin, Direction::Outgoing, kProvenanceEdges, depth);
}

std::string to_dot(const Graph& g, const TraversalResult& result) {
    std::ostringstream out;
    out << "digraph traversal {\n";
    out << "  rankdir=LR;\n";
    auto node_id = [](const RevisionRef& ref) {
        std::string id = ref.format();
        for (char& c : id)
            if (!std::isalnum(static_cast<unsigned char>(c))) c = '_';
        return id;
    };
    out << "  \"" << node_id(result.origin) << "\" [label=\"" << result.origin.format()
        << "\", shape=box, style=bold];\n";
    std::set<RevisionRef> nodes = result.refs();
    nodes.insert(result.origin);
    for (const auto& visit : result.visited) {
        out << "  \"" << node_id(visit.ref) << "\" [label=\"" << visit.ref.format()
            << "\\ndepth " << visit.depth << "\"];\n";
    }
    for (const Edge& e : g.edges()) {
        if (!nodes.count(e.source) || !nodes.count(e.target)) continue;
        out << "  \"" << node_id(e.source) << "\" -> \"" << node_id(e.target) << "\" [label=\""
            << edge_type_name(e.edge_type) << "\"];\n";
    }
    out << "}\n";
    return out.str();
}

} // namespace cogmem
