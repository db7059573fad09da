#pragma once
// traversal: bounded BFS over typed edges, shortest paths, transitive
// impact analysis and provenance summaries. Read-only; cycle-safe via a
// visited set; depth is limited to 1..20 (default 10).

#include "cogmem/store.hpp"

#include <set>

namespace cogmem {

inline constexpr int kDefaultTraversalDepth = 10;
inline constexpr int kMinTraversalDepth = 1;
inline constexpr int kMaxTraversalDepth = 20;

enum class Direction { Outgoing, Incoming, Both };

const char* direction_name(Direction d);

struct TraversalResult {
    struct Visit {
        RevisionRef ref;
        int depth = 0;
        EdgeType via = EdgeType::Referenced; // edge type that first reached it
    };
    RevisionRef origin;
    Direction direction = Direction::Outgoing;
    std::vector<Visit> visited; // BFS order, origin excluded, no duplicates

    bool contains(const RevisionRef& ref) const {
        for (const Visit& v : visited)
            if (v.ref == ref) return true;
        return false;
    }
    std::set<RevisionRef> refs() const {
        std::set<RevisionRef> out;
        for (const Visit& v : visited) out.insert(v.ref);
        return out;
    }
};

struct PathHop {
    RevisionRef ref;
    EdgeType via = EdgeType::Referenced;
};

// BFS closure over the selected edge types and direction up to `depth`.
// An empty `edge_types` set means all six types. Optional `node_cap`
// bounds the number of visited nodes.
TraversalResult traverse(const Graph& g, const RevisionRef& origin, Direction direction,
                         const std::set<EdgeType>& edge_types = {},
                         int depth = kDefaultTraversalDepth,
                         std::optional<std::size_t> node_cap = std::nullopt);

// Minimum-hop undirected path from `a` to `b`; hops listed after `a`.
// Ties broken by lexicographic kref order of intermediate nodes.
// Disconnected pairs yield nullopt.
std::optional<std::vector<PathHop>> shortest_path(const Graph& g, const RevisionRef& a,
                                                  const RevisionRef& b);

// Transitive dependency cascade: closure over DEPENDS_ON, DERIVED_FROM and
// SUPERSEDES edges traversed in both directions, with the origin item's
// own revisions used as bridges but excluded from the reported set.
TraversalResult analyze_impact(const Graph& g, const RevisionRef& origin,
                               int depth = kDefaultTraversalDepth);

// Outgoing closure over DERIVED_FROM and CREATED_FROM.
TraversalResult provenance_summary(const Graph& g, const RevisionRef& origin,
                                   int depth = kDefaultTraversalDepth);

// DOT rendering of a traversal result for visualization.
std::string to_dot(const Graph& g, const TraversalResult& result);

} // namespace cogmem
