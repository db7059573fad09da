#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "cogmem/traversal.hpp"

#include <map>
#include <queue>
#include <random>

using namespace cogmem;

namespace {

struct Fixture {
    std::shared_ptr<LogicalClock> clock = std::make_shared<LogicalClock>(100);
    Graph g{clock};

    RevisionRef node(const std::string& name, const std::string& kind = "fact") {
        Kref k = Kref::make("nav", {"graph"}, name, kind);
        g.ensure_item(k);
        Revision rev = g.create_revision(k, {BeliefAtom::summary(k, name)}, name);
        return rev.ref();
    }
};

// Brute-force reachability by depth over an explicit adjacency list.
std::map<std::string, int> oracle_reachable(
    const Graph& g, const RevisionRef& origin, Direction dir,
    const std::set<EdgeType>& types, int depth) {
    std::map<std::string, int> dist;
    std::queue<std::pair<RevisionRef, int>> q;
    q.push({origin, 0});
    dist[origin.format()] = 0;
    while (!q.empty()) {
        auto [cur, d] = q.front();
        q.pop();
        if (d == depth) continue;
        std::vector<RevisionRef> next;
        if (dir == Direction::Outgoing || dir == Direction::Both)
            for (const Edge& e : g.edges_from(cur))
                if (types.empty() || types.count(e.edge_type)) next.push_back(e.target);
        if (dir == Direction::Incoming || dir == Direction::Both)
            for (const Edge& e : g.edges_to(cur))
                if (types.empty() || types.count(e.edge_type)) next.push_back(e.source);
        for (const RevisionRef& n : next) {
            if (dist.count(n.format())) continue;
            dist[n.format()] = d + 1;
            q.push({n, d + 1});
        }
    }
    dist.erase(origin.format());
    return dist;
}

} // namespace

TEST_CASE("isolated node traverses to nothing") {
    Fixture f;
    RevisionRef a = f.node("solo");
    TraversalResult r = traverse(f.g, a, Direction::Both);
    CHECK(r.origin == a);
    CHECK(r.visited.empty());
}

TEST_CASE("path graph: depth-2 outgoing from the head") {
    Fixture f;
    RevisionRef a = f.node("a"), b = f.node("b"), c = f.node("c"), d = f.node("d");
    f.g.add_edge(a, EdgeType::DependsOn, b);
    f.g.add_edge(b, EdgeType::DependsOn, c);
    f.g.add_edge(c, EdgeType::DependsOn, d);

    TraversalResult r = traverse(f.g, a, Direction::Outgoing, {}, 2);
    REQUIRE(r.visited.size() == 2);
    CHECK(r.visited[0].ref == b);
    CHECK(r.visited[0].depth == 1);
    CHECK(r.visited[1].ref == c);
    CHECK(r.visited[1].depth == 2);
}

TEST_CASE("depth limits are enforced") {
    Fixture f;
    RevisionRef a = f.node("a");
    CHECK_THROWS_AS(traverse(f.g, a, Direction::Outgoing, {}, 0), Error);
    CHECK_THROWS_AS(traverse(f.g, a, Direction::Outgoing, {}, 21), Error);
    CHECK_NOTHROW(traverse(f.g, a, Direction::Outgoing, {}, 20));
    CHECK_THROWS_AS(analyze_impact(f.g, a, 21), Error);
}

TEST_CASE("unknown origin raises") {
    Fixture f;
    f.node("only");
    Kref ghost = Kref::make("nav", {"graph"}, "ghost", "fact");
    f.g.ensure_item(ghost);
    CHECK_THROWS_AS(traverse(f.g, RevisionRef{ghost, 1}, Direction::Both), Error);
}

TEST_CASE("edge type filter narrows the closure") {
    Fixture f;
    RevisionRef a = f.node("a"), b = f.node("b"), c = f.node("c");
    f.g.add_edge(a, EdgeType::DependsOn, b);
    f.g.add_edge(a, EdgeType::Referenced, c);
    TraversalResult rising = traverse(f.g, a, Direction::Outgoing, {EdgeType::DependsOn}, 5);
    REQUIRE(rising.visited.size() == 1);
    CHECK(rising.visited[0].ref == b);
    CHECK(rising.visited[0].via == EdgeType::DependsOn);
}

TEST_CASE("cycle safety: traversal terminates and visits once") {
    Fixture f;
    RevisionRef a = f.node("a"), b = f.node("b"), c = f.node("c");
    f.g.add_edge(a, EdgeType::Referenced, b);
    f.g.add_edge(b, EdgeType::Referenced, c);
    f.g.add_edge(c, EdgeType::Referenced, a);
    TraversalResult r = traverse(f.g, a, Direction::Outgoing, {}, 20);
    CHECK(r.visited.size() == 2);
}

TEST_CASE("node cap bounds the visit count") {
    Fixture f;
    RevisionRef hub = f.node("hub");
    for (int i = 0; i < 10; ++i)
        f.g.add_edge(hub, EdgeType::Referenced, f.node("leaf" + std::to_string(i)));
    TraversalResult r = traverse(f.g, hub, Direction::Outgoing, {}, 5, 4);
    CHECK(r.visited.size() == 4);
}

TEST_CASE("traversal equals brute-force reachability on random graphs") {
    std::mt19937 rng(31);
    for (int trial = 0; trial < 5; ++trial) {
        Fixture f;
        std::vector<RevisionRef> nodes;
        for (int i = 0; i < 30; ++i) nodes.push_back(f.node("n" + std::to_string(i)));
        std::uniform_int_distribution<std::size_t> pick(0, nodes.size() - 1);
        for (int e = 0; e < 60; ++e) {
            std::size_t s = pick(rng), t = pick(rng);
            if (s == t) continue;
            EdgeType type = static_cast<EdgeType>(rng() % 6);
            if (type == EdgeType::Supersedes) type = EdgeType::Referenced;
            f.g.add_edge(nodes[s], type, nodes[t]);
        }
        for (Direction dir : {Direction::Outgoing, Direction::Incoming, Direction::Both}) {
            for (int depth : {1, 3, 10, 20}) {
                RevisionRef origin = nodes[pick(rng)];
                auto expected = oracle_reachable(f.g, origin, dir, {}, depth);
                TraversalResult got = traverse(f.g, origin, dir, {}, depth);
                CHECK(got.visited.size() == expected.size());
                for (const auto& v : got.visited) {
                    auto it = expected.find(v.ref.format());
                    REQUIRE(it != expected.end());
                    CHECK(it->second == v.depth);
                }
                // BFS order: non-decreasing depth.
                for (std::size_t i = 1; i < got.visited.size(); ++i)
                    CHECK(got.visited[i - 1].depth <= got.visited[i].depth);
            }
        }
    }
}

TEST_CASE("shortest path basics") {
    Fixture f;
    RevisionRef a = f.node("a"), b = f.node("b"), c = f.node("c"), d = f.node("d");
    f.g.add_edge(a, EdgeType::DependsOn, b);
    f.g.add_edge(b, EdgeType::DependsOn, c);

    auto self = shortest_path(f.g, a, a);
    REQUIRE(self.has_value());
    CHECK(self->empty());

    auto path = shortest_path(f.g, a, c);
    REQUIRE(path.has_value());
    REQUIRE(path->size() == 2);
    CHECK((*path)[0].ref == b);
    CHECK((*path)[1].ref == c);

    CHECK_FALSE(shortest_path(f.g, a, d).has_value());
}

TEST_CASE("shortest path ignores direction and breaks ties lexicographically") {
    Fixture f;
    // Two 2-hop routes from start to goal, through mid-a and mid-z.
    RevisionRef start = f.node("start"), goal = f.node("goal");
    RevisionRef mid_a = f.node("mid-a"), mid_z = f.node("mid-z");
    f.g.add_edge(start, EdgeType::Referenced, mid_z);
    f.g.add_edge(mid_z, EdgeType::Referenced, goal);
    f.g.add_edge(mid_a, EdgeType::Referenced, start); // reversed direction still usable
    f.g.add_edge(goal, EdgeType::Referenced, mid_a);

    auto path = shortest_path(f.g, start, goal);
    REQUIRE(path.has_value());
    REQUIRE(path->size() == 2);
    CHECK((*path)[0].ref == mid_a); // lexicographically least intermediate
}

TEST_CASE("shortest path length equals brute-force BFS distance") {
    std::mt19937 rng(47);
    Fixture f;
    std::vector<RevisionRef> nodes;
    for (int i = 0; i < 25; ++i) nodes.push_back(f.node("p" + std::to_string(i)));
    std::uniform_int_distribution<std::size_t> pick(0, nodes.size() - 1);
    for (int e = 0; e < 40; ++e) {
        std::size_t s = pick(rng), t = pick(rng);
        if (s == t) continue;
        f.g.add_edge(nodes[s], EdgeType::Referenced, nodes[t]);
    }
    for (int trial = 0; trial < 20; ++trial) {
        RevisionRef a = nodes[pick(rng)], b = nodes[pick(rng)];
        auto expected = oracle_reachable(f.g, a, Direction::Both, {}, 20);
        auto path = shortest_path(f.g, a, b);
        if (a == b) {
            REQUIRE(path.has_value());
            CHECK(path->empty());
        } else if (expected.count(b.format())) {
            REQUIRE(path.has_value());
            CHECK(static_cast<int>(path->size()) == expected[b.format()]);
        } else {
            CHECK_FALSE(path.has_value());
        }
    }
}

TEST_CASE("impact analysis covers the preference-update scenario") {
    Fixture f;
    // color-pref r1 holds the preference; palette r1 depends on it; a
    // revision of color-pref supersedes r1.
    Kref color = Kref::make("nav", {"beliefs"}, "color-pref", "decision");
    Kref palette = Kref::make("nav", {"beliefs"}, "palette", "decision");
    f.g.ensure_item(color);
    f.g.ensure_item(palette);
    Revision c1 = f.g.create_revision(color, {BeliefAtom::summary(color, "warm tones")}, "warm");
    Revision p1 = f.g.create_revision(palette,
                                      {BeliefAtom::summary(palette, "earth-tone palette")},
                                      "palette");
    f.g.add_edge(p1.ref(), EdgeType::DependsOn, c1.ref());
    Revision c2 = f.g.create_revision(color, {BeliefAtom::summary(color, "cool tones")}, "cool");
    f.g.add_edge(c2.ref(), EdgeType::Supersedes, c1.ref());

    TraversalResult impact = analyze_impact(f.g, c2.ref(), 2);
    REQUIRE(impact.visited.size() == 1);
    CHECK(impact.visited[0].ref == p1.ref());
}

TEST_CASE("impact analysis is empty for an unconnected revision") {
    Fixture f;
    RevisionRef lone = f.node("lone");
    CHECK(analyze_impact(f.g, lone, 5).visited.empty());
}

TEST_CASE("impact surfaces a full derived-from authoring chain") {
    Fixture f;
    std::vector<RevisionRef> versions;
    for (int i = 1; i <= 6; ++i) versions.push_back(f.node("v" + std::to_string(i), "doc"));
    for (int i = 1; i < 6; ++i)
        f.g.add_edge(versions[static_cast<std::size_t>(i)], EdgeType::DerivedFrom,
                     versions[static_cast<std::size_t>(i - 1)]);

    TraversalResult impact = analyze_impact(f.g, versions[5], 10);
    CHECK(impact.visited.size() == 5);
    for (int i = 0; i < 5; ++i) CHECK(impact.contains(versions[static_cast<std::size_t>(i)]));
}

TEST_CASE("impact excludes associative and bundle edges") {
    Fixture f;
    RevisionRef core = f.node("core"), ref = f.node("ref"), bundle = f.node("bun", "bundle");
    f.g.add_edge(ref, EdgeType::Referenced, core);
    f.g.add_edge(bundle, EdgeType::Contains, core);
    CHECK(analyze_impact(f.g, core, 10).visited.empty());
}

TEST_CASE("impact equals filtered bidirectional traversal minus the origin item") {
    std::mt19937 rng(61);
    Fixture f;
    std::vector<RevisionRef> nodes;
    for (int i = 0; i < 20; ++i) nodes.push_back(f.node("m" + std::to_string(i)));
    std::uniform_int_distribution<std::size_t> pick(0, nodes.size() - 1);
    for (int e = 0; e < 30; ++e) {
        std::size_t s = pick(rng), t = pick(rng);
        if (s == t) continue;
        EdgeType types[] = {EdgeType::DependsOn, EdgeType::DerivedFrom, EdgeType::Referenced,
                            EdgeType::Contains};
        f.g.add_edge(nodes[s], types[rng() % 4], nodes[t]);
    }
    RevisionRef origin = nodes[pick(rng)];
    std::set<EdgeType> impact_types{EdgeType::DependsOn, EdgeType::DerivedFrom,
                                    EdgeType::Supersedes};
    TraversalResult manual = traverse(f.g, origin, Direction::Both, impact_types, 10);
    std::set<RevisionRef> expected;
    for (const auto& v : manual.visited)
        if (!(v.ref.item == origin.item)) expected.insert(v.ref);
    CHECK(analyze_impact(f.g, origin, 10).refs() == expected);
}

TEST_CASE("provenance of a leaf is empty; chains resolve to the first source") {
    Fixture f;
    std::vector<RevisionRef> versions;
    for (int i = 1; i <= 6; ++i) versions.push_back(f.node("w" + std::to_string(i), "doc"));
    for (int i = 1; i < 6; ++i)
        f.g.add_edge(versions[static_cast<std::size_t>(i)], EdgeType::DerivedFrom,
                     versions[static_cast<std::size_t>(i - 1)]);

    CHECK(provenance_summary(f.g, versions[0]).visited.empty());
    TraversalResult prov = provenance_summary(f.g, versions[5]);
    CHECK(prov.visited.size() == 5);
    CHECK(prov.contains(versions[0]));
}

TEST_CASE("diamond provenance is deduplicated and matches brute force") {
    Fixture f;
    RevisionRef top = f.node("top"), left = f.node("left"), right = f.node("right"),
                root = f.node("root");
    f.g.add_edge(top, EdgeType::DerivedFrom, left);
    f.g.add_edge(top, EdgeType::CreatedFrom, right);
    f.g.add_edge(left, EdgeType::DerivedFrom, root);
    f.g.add_edge(right, EdgeType::DerivedFrom, root);

    TraversalResult prov = provenance_summary(f.g, top);
    std::set<EdgeType> types{EdgeType::DerivedFrom, EdgeType::CreatedFrom};
    auto expected = oracle_reachable(f.g, top, Direction::Outgoing, types, 10);
    CHECK(prov.visited.size() == expected.size());
    CHECK(prov.visited.size() == 3); // root counted once
}

TEST_CASE("dot rendering includes visited nodes and their edges") {
    Fixture f;
    RevisionRef a = f.node("a"), b = f.node("b");
    f.g.add_edge(a, EdgeType::DependsOn, b);
    TraversalResult r = traverse(f.g, a, Direction::Outgoing, {}, 5);
    std::string dot = to_dot(f.g, r);
    CHECK(dot.find("digraph") != std::string::npos);
    CHECK(dot.find("DEPENDS_ON") != std::string::npos);
}
