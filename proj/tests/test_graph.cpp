#include <catch_amalgamated.hpp>

#include <random>

#include "qmn/graph.hpp"
#include "support/oracles.hpp"

using namespace qmn;
using oracles::Rng;

namespace {
SiteGraph path_graph(int n) {
    std::vector<std::pair<int, int>> edges;
    for (int v = 0; v + 1 < n; ++v) edges.emplace_back(v, v + 1);
    return SiteGraph(n, std::vector<std::size_t>(static_cast<std::size_t>(n), 2), edges);
}
}  // namespace

TEST_CASE("SiteGraph validates its construction", "[graph]") {
    REQUIRE_THROWS_AS(SiteGraph(0, {}, {}), ValidationError);
    REQUIRE_THROWS_AS(SiteGraph(2, {2}, {}), ValidationError);
    REQUIRE_THROWS_AS(SiteGraph(2, {2, 1}, {}), ValidationError);
    REQUIRE_THROWS_AS(SiteGraph(2, {2, 2}, {{0, 0}}), ValidationError);
    REQUIRE_THROWS_AS(SiteGraph(2, {2, 2}, {{0, 2}}), ValidationError);
    REQUIRE_THROWS_AS(SiteGraph(2, {2, 2}, {{0, 1}, {1, 0}}), ValidationError);
}

TEST_CASE("neighbors on the path graph", "[graph]") {
    const SiteGraph g = path_graph(5);
    REQUIRE(neighbors(g, {2}) == VertexSet{1, 3});
    REQUIRE(neighbors(g, {0, 1, 2, 3, 4}) == VertexSet{});
    REQUIRE(neighbors(g, {0, 1}) == VertexSet{2});
    REQUIRE_THROWS_AS(neighbors(g, {7}), ValidationError);
}

TEST_CASE("neighbors never intersects its argument", "[graph]") {
    Rng rng(201);
    std::uniform_int_distribution<int> nv(1, 9);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int rep = 0; rep < 100; ++rep) {
        const SiteGraph g = oracles::random_graph(rng, nv(rng), u(rng));
        VertexSet subset;
        for (int v = 0; v < g.vertex_count(); ++v) {
            if (u(rng) < 0.4) subset.push_back(v);
        }
        if (subset.empty()) subset.push_back(0);
        REQUIRE(vset::disjoint(neighbors(g, subset), subset));
    }
}

TEST_CASE("maximal cliques of a path", "[graph]") {
    const std::vector<VertexSet> cliques = maximal_cliques(path_graph(3));
    REQUIRE(cliques == std::vector<VertexSet>{{0, 1}, {1, 2}});
}

TEST_CASE("maximal clique of a triangle", "[graph]") {
    const SiteGraph g(3, {2, 2, 2}, {{0, 1}, {1, 2}, {0, 2}});
    REQUIRE(maximal_cliques(g) == std::vector<VertexSet>{{0, 1, 2}});
}

TEST_CASE("maximal cliques match exhaustive enumeration", "[graph]") {
    Rng rng(202);
    std::uniform_int_distribution<int> nv(1, 8);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int rep = 0; rep < 120; ++rep) {
        const SiteGraph g = oracles::random_graph(rng, nv(rng), u(rng));
        REQUIRE(maximal_cliques(g) == oracles::brute_maximal_cliques(g));
    }
}

TEST_CASE("separator triples on the five-site path", "[graph]") {
    const SiteGraph g = path_graph(5);

    const auto triples1 = separator_triples(g, 1);
    REQUIRE(triples1.size() == 5);
    REQUIRE(triples1[0].a == VertexSet{0});
    REQUIRE(triples1[0].b == VertexSet{1});
    REQUIRE(triples1[0].c == VertexSet{2, 3, 4});

    // max_a = 2 adds the connected pairs whose remainder is nonempty
    const auto triples2 = separator_triples(g, 2);
    REQUIRE(triples2.size() > triples1.size());
    for (const SeparatorTriple& t : triples2) {
        REQUIRE(!t.a.empty());
        REQUIRE(!t.c.empty());
        REQUIRE(t.b == neighbors(g, t.a));
        REQUIRE(oracles::separates(g, t.a, t.b, t.c));
    }
}

TEST_CASE("complete graphs admit no separator triples", "[graph]") {
    const SiteGraph k3(3, {2, 2, 2}, {{0, 1}, {1, 2}, {0, 2}});
    REQUIRE(separator_triples(k3, 2).empty());
}

TEST_CASE("separator triples match the exhaustive oracle", "[graph]") {
    const SiteGraph g = path_graph(5);
    const auto got = separator_triples(g, 2);

    // oracle: enumerate every subset mask, keep connected ones of size <= 2
    std::vector<SeparatorTriple> want;
    for (unsigned mask = 1; mask < 32; ++mask) {
        VertexSet a;
        for (int v = 0; v < 5; ++v) {
            if (mask & (1u << v)) a.push_back(v);
        }
        if (a.size() > 2 || !is_connected_subset(g, a)) continue;
        const VertexSet b = neighbors(g, a);
        VertexSet c;
        for (int v = 0; v < 5; ++v) {
            if (!vset::contains(a, v) && !vset::contains(b, v)) c.push_back(v);
        }
        if (c.empty()) continue;
        want.push_back({a, b, c});
    }
    REQUIRE(got.size() == want.size());
    for (const SeparatorTriple& t : want) {
        const bool found = std::any_of(got.begin(), got.end(), [&](const SeparatorTriple& s) {
            return s.a == t.a && s.b == t.b && s.c == t.c;
        });
        REQUIRE(found);
    }
}

TEST_CASE("emitted triples always separate, across random graphs", "[graph]") {
    Rng rng(203);
    std::uniform_int_distribution<int> nv(2, 10);
    std::uniform_real_distribution<double> u(0.0, 0.6);
    for (int rep = 0; rep < 80; ++rep) {
        const SiteGraph g = oracles::random_graph(rng, nv(rng), u(rng));
        for (const SeparatorTriple& t : separator_triples(g, 2)) {
            REQUIRE(oracles::separates(g, t.a, t.b, t.c));
            REQUIRE(vset::disjoint(t.a, t.b));
            REQUIRE(vset::disjoint(t.a, t.c));
            REQUIRE(vset::disjoint(t.b, t.c));
            REQUIRE(vset::set_union(vset::set_union(t.a, t.b), t.c) == g.all_vertices());
        }
    }
}

TEST_CASE("separator_triples validates max_a", "[graph]") {
    REQUIRE_THROWS_AS(separator_triples(path_graph(3), 0), ValidationError);
}

TEST_CASE("forest detection", "[graph]") {
    REQUIRE(is_forest(path_graph(6)));
    const SiteGraph cycle(3, {2, 2, 2}, {{0, 1}, {1, 2}, {0, 2}});
    REQUIRE(!is_forest(cycle));
}
