#include <doctest.h>

#include <random>

#include "cyclefactor/chains.hpp"
#include "cyclefactor/errors.hpp"
#include "oracles.hpp"

using namespace cyclefactor;

namespace {
RunConfig prac() { return RunConfig::practical_defaults(); }

JumbledParams params_for(const Graph& g, double p) {
    return JumbledParams::from_epsilon(p, 0.15, 0.5, g.vertex_count());
}
}  // namespace

TEST_CASE("1-chain on K4 is K4-minus with two removable tips") {
    Graph k4 = Graph::complete(4);
    Chain c = build_chain(k4, 1, VertexSet(4), prac());
    CHECK(c.length() == 1);
    CHECK(c.vertices().size() == 4);
    CHECK(c.removable().size() == 2);
    CHECK(c.validate(k4));
    // removing either removable vertex leaves a triangle (brute-checked)
    for (size_t k = 0; k < c.removable().size(); ++k) {
        std::vector<int> rest;
        for (int v : c.vertices())
            if (v != c.removable()[k]) rest.push_back(v);
        CHECK(oracles::has_triangle_factor(k4, rest));
    }
}

TEST_CASE("chains of zero copies are rejected") {
    Graph k = Graph::complete(10);
    CHECK_THROWS_AS(build_chain(k, 0, VertexSet(10), prac()), PreconditionError);
}

TEST_CASE("4-chain in a random graph: all five removals leave brute-verified factors") {
    Graph g = sample_gnp(2000, 0.3, 12);
    Chain c = build_chain(g, 4, VertexSet(2000), prac());
    CHECK(c.length() == 4);
    CHECK(c.vertices().size() == 13);
    CHECK(c.removable().size() == 5);
    CHECK(c.validate(g));
    for (int k = 0; k < 5; ++k) {
        std::vector<int> rest;
        for (int v : c.vertices())
            if (v != c.removable()[size_t(k)]) rest.push_back(v);
        // constructive factor agrees with the exhaustive oracle
        auto tris = c.factor_without(k);
        CHECK(tris.size() == 4);
        oracles::has_triangle_factor(g, rest);
        CHECK(oracles::has_triangle_factor(g, rest));
        VertexSet covered(2000);
        for (auto [x, y, z] : tris) {
            CHECK(g.has_edge(x, y));
            CHECK(g.has_edge(y, z));
            CHECK(g.has_edge(x, z));
            for (int v : {x, y, z}) {
                CHECK(!covered.contains(v));
                covered.insert(v);
            }
        }
    }
}

TEST_CASE("build_chain respects the forbidden set") {
    Graph g = sample_gnp(500, 0.4, 3);
    VertexSet forbidden(500);
    for (int v = 0; v < 250; ++v) forbidden.insert(v);
    Chain c = build_chain(g, 3, forbidden, prac());
    for (int v : c.vertices()) CHECK(v >= 250);
}

TEST_CASE("traversing triangle equals the triple-loop oracle's first hit") {
    Graph g = sample_gnp(600, 0.4, 7);
    VertexSet used(600);
    std::vector<Chain> chains;
    for (int i = 0; i < 3; ++i) {
        Chain c = build_chain(g, 2, used, prac());
        for (int v : c.vertices()) used.insert(v);
        chains.push_back(c);
    }
    auto got = find_traversing_triangle(g, chains[0], chains[1], chains[2]);
    auto want = oracles::traversing_triangle_loops(g, chains[0].removable(),
                                                   chains[1].removable(), chains[2].removable());
    REQUIRE(got.has_value() == want.has_value());
    if (got) CHECK(*got == *want);
}

TEST_CASE("traversing triangle: planted non-adjacent chains give NotFound") {
    // two disjoint K4-minus blocks with no edges between them
    std::vector<std::pair<int, int>> edges;
    auto add_k4m = [&](int base) {
        edges.push_back({base, base + 1});
        edges.push_back({base, base + 2});
        edges.push_back({base + 1, base + 2});
        edges.push_back({base + 1, base + 3});
        edges.push_back({base + 2, base + 3});
    };
    add_k4m(0);
    add_k4m(4);
    add_k4m(8);
    Graph g = Graph::from_edges(12, edges);
    RunConfig cfg = prac();
    Chain a = build_chain(g, 1, VertexSet(12), cfg);
    VertexSet f1 = VertexSet::of(12, a.vertices());
    Chain b = build_chain(g, 1, f1, cfg);
    VertexSet f2 = f1;
    for (int v : b.vertices()) f2.insert(v);
    Chain c = build_chain(g, 1, f2, cfg);
    CHECK(!find_traversing_triangle(g, a, b, c).has_value());
}

TEST_CASE("rebalance closure: every sampled subset factors exactly") {
    Graph g = sample_gnp(900, 0.5, 5);
    RunConfig cfg = prac();
    JumbledParams prm = params_for(g, 0.5);
    int t = 8, ell = 2;
    VertexSet used(1200);
    std::vector<Chain> longs;
    for (int i = 0; i < t; ++i) {
        Chain c = build_chain(g, ell, used, cfg);
        for (int v : c.vertices()) used.insert(v);
        longs.push_back(c);
    }
    VertexSet w = VertexSet::full(900);
    w -= used;
    ChainAbsorber ab = rebalance_chains(g, longs, w, prm, cfg);
    REQUIRE(ab.half_chains().size() == size_t(2 * t));
    for (const Chain& h : ab.half_chains()) CHECK(h.length() == ell / 2);

    std::mt19937_64 rng(17);
    for (int trial = 0; trial < 12; ++trial) {
        std::vector<int> ids(size_t(2 * t));
        for (int i = 0; i < 2 * t; ++i) ids[size_t(i)] = i;
        int pick = 1 + int(rng() % uint64_t(2 * t));
        for (int i = 0; i < pick; ++i)
            std::swap(ids[size_t(i)], ids[size_t(i + rng() % uint64_t(2 * t - i))]);
        std::vector<int> chosen(ids.begin(), ids.begin() + pick);
        auto res = ab.factor_for(chosen);  // audits cover/adjacency internally
        // recount: triangles cover exactly the chosen half-chains + used longs
        VertexSet want(900);
        for (int i : chosen)
            for (int v : ab.half_chains()[size_t(i)].vertices()) want.insert(v);
        for (int i : res.used_long)
            for (int v : longs[size_t(i)].vertices()) want.insert(v);
        VertexSet got(900);
        for (auto [x, y, z] : res.triangles)
            for (int v : {x, y, z}) got.insert(v);
        CHECK(got == want);
    }
    // the empty choice yields the empty factor
    auto empty = ab.factor_for({});
    CHECK(empty.triangles.empty());
    CHECK(empty.used_long.empty());
}

TEST_CASE("rebalance strict gates name the published window") {
    Graph g = sample_gnp(400, 0.4, 6);
    RunConfig strict = RunConfig::strict_defaults();
    JumbledParams prm = params_for(g, 0.4);
    std::vector<Chain> longs;
    VertexSet used(400);
    RunConfig prac_cfg = prac();
    for (int i = 0; i < 3; ++i) {
        Chain c = build_chain(g, 2, used, prac_cfg);
        for (int v : c.vertices()) used.insert(v);
        longs.push_back(c);
    }
    VertexSet w = VertexSet::full(400);
    w -= used;
    try {
        rebalance_chains(g, longs, w, prm, strict);
        FAIL("expected the strict gate to fire");
    } catch (const PreconditionError& e) {
        CHECK(std::string(e.what()).find("t >= 2000") != std::string::npos);
    }
}
