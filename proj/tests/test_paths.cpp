#include <doctest.h>

#include <queue>
#include <random>

#include "cyclefactor/errors.hpp"
#include "cyclefactor/graph.hpp"
#include "cyclefactor/paths.hpp"

using namespace cyclefactor;

namespace {
RunConfig prac() { return RunConfig::practical_defaults(); }

// BFS layer oracle: does an A-B path of length ell with inner vertices in C
// exist at all?
bool layered_path_exists(const Graph& g, const VertexSet& a, const VertexSet& b,
                         const VertexSet& c, int ell) {
    // layer[k] = vertices reachable from A along k edges with intermediate
    // vertices in C (ignoring the distinctness constraint, which only makes
    // this an over-approximation and thus a sound refutation oracle)
    VertexSet layer = a;
    for (int k = 0; k < ell; ++k) {
        VertexSet next(g.vertex_count());
        for (int v = layer.first(); v != -1; v = layer.next(v)) {
            VertexSet nb = g.neighbor_set(v);
            next |= nb;
        }
        if (k + 1 < ell) next &= c;
        layer = next;
    }
    return layer.intersects(b);
}
}  // namespace

TEST_CASE("find_good_vertex: complete graph picks the lowest id") {
    Graph k = Graph::complete(50);
    VertexSet w = VertexSet::full(50);
    VertexSet u(50);
    for (int i = 10; i < 20; ++i) u.insert(i);
    CHECK(find_good_vertex(k, w, {&u}, 49.0 / 50.0) == 0);
}

TEST_CASE("find_good_vertex: edgeless graph reports NoGoodVertex") {
    Graph g(20);
    VertexSet w = VertexSet::full(20);
    VertexSet u(20);
    u.insert(3);
    CHECK_THROWS_AS(find_good_vertex(g, w, {&u}, 0.5), NotFoundError);
}

TEST_CASE("find_good_vertex agrees with a brute scan") {
    Graph g = sample_gnp(1000, 0.3, 2);
    VertexSet w(1000);
    for (int i = 0; i < 500; ++i) w.insert(i);
    std::mt19937_64 rng(7);
    std::vector<VertexSet> targets(3, VertexSet(1000));
    for (auto& t : targets)
        for (int k = 0; k < 100; ++k) t.insert(int(rng() % 1000));
    std::vector<const VertexSet*> ptr{&targets[0], &targets[1], &targets[2]};
    int got = find_good_vertex(g, w, ptr, 0.3);
    // oracle: full ascending scan
    int want = -1;
    for (int v = 0; v < 500 && want == -1; ++v) {
        bool ok = true;
        for (auto& t : targets)
            if (g.degree_in(v, t) < 0.3 * t.count() / 2.0) ok = false;
        if (ok) want = v;
    }
    CHECK(got == want);
}

TEST_CASE("find_connecting_path: deterministic lowest-id route on K20") {
    Graph k = Graph::complete(20);
    VertexSet a(20), b(20), c(20);
    a.insert(0);
    b.insert(1);
    for (int i = 2; i < 10; ++i) c.insert(i);
    Path p = find_connecting_path(k, a, b, c, 3, 19.0 / 20.0, prac());
    CHECK(p.v == std::vector<int>{0, 2, 3, 1});
}

TEST_CASE("find_connecting_path: length one is just an edge") {
    Graph g = Graph::from_edges(4, {{0, 2}, {2, 3}});
    VertexSet a(4), b(4), c(4);
    a.insert(0);
    b.insert(2);
    Path p = find_connecting_path(g, a, b, c, 1, 0.5, prac());
    CHECK(p.v == std::vector<int>{0, 2});
}

TEST_CASE("find_connecting_path: random instance cross-checked by BFS layers") {
    Graph g = sample_gnp(2000, 0.15, 9);
    std::mt19937_64 rng(33);
    std::vector<int> ids(2000);
    for (int i = 0; i < 2000; ++i) ids[i] = i;
    for (int i = 0; i < 1100; ++i) std::swap(ids[i], ids[i + rng() % (2000 - i)]);
    VertexSet a(2000), b(2000), c(2000);
    for (int i = 0; i < 150; ++i) a.insert(ids[i]);
    for (int i = 150; i < 300; ++i) b.insert(ids[i]);
    for (int i = 300; i < 1100; ++i) c.insert(ids[i]);
    Path p = find_connecting_path(g, a, b, c, 4, 0.15, prac());
    CHECK(p.validate(g));
    CHECK(p.length() == 4);
    CHECK(a.contains(p.front()));
    CHECK(b.contains(p.back()));
    for (size_t i = 1; i + 1 < p.v.size(); ++i) CHECK(c.contains(p.v[i]));
    CHECK(layered_path_exists(g, a, b, c, 4));
}

TEST_CASE("find_book_cycle: complete graph, ell = 4") {
    Graph k = Graph::complete(30);
    BookCycle bc = find_book_cycle(k, VertexSet::full(30), 4, 3, 29.0 / 30.0, prac());
    CHECK(bc.validate(k));
    CHECK(bc.spine.length() == 2);
    CHECK(bc.pages.size() == 3);
}

TEST_CASE("find_book_cycle: complete graph, ell = 6") {
    Graph k = Graph::complete(30);
    BookCycle bc = find_book_cycle(k, VertexSet::full(30), 6, 2, 29.0 / 30.0, prac());
    CHECK(bc.validate(k));
    CHECK(bc.spine.length() == 4);
    CHECK(bc.cycle_length() == 6);
}

TEST_CASE("find_book_cycle: random instance validated against a co-degree scan") {
    Graph g = sample_gnp(3000, 0.2, 4);
    VertexSet u(3000);
    std::mt19937_64 rng(5);
    std::vector<int> ids(3000);
    for (int i = 0; i < 3000; ++i) ids[i] = i;
    for (int i = 0; i < 1500; ++i) std::swap(ids[i], ids[i + rng() % (3000 - i)]);
    for (int i = 0; i < 1500; ++i) u.insert(ids[i]);
    BookCycle bc = find_book_cycle(g, u, 5, 4, 0.2, prac());
    CHECK(bc.validate(g));
    CHECK(bc.spine.length() == 3);
    CHECK(bc.pages.size() == 4);
    for (int v : bc.vertices()) CHECK(u.contains(v));
    // oracle: some pair with co-degree >= 4 exists in U (necessary condition)
    bool pair_found = false;
    for (int x = u.first(); x != -1 && !pair_found; x = u.next(x)) {
        VertexSet nx = g.neighbors_in(x, u);
        for (int y = u.next(x); y != -1; y = u.next(y)) {
            if (g.degree_in(y, nx) >= 4) {
                pair_found = true;
                break;
            }
        }
    }
    CHECK(pair_found);
}

TEST_CASE("greedy_long_path: complete graph walks the ids in order") {
    Graph k = Graph::complete(100);
    Path p = greedy_long_path(k, VertexSet::full(100), 50, 0.5, prac());
    CHECK(p.length() == 50);
    CHECK(p.validate(k));
    CHECK(p.v[0] == 0);
    CHECK(p.v[1] == 1);
}

TEST_CASE("greedy_long_path: ell = 0 returns a single good-degree vertex") {
    Graph k = Graph::complete(10);
    Path p = greedy_long_path(k, VertexSet::full(10), 0, 0.5, prac());
    CHECK(p.v.size() == 1);
}

TEST_CASE("greedy_long_path: near-spanning path in a random graph") {
    Graph g = sample_gnp(5000, 0.1, 6);
    Path p = greedy_long_path(g, VertexSet::full(5000), 4500, 0.1, prac());
    CHECK(p.length() == 4500);
    CHECK(p.validate(g));
}

TEST_CASE("connect_pairs: single pair on a complete graph") {
    Graph k = Graph::complete(40);
    VertexSet u(40);
    for (int i = 2; i < 40; ++i) u.insert(i);
    PairSystem sys{{{0, 1}}};
    auto q = connect_pairs(k, sys, u, 3, 0.5, 39.0 / 40.0, prac());
    REQUIRE(q.size() == 1);
    CHECK(q[0].length() == 3);
    CHECK(q[0].front() == 0);
    CHECK(q[0].back() == 1);
}

TEST_CASE("connect_pairs: empty system") {
    Graph k = Graph::complete(10);
    auto q = connect_pairs(k, PairSystem{}, VertexSet::full(10), 3, 0.5, 0.9, prac());
    CHECK(q.empty());
}

TEST_CASE("connect_pairs: fifty pairs, disjointness verified exhaustively") {
    Graph g = sample_gnp(4000, 0.2, 13);
    std::mt19937_64 rng(21);
    std::vector<int> ids(4000);
    for (int i = 0; i < 4000; ++i) ids[i] = i;
    for (int i = 0; i < 2100; ++i) std::swap(ids[i], ids[i + rng() % (4000 - i)]);
    PairSystem sys;
    for (int i = 0; i < 50; ++i) sys.pairs.push_back({ids[2 * i], ids[2 * i + 1]});
    VertexSet u(4000);
    for (int i = 100; i < 2100; ++i) u.insert(ids[i]);
    auto qs = connect_pairs(g, sys, u, 3, 0.25, 0.2, prac());
    REQUIRE(qs.size() == 50);
    VertexSet seen(4000);
    for (size_t i = 0; i < qs.size(); ++i) {
        const Path& q = qs[i];
        CHECK(q.validate(g));
        CHECK(q.length() == 3);
        CHECK(q.front() == sys.pairs[i].first);
        CHECK(q.back() == sys.pairs[i].second);
        for (size_t k = 1; k + 1 < q.v.size(); ++k) {
            CHECK(u.contains(q.v[k]));
            CHECK(!seen.contains(q.v[k]));
            seen.insert(q.v[k]);
        }
    }
}

TEST_CASE("connect_pairs: (v,v) pairs become cycles") {
    Graph g = sample_gnp(2000, 0.25, 3);
    PairSystem sys{{{0, 0}, {1, 1}}};
    VertexSet u(2000);
    for (int i = 2; i < 1000; ++i) u.insert(i);
    auto qs = connect_pairs(g, sys, u, 4, 0.2, 0.25, prac());
    REQUIRE(qs.size() == 2);
    for (auto& q : qs) {
        CHECK(q.v.size() == 4);
        CHECK(q.validate(g, /*cyclic=*/true));
    }
}

TEST_CASE("connect_pairs rejects multiplicity violations") {
    Graph k = Graph::complete(30);
    PairSystem sys{{{0, 1}, {0, 2}, {0, 3}}};  // vertex 0 used three times
    VertexSet u(30);
    for (int i = 10; i < 30; ++i) u.insert(i);
    CHECK_THROWS_AS(connect_pairs(k, sys, u, 3, 0.5, 0.9, prac()), PreconditionError);
}

TEST_CASE("path finders are deterministic") {
    Graph g = sample_gnp(1500, 0.2, 11);
    VertexSet u = VertexSet::full(1500);
    BookCycle b1 = find_book_cycle(g, u, 5, 3, 0.2, prac());
    BookCycle b2 = find_book_cycle(g, u, 5, 3, 0.2, prac());
    CHECK(b1.spine.v == b2.spine.v);
    CHECK(b1.pages == b2.pages);
    Path p1 = greedy_long_path(g, u, 800, 0.2, prac());
    Path p2 = greedy_long_path(g, u, 800, 0.2, prac());
    CHECK(p1.v == p2.v);
}

TEST_CASE("strict mode demands certified parameters and size floors") {
    Graph k = Graph::complete(30);
    RunConfig strict = RunConfig::strict_defaults();
    VertexSet a(30), b(30), c(30);
    a.insert(0);
    b.insert(1);
    for (int i = 2; i < 10; ++i) c.insert(i);
    CHECK_THROWS_AS(find_connecting_path(k, a, b, c, 3, 0.9, strict), PreconditionError);
    JumbledParams prm = JumbledParams::from_epsilon(0.9, 0.01, 1.0, 30);
    CHECK_THROWS_AS(find_connecting_path(k, a, b, c, 3, 0.9, strict, &prm), PreconditionError);
}
