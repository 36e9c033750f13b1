#include <doctest.h>

#include <random>
#include <sstream>

#include "cyclefactor/errors.hpp"
#include "cyclefactor/template_graph.hpp"
#include "oracles.hpp"

using namespace cyclefactor;

namespace {
RunConfig prac() { return RunConfig::practical_defaults(); }

// trial-division primality, the oracle side
bool prime_slow(uint64_t n) {
    if (n < 2) return false;
    for (uint64_t d = 2; d * d <= n; ++d)
        if (n % d == 0) return false;
    return true;
}
}  // namespace

TEST_CASE("prime search follows the congruence, trial-division oracle") {
    auto t1 = find_template_prime_from(20, 5, Mode::practical);
    CHECK(t1.q == 41);
    // oracle: 41 is the first prime == 1 (mod 20) at or above 20
    for (uint64_t q = 20; q < 41; ++q)
        CHECK(!(prime_slow(q) && q % 20 == 1));
    CHECK(prime_slow(41));

    auto t2 = find_template_prime_from(50, 13, Mode::practical);
    CHECK(t2.q == 53);
    CHECK(prime_slow(53));
    CHECK(53 % 52 == 1);
}

TEST_CASE("prime search widens below the congruence floor and flags it") {
    // no q == 1 (mod 4 p_r) can be smaller than 4 p_r + 1
    auto t = find_template_prime_from(2, 13, Mode::practical);
    CHECK(t.q == 53);
    CHECK(t.widened);
    CHECK_THROWS_AS(find_template_prime_from(2, 13, Mode::strict), NotFoundError);
}

TEST_CASE("legendre via Euler's criterion") {
    CHECK(legendre(5, 29) == 1);
    CHECK(legendre(5, 13) == -1);
    CHECK(legendre(13, 17) == 1);
    CHECK(legendre(13, 53) == 1);
}

TEST_CASE("LPS residue case: 6-regular graph on (q^3-q)/2 vertices") {
    RamanujanGraph rg = build_lps_graph(5, 29);
    CHECK(!rg.bipartite);
    CHECK(rg.graph.vertex_count() == (29 * 29 * 29 - 29) / 2);
    for (int v = 0; v < rg.graph.vertex_count(); ++v) REQUIRE(rg.graph.degree(v) == 6);
    CHECK(rg.graph.check_invariants());
}

TEST_CASE("LPS non-residue case: bipartite graph on q^3-q vertices") {
    RamanujanGraph rg = build_lps_graph(5, 13);
    CHECK(rg.bipartite);
    CHECK(rg.graph.vertex_count() == 13 * 13 * 13 - 13);
    for (int v = 0; v < rg.graph.vertex_count(); ++v) REQUIRE(rg.graph.degree(v) == 6);
    // sides split evenly and every edge crosses
    int side0 = 0;
    for (auto s : rg.side) side0 += (s == 0);
    CHECK(side0 == rg.graph.vertex_count() / 2);
}

TEST_CASE("double cover of K3 is C6") {
    Graph k3 = Graph::complete(3);
    Graph c = bipartite_double_cover(k3);
    REQUIRE(c.vertex_count() == 6);
    CHECK(c.edge_count() == 6);
    for (int v = 0; v < 6; ++v) CHECK(c.degree(v) == 2);
    // connected 2-regular on 6 vertices = C6: walk it
    int start = 0, prev = -1, cur = 0, steps = 0;
    do {
        auto nb = c.neighbors(cur);
        int nxt = (nb[0] == prev) ? nb[1] : nb[0];
        prev = cur;
        cur = nxt;
        ++steps;
    } while (cur != start && steps <= 6);
    CHECK(steps == 6);
}

TEST_CASE("double cover of an edgeless graph is edgeless; degrees persist") {
    Graph g(7);
    CHECK(bipartite_double_cover(g).edge_count() == 0);

    Graph r = sample_gnp(60, 0.3, 5);
    Graph c = bipartite_double_cover(r);
    for (int v = 0; v < 60; ++v) {
        CHECK(c.degree(v) == r.degree(v));
        CHECK(c.degree(60 + v) == r.degree(v));
    }
}

TEST_CASE("bipartite matching: complete and star cases") {
    BipartiteGraph b;
    b.left = 5;
    b.right = 5;
    b.adj.assign(5, {0, 1, 2, 3, 4});
    std::vector<int> u{0, 1, 2, 3, 4}, w{0, 1, 2, 3, 4};
    auto res = bipartite_matching(b, u, w);
    CHECK(res.size == 5);
    CHECK(res.perfect_on_left);

    BipartiteGraph star;
    star.left = 1;
    star.right = 3;
    star.adj = {{0, 1, 2}};
    auto r2 = bipartite_matching(star, {0}, {0, 1, 2});
    CHECK(r2.size == 1);
}

TEST_CASE("bipartite matching equals the max-flow oracle on random instances") {
    std::mt19937_64 rng(21);
    for (int trial = 0; trial < 25; ++trial) {
        int nl = 50 + int(rng() % 150), nr = 50 + int(rng() % 150);
        BipartiteGraph b;
        b.left = nl;
        b.right = nr;
        b.adj.assign(size_t(nl), {});
        for (int u = 0; u < nl; ++u)
            for (int v = 0; v < nr; ++v)
                if (double(rng() >> 11) * 0x1.0p-53 < 0.1) b.adj[size_t(u)].push_back(v);
        std::vector<int> u_all((size_t)nl), w_all((size_t)nr);
        for (int i = 0; i < nl; ++i) u_all[size_t(i)] = i;
        for (int i = 0; i < nr; ++i) w_all[size_t(i)] = i;
        auto res = bipartite_matching(b, u_all, w_all);
        CHECK(res.size == oracles::matching_size_flow(nl, nr, b.adj));
        // matched pairs are a matching
        std::vector<char> seen((size_t)nr, 0);
        int count = 0;
        for (int x = 0; x < nl; ++x) {
            int y = res.match_of_left[size_t(x)];
            if (y == -1) continue;
            ++count;
            CHECK(!seen[size_t(y)]);
            seen[size_t(y)] = 1;
        }
        CHECK(count == res.size);
    }
}

TEST_CASE("random template m=1: both flexible deletions checked by hand-scale enumeration") {
    RunConfig cfg = prac();
    Template t = build_random_template(1, 4, 1, cfg);
    CHECK(t.m == 1);
    CHECK(t.verified == FlexVerification::exhaustive);
    for (int j : {0, 1}) CHECK(!t.matching_avoiding({j}).empty());
}

TEST_CASE("random template m=5: exhaustive C(10,5) subset oracle") {
    RunConfig cfg = prac();
    Template t = build_random_template(5, 10, 17, cfg);
    CHECK(t.verified == FlexVerification::exhaustive);
    // independent oracle: every 5-subset of the 10 flexible vertices leaves a
    // perfect matching, checked through max-flow
    std::vector<int> comb{0, 1, 2, 3, 4};
    int checked = 0;
    while (true) {
        std::vector<char> gone((size_t)t.t.right, 0);
        for (int j : comb) gone[size_t(j)] = 1;
        std::vector<std::vector<int>> adj(t.t.adj.size());
        for (size_t i = 0; i < t.t.adj.size(); ++i)
            for (int j : t.t.adj[i])
                if (!gone[size_t(j)]) adj[i].push_back(j);
        CHECK(oracles::matching_size_flow(t.t.left, t.t.right, adj) == t.t.left);
        ++checked;
        int i = 4;
        while (i >= 0 && comb[size_t(i)] == 5 + i) --i;
        if (i < 0) break;
        ++comb[size_t(i)];
        for (int k = i + 1; k < 5; ++k) comb[size_t(k)] = comb[size_t(k - 1)] + 1;
    }
    CHECK(checked == 252);
}

TEST_CASE("random template rejects degree targets below three") {
    RunConfig cfg = prac();
    CHECK_THROWS_AS(build_random_template(4, 2, 1, cfg), PreconditionError);
}

TEST_CASE("strict template construction names the prime floor") {
    RunConfig strict = RunConfig::strict_defaults();
    try {
        build_template(10, 5, strict);
        FAIL("expected a precondition rejection");
    } catch (const PreconditionError& e) {
        CHECK(std::string(e.what()).find("68000") != std::string::npos);
    }
}

TEST_CASE("LPS-backed template at practical scale") {
    RunConfig cfg = prac();
    cfg.template_trials = 300;
    Template t = build_template(200, 13, cfg);
    CHECK(t.m == 200);
    CHECK(t.t.left == 600);
    CHECK(t.t.right == 800);
    CHECK(t.max_degree <= 14);
    CHECK(t.verified == FlexVerification::sampled);
    // spot oracle: a fresh sampled batch of flexible deletions all match
    std::mt19937_64 rng(400);
    for (int trial = 0; trial < 50; ++trial) {
        std::vector<int> ids(400);
        for (int i = 0; i < 400; ++i) ids[size_t(i)] = i;
        for (int i = 0; i < 200; ++i)
            std::swap(ids[size_t(i)], ids[size_t(i + rng() % (400 - i))]);
        std::vector<int> jbar(ids.begin(), ids.begin() + 200);
        CHECK(!t.matching_avoiding(jbar).empty());
    }
}

TEST_CASE("template serialization round-trips bit-exactly") {
    RunConfig cfg = prac();
    Template t = build_random_template(4, 5, 3, cfg);
    std::stringstream s1;
    t.save(s1);
    Template u = Template::load(s1);
    std::stringstream s2;
    u.save(s2);
    CHECK(s1.str() == s2.str());
    CHECK(u.m == t.m);
    CHECK(u.t.adj == t.t.adj);
}
