#include <doctest.h>

#include <cmath>
#include <random>

#include "cyclefactor/errors.hpp"
#include "cyclefactor/graph.hpp"
#include "cyclefactor/partition.hpp"

using namespace cyclefactor;

namespace {
long long row_sum(const std::vector<uint8_t>& row, const SignVector& signs) {
    long long s = 0;
    for (size_t j = 0; j < row.size(); ++j)
        if (row[j]) s += signs[j];
    return s;
}
}  // namespace

TEST_CASE("balanced_signs: all-zero rows give zero sums") {
    std::vector<std::vector<uint8_t>> rows(4, std::vector<uint8_t>(8, 0));
    SignVector s = balanced_signs(rows);
    REQUIRE(s.size() == 8);
    for (auto& r : rows) CHECK(row_sum(r, s) == 0);
}

TEST_CASE("balanced_signs: a single (1,1) row cancels") {
    std::vector<std::vector<uint8_t>> rows{{1, 1}};
    SignVector s = balanced_signs(rows);
    CHECK(std::abs(row_sum(rows[0], s)) == 0);
}

TEST_CASE("balanced_signs: random 0/1 rows meet the bound") {
    std::mt19937_64 rng(5);
    int n = 64;
    std::vector<std::vector<uint8_t>> rows(64, std::vector<uint8_t>(n));
    for (auto& r : rows)
        for (auto& x : r) x = uint8_t(rng() & 1);
    SignVector s = balanced_signs(rows);
    double bound = std::sqrt(2.0 * n * std::log(2.0 * n));
    for (auto& r : rows) CHECK(double(std::abs(row_sum(r, s))) <= bound);
}

TEST_CASE("balanced_signs rejects ragged rows") {
    std::vector<std::vector<uint8_t>> rows{{1, 0, 1}, {1, 0}};
    CHECK_THROWS(balanced_signs(rows));
}

TEST_CASE("degree partition: complete graph, two parts") {
    Graph k = Graph::complete(200);
    RunConfig cfg = RunConfig::practical_defaults();
    VertexSet all = VertexSet::full(200);
    auto dp = degree_preserving_partition(k, all, all, 1, 1.0, 199.0 / 200.0, cfg);
    REQUIRE(dp.parts.size() == 2);
    CHECK(dp.parts[0].size() == 100);
    CHECK(dp.parts[1].size() == 100);
    for (int v = 0; v < 200; ++v)
        for (int i = 0; i < 2; ++i)
            CHECK(k.degree_in(v, dp.part_set(i, 200)) >= 99);
}

TEST_CASE("degree partition: random graph, four parts, exhaustive recount") {
    Graph g = sample_gnp(800, 0.2, 11);
    RunConfig cfg = RunConfig::practical_defaults();
    VertexSet all = VertexSet::full(800);
    auto dp = degree_preserving_partition(g, all, all, 2, 0.5, 0.2, cfg);
    REQUIRE(dp.parts.size() == 4);
    size_t total = 0;
    for (auto& part : dp.parts) total += part.size();
    CHECK(total == 800);
    for (int v = 0; v < 800; ++v)
        for (int i = 0; i < 4; ++i) {
            double need = 0.5 * 0.5 * 0.2 * double(dp.parts[i].size());
            CHECK(double(g.degree_in(v, dp.part_set(i, 800))) >= need);
        }
}

TEST_CASE("degree partition: non-divisible sizes stay near equal") {
    Graph k = Graph::complete(7);
    RunConfig cfg = RunConfig::practical_defaults();
    VertexSet all = VertexSet::full(7);
    auto dp = degree_preserving_partition(k, all, all, 1, 0.5, 6.0 / 7.0, cfg);
    REQUIRE(dp.parts.size() == 2);
    int a = int(dp.parts[0].size()), b = int(dp.parts[1].size());
    CHECK(std::abs(a - b) <= 1);
    CHECK(a + b == 7);
}

TEST_CASE("degree partition: determinism") {
    Graph g = sample_gnp(300, 0.3, 4);
    RunConfig cfg = RunConfig::practical_defaults();
    VertexSet all = VertexSet::full(300);
    auto d1 = degree_preserving_partition(g, all, all, 2, 0.5, 0.3, cfg);
    auto d2 = degree_preserving_partition(g, all, all, 2, 0.5, 0.3, cfg);
    CHECK(d1.parts == d2.parts);
}

TEST_CASE("degree partition: composing k=1 twice matches one k=2 call's guarantee") {
    Graph g = sample_gnp(600, 0.25, 8);
    RunConfig cfg = RunConfig::practical_defaults();
    VertexSet all = VertexSet::full(600);
    auto outer = degree_preserving_partition(g, all, all, 1, 0.5, 0.25, cfg);
    for (auto& half : outer.parts) {
        VertexSet hs = VertexSet::of(600, half);
        auto inner = degree_preserving_partition(g, hs, all, 1, 0.25, 0.25, cfg);
        for (int i = 0; i < 2; ++i) {
            double need = 0.5 * 0.25 * 0.25 * double(inner.parts[i].size());
            for (int v = 0; v < 600; ++v)
                CHECK(double(g.degree_in(v, inner.part_set(i, 600))) >= need);
        }
    }
}

TEST_CASE("degree partition: strict mode refuses unprovable scales") {
    Graph g = sample_gnp(500, 0.3, 2);
    RunConfig cfg = RunConfig::strict_defaults();
    VertexSet all = VertexSet::full(500);
    CHECK_THROWS_AS(degree_preserving_partition(g, all, all, 1, 0.5, 0.3, cfg), InfeasibleError);
}

TEST_CASE("degree partition: precondition names the failing vertex") {
    Graph g(10);  // edgeless: every vertex violates the degree precondition
    RunConfig cfg = RunConfig::practical_defaults();
    VertexSet all = VertexSet::full(10);
    CHECK_THROWS_AS(degree_preserving_partition(g, all, all, 1, 0.5, 0.5, cfg), PreconditionError);
}
