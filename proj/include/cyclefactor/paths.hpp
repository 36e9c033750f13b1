#pragma once

#include <optional>
#include <vector>

#include "cyclefactor/config.hpp"
#include "cyclefactor/graph.hpp"
#include "cyclefactor/jumbled.hpp"

namespace cyclefactor {

// Sequence of distinct vertices with consecutive pairs adjacent.
// length() counts edges.
struct Path {
    std::vector<int> v;

    int length() const { return int(v.size()) - 1; }
    int front() const { return v.front(); }
    int back() const { return v.back(); }
    bool validate(const Graph& g, bool cyclic = false) const;
};

// Path of length ell-2 whose two ends share `pages.size()` common neighbours
// disjoint from the spine; the spine plus any one page is a C_ell.
struct BookCycle {
    Path spine;
    std::vector<int> pages;

    int cycle_length() const { return spine.length() + 2; }
    bool validate(const Graph& g) const;
    std::vector<int> vertices() const;
};

// Endpoint pairs to be joined by internally disjoint paths. A pair (v, v)
// requests a cycle through v. Every vertex may occur at most twice across
// all coordinates.
struct PairSystem {
    std::vector<std::pair<int, int>> pairs;

    bool multiplicity_ok() const;
};

// Lowest-id w in W with deg(w, U_i) >= p|U_i|/2 for every target set.
int find_good_vertex(const Graph& g, const VertexSet& w, const std::vector<const VertexSet*>& targets,
                     double p);

// A-B path of exactly ell edges whose ell-1 inner vertices lie in C. Strict
// mode enforces the size thresholds |A|,|B| >= 2^{ell-1} eps p n and
// |C| >= 2^{ell-1} eps n plus C disjoint from A and B; practical mode runs
// the same recursion (with bounded backtracking) and reports failure.
Path find_connecting_path(const Graph& g, const VertexSet& a, const VertexSet& b,
                          const VertexSet& c, int ell, double p, const RunConfig& cfg,
                          const JumbledParams* params = nullptr);

// Recursion core behind find_connecting_path, without the public entry
// checks; A and B may overlap C. Used by the cycle and pair connectors.
Path connect_path_inner(const Graph& g, const VertexSet& a, const VertexSet& b,
                        const VertexSet& c, int ell, double p, long long budget);

// Book-cycle entirely inside U: two high-degree vertices with k common
// neighbours reserved as pages, spine completed through U.
BookCycle find_book_cycle(const Graph& g, const VertexSet& u, int ell, int k, double p,
                          const RunConfig& cfg, const JumbledParams* params = nullptr);

// Greedy path of exactly ell edges inside U, always stepping to the
// lowest-id neighbour that keeps degree >= p|remaining|/2 into the unused
// part of U. ell = 0 returns a single good-degree vertex.
Path greedy_long_path(const Graph& g, const VertexSet& u, long long ell, double p,
                      const RunConfig& cfg, const JumbledParams* params = nullptr);

// Internally disjoint length-ell a_i-b_i paths through U (two-phase: split U,
// connect greedily in the first half while degrees last, sweep the leftovers
// through the second). For a pair (v, v) the returned path lists the cycle
// as [v, x_1, ..., x_{ell-1}] with the closing edge x_{ell-1}v present.
std::vector<Path> connect_pairs(const Graph& g, const PairSystem& system, const VertexSet& u,
                                int ell, double delta_prime, double p, const RunConfig& cfg,
                                const JumbledParams* params = nullptr);

}  // namespace cyclefactor
