#pragma once

#include <array>
#include <optional>
#include <vector>

#include "cyclefactor/config.hpp"
#include "cyclefactor/graph.hpp"
#include "cyclefactor/jumbled.hpp"

namespace cyclefactor {

// ell copies of K4-minus glued sequentially at degree-2 vertices. tips[k]
// are the ell+1 removable vertices: deleting any single one leaves a
// triangle-factor, which factor_without constructs directly.
struct Chain {
    std::vector<int> tips;                 // t_0 .. t_ell
    std::vector<std::array<int, 2>> inner; // (u_i, w_i) per copy

    int length() const { return int(inner.size()); }
    const std::vector<int>& removable() const { return tips; }
    std::vector<int> vertices() const;
    bool validate(const Graph& g) const;
    std::vector<std::array<int, 3>> factor_without(int tip_index) const;
};

// Depth-first growth of an ell_c-chain avoiding `forbidden`; lowest-id
// choices with bounded backtracking.
Chain build_chain(const Graph& g, int ell_c, const VertexSet& forbidden, const RunConfig& cfg);

// First triangle (lexicographic over removable triples) meeting all three
// chains at removable vertices.
std::optional<std::array<int, 3>> find_traversing_triangle(const Graph& g, const Chain& da,
                                                           const Chain& db, const Chain& dc);

// Rebalanced chain system: 2t half-length chains inside W whose factor_for
// closure pairs any chosen subset with long chains so that the union always
// carries a triangle-factor.
class ChainAbsorber {
public:
    struct FactorResult {
        std::vector<int> used_long;                  // L': indices of consumed ell-chains
        std::vector<std::array<int, 3>> triangles;   // the factor itself
    };

    const std::vector<Chain>& half_chains() const { return half_; }
    const std::array<std::vector<int>, 4>& groups() const { return groups_; }

    // for L subseteq [2t]: a triangle-factor covering exactly the chosen
    // half-chains plus the returned long chains
    FactorResult factor_for(const std::vector<int>& half_ids) const;

private:
    friend ChainAbsorber rebalance_chains(const Graph& g, const std::vector<Chain>& long_chains,
                                          const VertexSet& w, const JumbledParams& params,
                                          const RunConfig& cfg);
    const Graph* g_ = nullptr;
    std::vector<Chain> long_;
    std::vector<Chain> half_;
    std::array<std::vector<int>, 4> groups_;
    double edge_threshold_ = 0.0;  // eps p t ell with eps = 1/16
    int t_ = 0;
};

ChainAbsorber rebalance_chains(const Graph& g, const std::vector<Chain>& long_chains,
                               const VertexSet& w, const JumbledParams& params,
                               const RunConfig& cfg);

inline constexpr double kChainEpsilon = 1.0 / 16.0;

}  // namespace cyclefactor
