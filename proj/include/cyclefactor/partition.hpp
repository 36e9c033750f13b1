#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "cyclefactor/config.hpp"
#include "cyclefactor/graph.hpp"

namespace cyclefactor {

using SignVector = std::vector<int8_t>;  // entries in {-1, +1}

// Derandomized sign choice by conditional expectations with the exponential
// (hyperbolic-cosine) pessimistic estimator. For an r x c 0/1 matrix the
// output satisfies |sum_j eps_j a_ij| <= sqrt(2c * log(2r)) for every row;
// for the square case that is the usual sqrt(2n log(2n)) bound. The bound is
// re-checked in exact integer arithmetic on every call.
SignVector balanced_signs(const std::vector<std::vector<uint8_t>>& rows);

// Streaming form: column j's incident row indices are produced on demand, so
// adjacency matrices never get materialized. `column_rows` must fill `out`
// with the (strictly increasing) row indices whose entry in column j is 1.
SignVector balanced_signs_stream(int n_rows, int n_cols,
                                 const std::function<void(int j, std::vector<int>& out)>& column_rows);

double sign_bound(int n_rows, int n_cols);

// s = 2^k parts of U, sizes within one of each other, such that every w in W
// keeps deg(w, U_i) >= factor * delta * p * |U_i| into every part.
struct DegreePartition {
    std::vector<std::vector<int>> parts;  // ascending ids within each part
    double delta = 0.0;
    double p = 0.0;
    double factor = 0.5;   // the guarantee actually checked
    bool provable = false; // true when the slack analysis covers this scale

    VertexSet part_set(int i, int n) const { return VertexSet::of(n, parts[size_t(i)]); }
};

// k rounds of balanced signs on the adjacency rows of W restricted to the
// current part (plus an all-ones balancing row), with lowest-id moves to
// equalize sizes afterwards. Practical mode accepts scales where the
// sqrt(2n log 2n) slack is not provably negligible and instead verifies the
// degree guarantee exhaustively after the fact, erroring out if it fails.
DegreePartition degree_preserving_partition(const Graph& g, const VertexSet& u,
                                            const VertexSet& w, int k, double delta, double p,
                                            const RunConfig& cfg);

}  // namespace cyclefactor
