#pragma once

#include <cstdint>
#include <string>

#include "cyclefactor/graph.hpp"

namespace cyclefactor {

// Discrepancy parameters of a host instance: |e(A,B) - p|A||B|| < lambda *
// sqrt(|A||B|) is assumed for all vertex sets. lambda is a trusted input;
// the estimation and sampling routines below are advisory, they never
// certify.
struct JumbledParams {
    double p = 0.0;        // edge density
    double lambda = 0.0;   // discrepancy bound
    double epsilon = 0.0;  // lambda / (p^2 n)
    double delta = 0.0;    // minimum-degree ratio, delta(G) >= delta*p*n

    // lambda <= epsilon * p^2 * n, and the density floor for accepted
    // instances: p >= (epsilon^2 n)^{-1/3} / 4.
    bool consistent(long long n) const;

    static JumbledParams from_epsilon(double p, double epsilon, double delta, long long n) {
        JumbledParams j;
        j.p = p;
        j.epsilon = epsilon;
        j.delta = delta;
        j.lambda = epsilon * p * p * double(n);
        return j;
    }
};

struct LambdaEstimate {
    double value = 0.0;       // upper estimate of the best lambda
    double tolerance = 0.0;   // residual tolerance actually achieved
    int iterations = 0;
    bool converged = false;

    std::string summary() const;
};

// Largest singular value of (A - p*J), estimated by power iteration on the
// squared operator (which also handles +/- paired spectra). Returns an
// explicit non-convergence report instead of a silent value when the budget
// runs out.
LambdaEstimate estimate_lambda(const Graph& g, double p, int max_iterations = 10000,
                               double tolerance = 1e-9);

struct DiscrepancyReport {
    double max_ratio = 0.0;  // max |e(A,B) - p|A||B|| / sqrt(|A||B|)
    int worst_a = 0, worst_b = 0;
    int trials = 0;
    uint64_t seed = 0;
};

// Sampled falsification of the discrepancy property over `trials` random set
// pairs of varied sizes. Reports the worst ratio observed; a small value is
// evidence, never certification.
DiscrepancyReport check_discrepancy(const Graph& g, const JumbledParams& params, int trials,
                                    uint64_t seed);

}  // namespace cyclefactor
