#include "cyclefactor/jumbled.hpp"

#include <cmath>
#include <random>
#include <sstream>

#include "cyclefactor/errors.hpp"

namespace cyclefactor {

bool JumbledParams::consistent(long long n) const {
    if (!(p > 0.0 && p <= 1.0)) return false;
    if (lambda > epsilon * p * p * double(n) * (1.0 + 1e-12)) return false;
    double floor_p = std::pow(epsilon * epsilon * double(n), -1.0 / 3.0) / 4.0;
    return p >= floor_p;
}

std::string LambdaEstimate::summary() const {
    std::ostringstream os;
    os << "lambda<=" << value << " tol=" << tolerance << " iters=" << iterations
       << (converged ? "" : " NOT-CONVERGED");
    return os.str();
}

namespace {

// y = (A - pJ) x
void apply_centered_adjacency(const Graph& g, double p, const std::vector<double>& x,
                              std::vector<double>& y) {
    int n = g.vertex_count();
    double sum = 0.0;
    for (double v : x) sum += v;
    size_t words = g.row_words();
    for (int u = 0; u < n; ++u) {
        const uint64_t* r = g.row(u);
        double acc = 0.0;
        for (size_t i = 0; i < words; ++i) {
            uint64_t w = r[i];
            while (w) {
                acc += x[i * 64 + std::countr_zero(w)];
                w &= w - 1;
            }
        }
        y[u] = acc - p * sum;
    }
}

double norm2(const std::vector<double>& x) {
    double s = 0.0;
    for (double v : x) s += v * v;
    return std::sqrt(s);
}

}  // namespace

LambdaEstimate estimate_lambda(const Graph& g, double p, int max_iterations, double tolerance) {
    int n = g.vertex_count();
    if (n == 0) throw PreconditionError("estimate_lambda", "graph must be nonempty");

    LambdaEstimate est;
    if (g.edge_count() == 0 && p == 0.0) {
        est.converged = true;
        return est;
    }

    // deterministic pseudo-random start vector (splitmix64 over the index)
    std::vector<double> x(n), y(n), z(n);
    uint64_t s = 0x9e3779b97f4a7c15ULL;
    for (int i = 0; i < n; ++i) {
        s += 0x9e3779b97f4a7c15ULL;
        uint64_t v = s;
        v = (v ^ (v >> 30)) * 0xbf58476d1ce4e5b9ULL;
        v = (v ^ (v >> 27)) * 0x94d049bb133111ebULL;
        v ^= v >> 31;
        x[i] = double(v >> 11) * 0x1.0p-53 - 0.5;
    }
    double nx = norm2(x);
    for (auto& v : x) v /= nx;

    double theta2 = 0.0, prev = -1.0;
    for (int it = 1; it <= max_iterations; ++it) {
        apply_centered_adjacency(g, p, x, y);
        apply_centered_adjacency(g, p, y, z);  // z = M^2 x
        theta2 = 0.0;
        for (int i = 0; i < n; ++i) theta2 += x[i] * z[i];
        double nz = norm2(z);
        est.iterations = it;
        if (nz == 0.0) {  // x in the kernel of M^2: operator norm 0 on this start
            est.value = 0.0;
            est.tolerance = 0.0;
            est.converged = true;
            return est;
        }
        // residual of the squared operator, scaled to the eigenvalue magnitude
        double res = 0.0;
        for (int i = 0; i < n; ++i) {
            double d = z[i] - theta2 * x[i];
            res += d * d;
        }
        res = std::sqrt(res);
        double scale = std::max(1.0, std::abs(theta2));
        if (res <= tolerance * scale && prev >= 0.0 &&
            std::abs(theta2 - prev) <= tolerance * scale) {
            est.value = std::sqrt(std::max(0.0, theta2)) + res / std::sqrt(scale);
            est.tolerance = res / scale;
            est.converged = true;
            return est;
        }
        prev = theta2;
        for (int i = 0; i < n; ++i) x[i] = z[i] / nz;
    }
    est.value = std::sqrt(std::max(0.0, theta2));
    est.tolerance = tolerance;
    est.converged = false;  // caller must treat the value as unreliable
    return est;
}

DiscrepancyReport check_discrepancy(const Graph& g, const JumbledParams& params, int trials,
                                    uint64_t seed) {
    if (trials < 1) throw PreconditionError("check_discrepancy", "trials must be >= 1");
    int n = g.vertex_count();
    std::mt19937_64 rng(seed);
    std::vector<int> ids(n);
    for (int i = 0; i < n; ++i) ids[i] = i;

    auto sample_set = [&](int size) {
        // partial Fisher-Yates over a scratch id array
        for (int i = 0; i < size; ++i) {
            int j = i + int(rng() % uint64_t(n - i));
            std::swap(ids[i], ids[j]);
        }
        VertexSet s(n);
        for (int i = 0; i < size; ++i) s.insert(ids[i]);
        return s;
    };

    DiscrepancyReport rep;
    rep.trials = trials;
    rep.seed = seed;
    for (int t = 0; t < trials; ++t) {
        // sizes vary over a rough geometric range so small sets get sampled too
        int sa = 1 + int(rng() % uint64_t(n));
        int sb = 1 + int(rng() % uint64_t(n));
        if (t % 3 == 1) sa = 1 + int(rng() % uint64_t(std::max(1, n / 16)));
        if (t % 3 == 2) sb = 1 + int(rng() % uint64_t(std::max(1, n / 16)));
        VertexSet a = sample_set(sa);
        VertexSet b = sample_set(sb);
        double e = double(edge_count_between(g, a, b));
        double expected = params.p * double(sa) * double(sb);
        double ratio = std::abs(e - expected) / std::sqrt(double(sa) * double(sb));
        if (ratio > rep.max_ratio) {
            rep.max_ratio = ratio;
            rep.worst_a = sa;
            rep.worst_b = sb;
        }
    }
    return rep;
}

}  // namespace cyclefactor
