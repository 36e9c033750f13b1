#include "cyclefactor/partition.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <sstream>

#include "cyclefactor/errors.hpp"

namespace cyclefactor {

double sign_bound(int n_rows, int n_cols) {
    if (n_cols == 0 || n_rows == 0) return 0.0;
    return std::sqrt(2.0 * double(n_cols) * std::log(2.0 * double(n_rows)));
}

SignVector balanced_signs_stream(
    int n_rows, int n_cols,
    const std::function<void(int j, std::vector<int>& out)>& column_rows) {
    SignVector signs(n_cols, 1);
    if (n_rows == 0 || n_cols == 0) return signs;

    double lambda = std::sqrt(2.0 * std::log(2.0 * double(n_rows)) / double(n_cols));
    double ch = std::cosh(lambda);
    double up = std::exp(lambda) / ch;    // factor applied when the sign matches
    double dn = std::exp(-lambda) / ch;   // and when it opposes

    // Row weights exp(+-lambda S_i) * cosh(lambda)^{c_i}, kept with the
    // cosh powers folded in up front; every committed column divides one
    // cosh factor back out via up/dn.
    std::vector<int> weight(n_rows, 0);
    std::vector<int> col;
    std::vector<std::vector<int>> cols_cache;
    bool cache_columns = (size_t(n_rows) * size_t(n_cols) <= size_t(1) << 24);
    if (cache_columns) cols_cache.reserve(n_cols);
    for (int j = 0; j < n_cols; ++j) {
        col.clear();
        column_rows(j, col);
        for (int i : col) ++weight[i];
        if (cache_columns) cols_cache.push_back(col);
    }
    std::vector<double> epos(n_rows), eneg(n_rows);
    for (int i = 0; i < n_rows; ++i) {
        // log-scale guard: the estimator keeps lambda*|S| <= 2 log(2r),
        // so pow stays far from overflow
        double base = std::pow(ch, double(weight[i]));
        epos[i] = base;
        eneg[i] = base;
    }
    std::vector<long long> sums(n_rows, 0);

    for (int j = 0; j < n_cols; ++j) {
        if (cache_columns) {
            col = cols_cache[size_t(j)];
        } else {
            col.clear();
            column_rows(j, col);
        }
        double delta_plus = 0.0, delta_minus = 0.0;
        for (int i : col) {
            delta_plus += epos[i] * (up - 1.0) + eneg[i] * (dn - 1.0);
            delta_minus += epos[i] * (dn - 1.0) + eneg[i] * (up - 1.0);
        }
        int8_t s = (delta_plus <= delta_minus) ? int8_t(1) : int8_t(-1);
        signs[j] = s;
        double fp = (s == 1) ? up : dn;
        double fn = (s == 1) ? dn : up;
        for (int i : col) {
            epos[i] *= fp;
            eneg[i] *= fn;
            sums[i] += s;
        }
    }

    double bound = sign_bound(n_rows, n_cols) * (1.0 + 1e-9);
    for (int i = 0; i < n_rows; ++i)
        require(std::llabs(sums[i]) <= (long long)std::ceil(bound), "balanced_signs",
                "row sum exceeded the discrepancy bound");
    return signs;
}

SignVector balanced_signs(const std::vector<std::vector<uint8_t>>& rows) {
    int n_rows = int(rows.size());
    if (n_rows == 0) return {};
    size_t n_cols = rows[0].size();
    for (const auto& r : rows)
        if (r.size() != n_cols)
            throw PreconditionError("balanced_signs", "ragged rows: all rows must share one length");
    if (n_cols == 0) return {};
    return balanced_signs_stream(n_rows, int(n_cols), [&](int j, std::vector<int>& out) {
        for (int i = 0; i < n_rows; ++i)
            if (rows[size_t(i)][size_t(j)]) out.push_back(i);
    });
}

namespace {

// One halving round: signs over the columns of `part`, then lowest-id moves
// from the larger side until the sizes differ by at most one.
std::pair<std::vector<int>, std::vector<int>> split_once(const Graph& g,
                                                         const std::vector<int>& part,
                                                         int w_count,
                                                         const std::vector<int>& w_index) {
    int n_rows = w_count + 1;  // + all-ones balancing row
    int n_cols = int(part.size());
    int ones_row = n_rows - 1;
    SignVector signs = balanced_signs_stream(n_rows, n_cols, [&](int j, std::vector<int>& out) {
        int v = part[size_t(j)];
        const uint64_t* row = g.row(v);
        // row indices of W-vertices adjacent to column vertex v
        size_t words = g.row_words();
        for (size_t i = 0; i < words; ++i) {
            uint64_t bits = row[i];
            while (bits) {
                int u2 = int(i * 64 + std::countr_zero(bits));
                bits &= bits - 1;
                int idx = w_index[size_t(u2)];
                if (idx >= 0) out.push_back(idx);
            }
        }
        out.push_back(ones_row);
    });

    std::vector<int> a, b;
    for (int j = 0; j < n_cols; ++j)
        (signs[size_t(j)] == 1 ? a : b).push_back(part[size_t(j)]);
    // balance with lowest-id moves
    while (int(a.size()) > int(b.size()) + 1) {
        b.push_back(a.front());
        a.erase(a.begin());
    }
    while (int(b.size()) > int(a.size()) + 1) {
        a.push_back(b.front());
        b.erase(b.begin());
    }
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    return {std::move(a), std::move(b)};
}

}  // namespace

DegreePartition degree_preserving_partition(const Graph& g, const VertexSet& u,
                                            const VertexSet& w, int k, double delta, double p,
                                            const RunConfig& cfg) {
    if (k < 1) throw PreconditionError("partition", "k must be >= 1");
    int n = g.vertex_count();
    std::vector<int> u_ids = u.to_vector();
    std::vector<int> w_ids = w.to_vector();
    if (u_ids.empty()) throw PreconditionError("partition", "U must be nonempty");

    // precondition: deg(w, U) >= delta * p * |U|
    for (int v : w_ids) {
        if (double(g.degree_in(v, u)) < delta * p * double(u_ids.size()) - 1e-9) {
            std::ostringstream os;
            os << "vertex " << v << " has degree " << g.degree_in(v, u) << " into U, below delta*p*|U| = "
               << delta * p * double(u_ids.size());
            throw PreconditionError("partition", os.str());
        }
    }

    int s = 1 << k;
    double g_slack = std::sqrt(2.0 * double(n + 1) * std::log(2.0 * double(n) + 1.0));
    bool provable = delta * p * double(u_ids.size()) / (2.0 * double(s)) >= 2.0 * double(k) * g_slack;
    if (cfg.mode == Mode::strict && !provable) {
        std::ostringstream os;
        os << "sign-discrepancy slack 2k*sqrt(2n log 2n) = " << 2.0 * k * g_slack
           << " exceeds delta*p*|U|/(2s) = " << delta * p * double(u_ids.size()) / (2.0 * s)
           << "; the degree guarantee is not provable at this scale";
        throw InfeasibleError("partition", os.str());
    }

    // w-id -> row index
    std::vector<int> w_index(size_t(n), -1);
    for (size_t i = 0; i < w_ids.size(); ++i) w_index[size_t(w_ids[i])] = int(i);

    std::vector<std::vector<int>> parts{u_ids};
    for (int round = 0; round < k; ++round) {
        std::vector<std::vector<int>> next;
        next.reserve(parts.size() * 2);
        for (auto& part : parts) {
            auto [a, b] = split_once(g, part, int(w_ids.size()), w_index);
            next.push_back(std::move(a));
            next.push_back(std::move(b));
        }
        parts = std::move(next);
    }

    DegreePartition out;
    out.parts = std::move(parts);
    out.delta = delta;
    out.p = p;
    out.factor = 0.5;
    out.provable = provable;

    // exhaustive post-hoc check of the degree guarantee
    for (size_t i = 0; i < out.parts.size(); ++i) {
        VertexSet ps = VertexSet::of(n, out.parts[i]);
        double need = out.factor * delta * p * double(out.parts[i].size());
        for (int v : w_ids) {
            if (double(g.degree_in(v, ps)) < need - 1e-9) {
                std::ostringstream os;
                os << "vertex " << v << " has degree " << g.degree_in(v, ps) << " into part " << i
                   << " (size " << out.parts[i].size() << "), below delta*p*|U_i|/2 = " << need;
                throw InfeasibleError("partition", os.str());
            }
        }
    }
    return out;
}

}  // namespace cyclefactor
