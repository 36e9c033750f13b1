#include "cyclefactor/paths.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

#include "cyclefactor/errors.hpp"
#include "cyclefactor/partition.hpp"

namespace cyclefactor {

bool Path::validate(const Graph& g, bool cyclic) const {
    if (v.empty()) return false;
    std::vector<int> sorted = v;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) return false;
    for (size_t i = 0; i + 1 < v.size(); ++i)
        if (!g.has_edge(v[i], v[i + 1])) return false;
    if (cyclic && v.size() >= 2 && !g.has_edge(v.back(), v.front())) return false;
    return true;
}

bool BookCycle::validate(const Graph& g) const {
    if (!spine.validate(g)) return false;
    if (pages.empty()) return false;
    for (int pg : pages) {
        if (!g.has_edge(pg, spine.front()) || !g.has_edge(pg, spine.back())) return false;
        for (int s : spine.v)
            if (s == pg) return false;
    }
    std::vector<int> sorted = pages;
    std::sort(sorted.begin(), sorted.end());
    return std::adjacent_find(sorted.begin(), sorted.end()) == sorted.end();
}

std::vector<int> BookCycle::vertices() const {
    std::vector<int> out = spine.v;
    out.insert(out.end(), pages.begin(), pages.end());
    return out;
}

bool PairSystem::multiplicity_ok() const {
    std::map<int, int> mult;
    for (auto [a, b] : pairs) {
        if (a == b) {
            mult[a] += 2;  // a cycle request uses both slots of its vertex
        } else {
            ++mult[a];
            ++mult[b];
        }
    }
    for (auto [v, c] : mult)
        if (c > 2) return false;
    return true;
}

int find_good_vertex(const Graph& g, const VertexSet& w,
                     const std::vector<const VertexSet*>& targets, double p) {
    std::vector<double> need(targets.size());
    for (size_t i = 0; i < targets.size(); ++i) need[i] = p * double(targets[i]->count()) / 2.0;
    int worst = -1;
    double worst_gap = -1.0;
    for (int v = w.first(); v != -1; v = w.next(v)) {
        bool ok = true;
        double gap = 0.0;
        for (size_t i = 0; i < targets.size(); ++i) {
            double have = double(g.degree_in(v, *targets[i]));
            if (have < need[i]) {
                ok = false;
                gap += need[i] - have;
            }
        }
        if (ok) return v;
        if (worst == -1 || gap < worst_gap) {
            worst = v;
            worst_gap = gap;
        }
    }
    std::ostringstream os;
    os << "no vertex in W meets all degree thresholds; best candidate " << worst
       << " misses by " << worst_gap << " total";
    throw NotFoundError("find_good_vertex", os.str());
}

namespace {

// Recursion from the connecting-path argument: peel a good-degree vertex off
// A, recurse on its neighbourhood in C. Backtracks over candidates within a
// shared node budget; the published sizes make backtracking unnecessary, at
// desk scale it buys robustness.
bool connect_impl(const Graph& g, const VertexSet& a, const VertexSet& b, const VertexSet& c,
                  int ell, double p, long long& budget, std::vector<int>& out) {
    if (ell < 1) return false;
    if (ell == 1) {
        for (int v = a.first(); v != -1; v = a.next(v)) {
            if (--budget < 0) return false;
            int u = g.first_neighbor_in(v, b);  // never v itself: no self-loops
            if (u != -1) {
                out.push_back(v);
                out.push_back(u);
                return true;
            }
        }
        return false;
    }
    double need = p * double(c.count()) / 2.0;
    for (int v = a.first(); v != -1; v = a.next(v)) {
        if (--budget < 0) return false;
        if (double(g.degree_in(v, c)) < need) continue;
        VertexSet a2 = g.neighbors_in(v, c);
        VertexSet b2 = b;
        b2.erase(v);
        VertexSet c2 = c;
        c2.erase(v);
        a2.erase(v);
        out.push_back(v);
        if (connect_impl(g, a2, b2, c2, ell - 1, p, budget, out)) return true;
        out.pop_back();
    }
    return false;
}

void check_params_available(const JumbledParams* params, Mode mode, const char* stage) {
    if (mode == Mode::strict && params == nullptr)
        throw PreconditionError(stage, "strict mode requires certified (p, lambda) parameters");
}

}  // namespace

Path connect_path_inner(const Graph& g, const VertexSet& a, const VertexSet& b,
                        const VertexSet& c, int ell, double p, long long budget) {
    std::vector<int> out;
    if (!connect_impl(g, a, b, c, ell, p, budget, out)) {
        std::ostringstream os;
        os << "no A-B path of length " << ell << " through C (|A|=" << a.count()
           << ", |B|=" << b.count() << ", |C|=" << c.count() << ")";
        throw NotFoundError("connect", os.str());
    }
    Path path{std::move(out)};
    require(path.length() == ell, "connect", "constructed path has wrong length");
    require(path.validate(g), "connect", "constructed path invalid");
    return path;
}

Path find_connecting_path(const Graph& g, const VertexSet& a, const VertexSet& b,
                          const VertexSet& c, int ell, double p, const RunConfig& cfg,
                          const JumbledParams* params) {
    if (ell < 1) throw PreconditionError("connect", "path length must be >= 1");
    check_params_available(params, cfg.mode, "connect");
    if (cfg.mode == Mode::strict) {
        double n = double(g.vertex_count());
        double eps = params->epsilon;
        double min_ab = std::ldexp(eps * p * n, ell - 1);
        double min_c = std::ldexp(eps * n, ell - 1);
        if (double(a.count()) < min_ab || double(b.count()) < min_ab)
            throw PreconditionError("connect", "|A| and |B| must be at least 2^{ell-1} eps p n");
        if (ell >= 2 && double(c.count()) < min_c)
            throw PreconditionError("connect", "|C| must be at least 2^{ell-1} eps n");
        if (ell >= 2 && (c.intersects(a) || c.intersects(b)))
            throw PreconditionError("connect", "C must be disjoint from A and B");
    }
    long long budget = cfg.search_budget;
    std::vector<int> out;
    if (!connect_impl(g, a, b, c, ell, p, budget, out)) {
        std::ostringstream os;
        os << "no A-B path of length " << ell << " through C (|A|=" << a.count()
           << ", |B|=" << b.count() << ", |C|=" << c.count() << ")";
        throw NotFoundError("connect", os.str());
    }
    Path path{std::move(out)};
    require(path.length() == ell, "connect", "constructed path has wrong length");
    require(path.validate(g), "connect", "constructed path invalid");
    return path;
}

BookCycle find_book_cycle(const Graph& g, const VertexSet& u, int ell, int k, double p,
                          const RunConfig& cfg, const JumbledParams* params) {
    if (ell < 4) throw PreconditionError("book_cycle", "ell must be >= 4");
    if (k < 1) throw PreconditionError("book_cycle", "page count K must be >= 1");
    check_params_available(params, cfg.mode, "book_cycle");
    double usize = double(u.count());
    if (cfg.mode == Mode::strict) {
        double n = double(g.vertex_count());
        if (usize < std::ldexp(params->epsilon * n, ell))
            throw PreconditionError("book_cycle", "|U| must be at least 2^ell eps n");
        if (params->epsilon * p * p * n < double(k) / 4.0)
            throw PreconditionError("book_cycle", "needs eps p^2 n >= K/4");
    }

    double thr1 = p * usize / 2.0;
    long long budget = cfg.search_budget;
    for (int u1 = u.first(); u1 != -1; u1 = u.next(u1)) {
        if (double(g.degree_in(u1, u)) < thr1) continue;
        VertexSet w1 = g.neighbors_in(u1, u);
        double thr2 = p * double(w1.count()) / 2.0;
        for (int u2 = u.first(); u2 != -1; u2 = u.next(u2)) {
            if (u2 == u1) continue;
            if (--budget < 0) throw NotFoundError("book_cycle/search", "candidate budget exhausted");
            if (double(g.degree_in(u2, u)) < thr1) continue;
            if (double(g.degree_in(u2, w1)) < thr2) continue;
            VertexSet common = g.neighbors_in(u2, w1);
            common.erase(u1);
            common.erase(u2);
            int have = common.count();
            if (ell == 4) {
                if (have < k + 1) continue;
                int mid = common.first();
                BookCycle bc;
                bc.spine.v = {u1, mid, u2};
                int pg = common.next(mid);
                for (int i = 0; i < k; ++i, pg = common.next(pg)) bc.pages.push_back(pg);
                require(bc.validate(g), "book_cycle", "invalid book cycle constructed");
                return bc;
            }
            if (have < k) continue;
            std::vector<int> pages;
            for (int pg = common.first(); int(pages.size()) < k; pg = common.next(pg))
                pages.push_back(pg);
            VertexSet c = u;
            for (int pg : pages) c.erase(pg);
            c.erase(u1);
            c.erase(u2);
            VertexSet a = g.neighbors_in(u1, c);
            VertexSet b = g.neighbors_in(u2, c);
            long long sub_budget = cfg.search_budget;
            std::vector<int> mid;
            if (!connect_impl(g, a, b, c, ell - 4, p, sub_budget, mid)) continue;
            BookCycle bc;
            bc.spine.v.push_back(u1);
            bc.spine.v.insert(bc.spine.v.end(), mid.begin(), mid.end());
            bc.spine.v.push_back(u2);
            bc.pages = std::move(pages);
            require(bc.spine.length() == ell - 2, "book_cycle", "spine has wrong length");
            require(bc.validate(g), "book_cycle", "invalid book cycle constructed");
            return bc;
        }
    }
    std::ostringstream os;
    os << "no C_" << ell << "(1,...,1," << k << ") found in a set of " << u.count() << " vertices";
    throw NotFoundError("book_cycle/pair", os.str());
}

Path greedy_long_path(const Graph& g, const VertexSet& u, long long ell, double p,
                      const RunConfig& cfg, const JumbledParams* params) {
    if (ell < 0) throw PreconditionError("long_path", "ell must be >= 0");
    check_params_available(params, cfg.mode, "long_path");
    long long usize = u.count();
    if (cfg.mode == Mode::strict) {
        double n = double(g.vertex_count());
        if (double(usize) <= params->epsilon * n)
            throw PreconditionError("long_path", "|U| must exceed eps n");
        if (double(ell) > double(usize) - params->epsilon * n)
            throw PreconditionError("long_path", "ell must be at most |U| - eps n");
        if (p > 0.5) throw PreconditionError("long_path", "requires p <= 1/2");
    }
    if (ell + 1 > usize) throw PreconditionError("long_path", "ell exceeds |U| - 1");

    VertexSet rem = u;
    Path path;
    // base: a good-degree start vertex
    int start = -1;
    double need0 = p * double(usize) / 2.0;
    for (int v = rem.first(); v != -1; v = rem.next(v)) {
        if (double(g.degree_in(v, rem)) >= need0) {
            start = v;
            break;
        }
    }
    if (start == -1) throw NotFoundError("long_path/start", "no start vertex of degree >= p|U|/2");
    path.v.push_back(start);
    rem.erase(start);

    while (path.length() < ell) {
        int tail = path.back();
        double need = p * double(rem.count()) / 2.0;
        VertexSet cand = g.neighbors_in(tail, rem);
        int chosen = -1;
        for (int v = cand.first(); v != -1; v = cand.next(v)) {
            if (double(g.degree_in(v, rem)) >= need) {
                chosen = v;
                break;
            }
        }
        if (chosen == -1) {
            std::ostringstream os;
            os << "stuck at length " << path.length() << " of " << ell << " with " << rem.count()
               << " vertices unused";
            throw NotFoundError("long_path/stuck", os.str());
        }
        path.v.push_back(chosen);
        rem.erase(chosen);
    }
    require(path.validate(g), "long_path", "constructed path invalid");
    return path;
}

std::vector<Path> connect_pairs(const Graph& g, const PairSystem& system, const VertexSet& u,
                                int ell, double delta_prime, double p, const RunConfig& cfg,
                                const JumbledParams* params) {
    if (ell < 3) throw PreconditionError("connect_pairs", "ell must be >= 3");
    if (!system.multiplicity_ok())
        throw PreconditionError("connect_pairs", "some vertex occurs more than twice among pair endpoints");
    size_t r = system.pairs.size();
    if (r == 0) return {};
    check_params_available(params, cfg.mode, "connect_pairs");

    double usize = double(u.count());
    for (auto [a, b] : system.pairs) {
        if (u.contains(a) || u.contains(b))
            throw PreconditionError("connect_pairs", "U must be disjoint from the pair endpoints");
        if (double(g.degree_in(a, u)) < delta_prime * p * usize - 1e-9 ||
            double(g.degree_in(b, u)) < delta_prime * p * usize - 1e-9) {
            std::ostringstream os;
            os << "pair (" << a << "," << b << ") lacks degree delta'*p*|U| = "
               << delta_prime * p * usize << " into U";
            throw PreconditionError("connect_pairs", os.str());
        }
    }
    if (cfg.mode == Mode::strict && double(r) > usize / (8.0 * double(ell)))
        throw PreconditionError("connect_pairs", "needs r <= |U|/(8 ell)");

    // split U so every endpoint keeps half its degree into both halves
    VertexSet endpoints(g.vertex_count());
    for (auto [a, b] : system.pairs) {
        endpoints.insert(a);
        endpoints.insert(b);
    }
    DegreePartition halves = degree_preserving_partition(g, u, endpoints, 1, delta_prime, p, cfg);
    VertexSet pool1 = VertexSet::of(g.vertex_count(), halves.parts[0]);
    VertexSet pool2 = VertexSet::of(g.vertex_count(), halves.parts[1]);

    std::vector<Path> result(r);
    std::vector<bool> done(r, false);
    double thr = delta_prime * p * usize / 8.0;

    auto attach = [&](size_t i, VertexSet& pool) -> bool {
        auto [a, b] = system.pairs[i];
        VertexSet na = g.neighbors_in(a, pool);
        VertexSet nb = (a == b) ? na : g.neighbors_in(b, pool);
        long long budget = cfg.search_budget;
        std::vector<int> inner;
        if (!connect_impl(g, na, nb, pool, ell - 2, p, budget, inner)) return false;
        Path q;
        q.v.push_back(a);
        q.v.insert(q.v.end(), inner.begin(), inner.end());
        if (a != b) q.v.push_back(b);
        for (int x : inner) pool.erase(x);
        require(q.validate(g, /*cyclic=*/a == b), "connect_pairs", "constructed path invalid");
        require(q.length() == (a == b ? ell - 1 : ell), "connect_pairs", "wrong path length");
        result[i] = std::move(q);
        done[i] = true;
        return true;
    };

    // phase one: greedy through the first half while degrees hold up.
    // pool1 only shrinks, so one ascending pass settles every index: a pair
    // skipped for lack of degree can never become eligible later.
    for (size_t i = 0; i < r; ++i) {
        auto [a, b] = system.pairs[i];
        if (double(g.degree_in(a, pool1)) < thr || double(g.degree_in(b, pool1)) < thr) continue;
        attach(i, pool1);  // on failure the pair falls through to phase two
    }

    // phase two: sweep the leftover indices through the reserved half
    size_t leftover = 0;
    for (size_t i = 0; i < r; ++i)
        if (!done[i]) ++leftover;
    double phase2_bound = delta_prime * p * usize / (8.0 * double(ell));
    if (cfg.mode == Mode::strict && double(leftover) > phase2_bound) {
        std::ostringstream os;
        os << "phase-two overflow: " << leftover << " unconnected pairs exceed delta' p |U|/(8 ell) = "
           << phase2_bound;
        throw Error("connect_pairs/phase2_overflow", os.str());
    }
    for (size_t i = 0; i < r; ++i) {
        if (done[i]) continue;
        if (!attach(i, pool2)) {
            std::ostringstream os;
            os << "pair " << i << " could not be connected in phase two (" << leftover
               << " pairs reached phase two, proof bound " << phase2_bound << ")";
            throw NotFoundError("connect_pairs/phase2", os.str());
        }
    }

    // internal disjointness across the family
    VertexSet seen(g.vertex_count());
    for (size_t i = 0; i < r; ++i) {
        auto [a, b] = system.pairs[i];
        for (int v : result[i].v) {
            if (v == a || v == b) continue;
            require(!seen.contains(v), "connect_pairs", "paths share an inner vertex");
            seen.insert(v);
        }
    }
    return result;
}

}  // namespace cyclefactor
