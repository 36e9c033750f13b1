#include "cyclefactor/template_graph.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>
#include <functional>
#include <limits>
#include <queue>
#include <random>
#include <sstream>
#include <unordered_map>

#include "cyclefactor/errors.hpp"

namespace cyclefactor {

namespace {

uint64_t mulmod(uint64_t a, uint64_t b, uint64_t m) {
    return (uint64_t)((__uint128_t)a * b % m);
}

uint64_t powmod(uint64_t a, uint64_t e, uint64_t m) {
    uint64_t r = 1 % m;
    a %= m;
    while (e) {
        if (e & 1) r = mulmod(r, a, m);
        a = mulmod(a, a, m);
        e >>= 1;
    }
    return r;
}

uint64_t invmod(uint64_t a, uint64_t q) { return powmod(a % q, q - 2, q); }

}  // namespace

bool is_prime(uint64_t n) {
    if (n < 2) return false;
    for (uint64_t p : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
        if (n % p == 0) return n == p;
    }
    uint64_t d = n - 1;
    int s = 0;
    while ((d & 1) == 0) {
        d >>= 1;
        ++s;
    }
    // deterministic witness set for the full 64-bit range
    for (uint64_t a : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
        uint64_t x = powmod(a, d, n);
        if (x == 1 || x == n - 1) continue;
        bool witness = true;
        for (int i = 1; i < s; ++i) {
            x = mulmod(x, x, n);
            if (x == n - 1) {
                witness = false;
                break;
            }
        }
        if (witness) return false;
    }
    return true;
}

int legendre(uint64_t a, uint64_t q) {
    a %= q;
    if (a == 0) return 0;
    uint64_t e = powmod(a, (q - 1) / 2, q);
    return e == 1 ? 1 : -1;
}

TemplatePrime find_template_prime_from(uint64_t lo, uint64_t p_r, Mode mode) {
    if (!is_prime(p_r) || p_r % 4 != 1)
        throw PreconditionError("template_prime", "p_r must be a prime congruent to 1 mod 4");
    uint64_t step = 4 * p_r;
    uint64_t hard_cap = uint64_t(1) << 31;
    // strict window [lo, 1.01 lo]; widen geometrically otherwise
    double hi = 1.01 * double(lo);
    bool widened = false;
    while (true) {
        // first q == 1 (mod 4 p_r) at or above lo
        uint64_t q = (lo <= 1) ? 1 : ((lo - 2) / step) * step + 1;
        while (q < lo) q += step;
        for (; double(q) <= hi; q += step) {
            if (q > hard_cap)
                throw NotFoundError("template_prime", "no prime q == 1 (mod 4 p_r) below the search cap");
            if (is_prime(q)) return {q, widened};
        }
        if (mode == Mode::strict) {
            std::ostringstream os;
            os << "no prime q == 1 (mod " << step << ") in the strict window [" << lo << ", " << hi
               << "]";
            throw NotFoundError("template_prime", os.str());
        }
        widened = true;
        hi = 2.0 * hi;
        if (hi > double(hard_cap))
            throw NotFoundError("template_prime", "no prime q == 1 (mod 4 p_r) below the search cap");
    }
}

TemplatePrime find_template_prime(long long m, uint64_t p_r, Mode mode) {
    if (m < 1) throw PreconditionError("template_prime", "m must be >= 1");
    uint64_t lo = uint64_t(std::ceil(std::cbrt(21.0 * double(m))));
    return find_template_prime_from(lo, p_r, mode);
}

namespace {

struct Mat {
    // row-major 2x2 over F_q
    uint64_t a, b, c, d;
};

uint64_t mat_key(const Mat& m, uint64_t q) { return ((m.a * q + m.b) * q + m.c) * q + m.d; }

Mat mat_mul(const Mat& x, const Mat& y, uint64_t q) {
    return Mat{(x.a * y.a + x.b * y.c) % q, (x.a * y.b + x.b * y.d) % q,
               (x.c * y.a + x.d * y.c) % q, (x.c * y.b + x.d * y.d) % q};
}

uint64_t mat_det(const Mat& m, uint64_t q) {
    return ((m.a * m.d) % q + q - (m.b * m.c) % q) % q;
}

// PSL representative: of {M, -M} take the one whose first nonzero entry x
// has x <= q - x.
Mat psl_canonical(const Mat& m, uint64_t q) {
    uint64_t entries[4] = {m.a, m.b, m.c, m.d};
    for (uint64_t e : entries) {
        if (e == 0) continue;
        if (e <= q - e) return m;
        return Mat{(q - m.a) % q, (q - m.b) % q, (q - m.c) % q, (q - m.d) % q};
    }
    return m;
}

// PGL representative: scale so the first nonzero entry is 1.
Mat pgl_canonical(const Mat& m, uint64_t q) {
    uint64_t entries[4] = {m.a, m.b, m.c, m.d};
    for (uint64_t e : entries) {
        if (e == 0) continue;
        uint64_t s = invmod(e, q);
        return Mat{mulmod(m.a, s, q), mulmod(m.b, s, q), mulmod(m.c, s, q), mulmod(m.d, s, q)};
    }
    return m;
}

// quaternion solutions a^2+b^2+c^2+d^2 = p with a odd positive and b, c, d
// even, in lexicographic (a,b,c,d) order over the signed integers
std::vector<std::array<long long, 4>> quaternion_generators(uint64_t p) {
    std::vector<std::array<long long, 4>> out;
    long long lim = (long long)std::sqrt(double(p)) + 1;
    long long even_lim = lim - (lim % 2);  // the even loops must start on an even value
    for (long long a = 1; a <= lim; a += 2) {
        for (long long b = -even_lim; b <= even_lim; b += 2) {
            for (long long c = -even_lim; c <= even_lim; c += 2) {
                long long rest = (long long)p - a * a - b * b - c * c;
                if (rest < 0) continue;
                long long d = (long long)std::llround(std::sqrt(double(rest)));
                for (long long dd : {-d, d}) {
                    if (dd % 2 != 0) continue;
                    if (a * a + b * b + c * c + dd * dd != (long long)p) continue;
                    out.push_back({a, b, c, dd});
                    if (dd == 0) break;
                }
            }
        }
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

}  // namespace

RamanujanGraph build_lps_graph(uint64_t p_r, uint64_t q) {
    if (!is_prime(p_r) || p_r % 4 != 1)
        throw PreconditionError("lps", "p_r must be a prime congruent to 1 mod 4");
    if (!is_prime(q) || q % 4 != 1)
        throw PreconditionError("lps", "q must be a prime congruent to 1 mod 4");
    if (p_r == q) throw PreconditionError("lps", "p_r and q must differ");
    if (double(q) <= 2.0 * std::sqrt(double(p_r)))
        throw PreconditionError("lps", "q must exceed 2 sqrt(p_r) for a simple Cayley graph");
    if (q >= 65536) throw PreconditionError("lps", "q too large for the matrix index encoding");

    auto gens4 = quaternion_generators(p_r);
    require(gens4.size() == p_r + 1, "lps", "quaternion solution count must be p_r + 1");

    // i with i^2 == -1 (mod q); exists since q == 1 (mod 4)
    uint64_t nonres = 2;
    while (legendre(nonres, q) != -1) ++nonres;
    uint64_t imag = powmod(nonres, (q - 1) / 4, q);
    require(mulmod(imag, imag, q) == q - 1, "lps", "failed to compute sqrt(-1) mod q");

    auto lift = [&](long long v) { return uint64_t(((v % (long long)q) + (long long)q) % (long long)q); };
    std::vector<Mat> gens;
    for (auto [a, b, c, d] : gens4) {
        uint64_t ea = lift(a), eb = lift(b), ec = lift(c), ed = lift(d);
        uint64_t ib = mulmod(imag, eb, q), id = mulmod(imag, ed, q);
        // [[a+ib, c+id], [-c+id, a-ib]]
        Mat m;
        m.a = (ea + ib) % q;
        m.b = (ec + id) % q;
        m.c = ((q - ec) % q + id) % q;
        m.d = (ea + q - ib) % q;
        require(mat_det(m, q) == p_r % q, "lps", "generator determinant must equal p_r");
        gens.push_back(m);
    }

    bool residue = legendre(p_r, q) == 1;
    RamanujanGraph rg;
    rg.p_r = p_r;
    rg.q = q;
    rg.degree = int(p_r + 1);
    rg.bipartite = !residue;

    std::vector<Mat> verts;
    std::unordered_map<uint64_t, int> index;

    if (residue) {
        // scale generators to determinant 1 and work in PSL(2,q)
        uint64_t root = 0;
        for (uint64_t x = 1; x < q; ++x)
            if (mulmod(x, x, q) == p_r % q) {
                root = x;
                break;
            }
        require(root != 0, "lps", "p_r must have a square root mod q in the residue case");
        uint64_t s = invmod(root, q);
        for (auto& m : gens) {
            m = Mat{mulmod(m.a, s, q), mulmod(m.b, s, q), mulmod(m.c, s, q), mulmod(m.d, s, q)};
            require(mat_det(m, q) == 1, "lps", "scaled generator must land in SL(2,q)");
        }
        long long expect = (long long)(q * q * q - q) / 2;
        verts.reserve(size_t(expect));
        index.reserve(size_t(expect) * 2);
        auto visit = [&](Mat m) {
            Mat cm = psl_canonical(m, q);
            uint64_t key = mat_key(cm, q);
            if (index.emplace(key, int(verts.size())).second) verts.push_back(cm);
        };
        // SL(2,q) enumeration in lexicographic (a,b,c,d) order
        for (uint64_t b = 1; b < q; ++b) {
            uint64_t c = (q - invmod(b, q)) % q;
            for (uint64_t d = 0; d < q; ++d) visit(Mat{0, b, c, d});
        }
        for (uint64_t a = 1; a < q; ++a) {
            uint64_t ia = invmod(a, q);
            for (uint64_t b = 0; b < q; ++b)
                for (uint64_t c = 0; c < q; ++c) visit(Mat{a, b, c, mulmod((1 + mulmod(b, c, q)) % q, ia, q)});
        }
        require((long long)verts.size() == expect, "lps", "PSL(2,q) must have (q^3-q)/2 elements");
    } else {
        long long expect = (long long)(q * q * q - q);
        verts.reserve(size_t(expect));
        index.reserve(size_t(expect) * 2);
        auto visit = [&](Mat m) {
            Mat cm = pgl_canonical(m, q);
            uint64_t key = mat_key(cm, q);
            if (index.emplace(key, int(verts.size())).second) verts.push_back(cm);
        };
        for (uint64_t c = 1; c < q; ++c)
            for (uint64_t d = 0; d < q; ++d) visit(Mat{0, 1, c, d});
        for (uint64_t b = 0; b < q; ++b)
            for (uint64_t c = 0; c < q; ++c)
                for (uint64_t d = 0; d < q; ++d) {
                    if (d == mulmod(b, c, q)) continue;  // singular
                    visit(Mat{1, b, c, d});
                }
        require((long long)verts.size() == expect, "lps", "PGL(2,q) must have q^3-q elements");
        rg.side.resize(verts.size());
        for (size_t i = 0; i < verts.size(); ++i)
            rg.side[i] = legendre(mat_det(verts[i], q), q) == 1 ? 0 : 1;
    }

    GraphBuilder gb(int(verts.size()));
    for (size_t v = 0; v < verts.size(); ++v) {
        for (const Mat& s : gens) {
            Mat m = mat_mul(s, verts[v], q);
            Mat cm = residue ? psl_canonical(m, q) : pgl_canonical(m, q);
            auto it = index.find(mat_key(cm, q));
            require(it != index.end(), "lps", "generator image must stay in the group");
            int u = it->second;
            require(u != int(v), "lps", "Cayley graph must have no self-loops at this q");
            gb.add_edge(int(v), u);
        }
    }
    rg.graph = gb.build();
    for (int v = 0; v < rg.graph.vertex_count(); ++v)
        require(rg.graph.degree(v) == rg.degree, "lps", "graph must be (p_r+1)-regular");
    if (rg.bipartite) {
        for (int v = 0; v < rg.graph.vertex_count(); ++v)
            for (int u : rg.graph.neighbors(v))
                require(rg.side[size_t(u)] != rg.side[size_t(v)], "lps", "PGL Cayley graph must be bipartite");
    }
    return rg;
}

Graph bipartite_double_cover(const Graph& g) {
    int n = g.vertex_count();
    GraphBuilder gb(2 * n);
    for (int u = 0; u < n; ++u)
        for (int v : g.neighbors(u)) {
            gb.add_edge(u, n + v);
        }
    return gb.build();
}

int BipartiteGraph::max_degree() const {
    std::vector<int> rdeg(size_t(right), 0);
    int best = 0;
    for (auto& a : adj) {
        best = std::max(best, int(a.size()));
        for (int v : a) ++rdeg[size_t(v)];
    }
    for (int d : rdeg) best = std::max(best, d);
    return best;
}

MatchingResult bipartite_matching(const BipartiteGraph& b, const std::vector<int>& u,
                                  const std::vector<int>& w) {
    std::vector<char> in_u(size_t(b.left), 0), in_w(size_t(b.right), 0);
    for (int x : u) in_u.at(size_t(x)) = 1;
    for (int x : w) in_w.at(size_t(x)) = 1;

    const int INF = std::numeric_limits<int>::max();
    std::vector<int> match_l(size_t(b.left), -1), match_r(size_t(b.right), -1);
    std::vector<int> dist(size_t(b.left), INF);

    auto bfs = [&]() {
        std::queue<int> qq;
        for (int x : u) {
            if (match_l[size_t(x)] == -1) {
                dist[size_t(x)] = 0;
                qq.push(x);
            } else {
                dist[size_t(x)] = INF;
            }
        }
        bool found = false;
        while (!qq.empty()) {
            int x = qq.front();
            qq.pop();
            for (int y : b.adj[size_t(x)]) {
                if (!in_w[size_t(y)]) continue;
                int nx = match_r[size_t(y)];
                if (nx == -1) {
                    found = true;
                } else if (dist[size_t(nx)] == INF) {
                    dist[size_t(nx)] = dist[size_t(x)] + 1;
                    qq.push(nx);
                }
            }
        }
        return found;
    };
    std::function<bool(int)> dfs = [&](int x) {
        for (int y : b.adj[size_t(x)]) {
            if (!in_w[size_t(y)]) continue;
            int nx = match_r[size_t(y)];
            if (nx == -1 || (dist[size_t(nx)] == dist[size_t(x)] + 1 && dfs(nx))) {
                match_l[size_t(x)] = y;
                match_r[size_t(y)] = x;
                return true;
            }
        }
        dist[size_t(x)] = INF;
        return false;
    };

    MatchingResult res;
    res.match_of_left.assign(size_t(b.left), -1);
    int total = 0;
    while (bfs()) {
        for (int x : u)
            if (match_l[size_t(x)] == -1 && dfs(x)) ++total;
    }
    res.size = total;
    res.match_of_left = match_l;
    res.perfect_on_left = (total == int(u.size()));
    return res;
}

std::vector<std::pair<int, int>> Template::edges() const {
    std::vector<std::pair<int, int>> out;
    for (int i = 0; i < t.left; ++i)
        for (int j : t.adj[size_t(i)]) out.push_back({i, j});
    return out;
}

std::vector<int> Template::matching_avoiding(const std::vector<int>& jbar) const {
    std::vector<char> banned(size_t(t.right), 0);
    for (int j : jbar) banned.at(size_t(j)) = 1;
    std::vector<int> u(size_t(t.left)), w;
    for (int i = 0; i < t.left; ++i) u[size_t(i)] = i;
    for (int j = 0; j < t.right; ++j)
        if (!banned[size_t(j)]) w.push_back(j);
    MatchingResult res = bipartite_matching(t, u, w);
    if (res.size != t.left || int(w.size()) != t.left) return {};
    return res.match_of_left;
}

namespace {

bool flexibility_exhaustive(const Template& tpl) {
    int two_m = 2 * tpl.m;
    std::vector<int> idx(size_t(tpl.m));
    for (int i = 0; i < tpl.m; ++i) idx[size_t(i)] = i;
    // lexicographic m-combinations of [0, 2m)
    while (true) {
        if (tpl.matching_avoiding(idx).empty()) return false;
        int i = tpl.m - 1;
        while (i >= 0 && idx[size_t(i)] == two_m - tpl.m + i) --i;
        if (i < 0) break;
        ++idx[size_t(i)];
        for (int j = i + 1; j < tpl.m; ++j) idx[size_t(j)] = idx[size_t(j - 1)] + 1;
    }
    return true;
}

}  // namespace

bool verify_flexibility(Template& tpl, int trials, uint64_t seed) {
    if (tpl.m == 0) {
        tpl.verified = FlexVerification::exhaustive;
        return true;
    }
    if (tpl.m <= 6) {
        bool ok = flexibility_exhaustive(tpl);
        if (ok) tpl.verified = FlexVerification::exhaustive;
        return ok;
    }
    int two_m = 2 * tpl.m;
    // adversarial picks: highest- and lowest-degree flexible vertices
    std::vector<int> rdeg(size_t(tpl.t.right), 0);
    for (auto& a : tpl.t.adj)
        for (int j : a) ++rdeg[size_t(j)];
    std::vector<int> order((size_t)two_m);
    for (int j = 0; j < two_m; ++j) order[size_t(j)] = j;
    std::stable_sort(order.begin(), order.end(),
                     [&](int x, int y) { return rdeg[size_t(x)] > rdeg[size_t(y)]; });
    std::vector<int> attack_hi(order.begin(), order.begin() + tpl.m);
    std::vector<int> attack_lo(order.end() - tpl.m, order.end());
    if (tpl.matching_avoiding(attack_hi).empty()) return false;
    if (tpl.matching_avoiding(attack_lo).empty()) return false;

    std::mt19937_64 rng(seed);
    std::vector<int> ids((size_t)two_m);
    for (int j = 0; j < two_m; ++j) ids[size_t(j)] = j;
    for (int t = 0; t < trials; ++t) {
        for (int i = 0; i < tpl.m; ++i) {
            int j = i + int(rng() % uint64_t(two_m - i));
            std::swap(ids[size_t(i)], ids[size_t(j)]);
        }
        std::vector<int> jbar(ids.begin(), ids.begin() + tpl.m);
        if (tpl.matching_avoiding(jbar).empty()) return false;
    }
    tpl.verified = FlexVerification::sampled;
    tpl.verification_trials = trials + 2;
    return true;
}

Template build_template(long long m, uint64_t p_r, const RunConfig& cfg) {
    if (m < 1) throw PreconditionError("template", "m must be >= 1");
    if (!is_prime(p_r) || p_r % 4 != 1)
        throw PreconditionError("template", "p_r must be a prime congruent to 1 mod 4");
    if (cfg.mode == Mode::strict && p_r < kStrictTemplatePrimeFloor) {
        std::ostringstream os;
        os << "strict template construction requires p_r >= 68000 (got " << p_r << ")";
        throw PreconditionError("template", os.str());
    }

    uint64_t q;
    if (cfg.mode == Mode::strict) {
        q = find_template_prime(m, p_r, cfg.mode).q;
    } else {
        // size the host so each side has at least 10m vertices: smallest
        // prime q == 1 (mod 4) with legendre(p_r, q) != 0, q > 2 sqrt(p_r),
        // (q^3-q)/2 >= 10m
        q = 5;
        while (true) {
            if (is_prime(q) && q != p_r && double(q) > 2.0 * std::sqrt(double(p_r)) &&
                (q * q * q - q) / 2 >= uint64_t(10 * m))
                break;
            q += 4;
            if (q > (uint64_t(1) << 22))
                throw NotFoundError("template", "no suitable host prime found");
        }
    }

    RamanujanGraph rg = build_lps_graph(p_r, q);
    int d = rg.degree;
    double threshold = double(d) * kTemplateDegreeThresholdFraction;
    long long budget = (long long)std::ceil(kTemplateDeletionBudgetFactor * double(m) / double(d));

    // bipartite host with parts X, Y of size (q^3-q)/2 each
    Graph host;
    std::vector<int> xs, ys;
    if (rg.bipartite) {
        host = rg.graph;
        for (int v = 0; v < host.vertex_count(); ++v)
            (rg.side[size_t(v)] == 0 ? xs : ys).push_back(v);
    } else {
        host = bipartite_double_cover(rg.graph);
        int n = rg.graph.vertex_count();
        for (int v = 0; v < n; ++v) xs.push_back(v);
        for (int v = 0; v < n; ++v) ys.push_back(n + v);
    }
    if ((long long)xs.size() < 3 * m || (long long)ys.size() < 4 * m)
        throw InfeasibleError("template", "host parts too small for the requested flexibility");

    int hn = host.vertex_count();
    VertexSet v1(hn), v2(hn);
    for (long long i = 0; i < 3 * m; ++i) v1.insert(xs[size_t(i)]);
    for (long long i = 0; i < 2 * m; ++i) v2.insert(ys[size_t(i)]);

    // trim low-degree vertices until both directions clear d/10
    long long deleted1 = 0, deleted2 = 0;
    bool changed = true;
    while (changed) {
        changed = false;
        for (int v = v1.first(); v != -1; v = v1.next(v)) {
            if (double(host.degree_in(v, v2)) < threshold) {
                v1.erase(v);
                ++deleted1;
                changed = true;
                break;
            }
        }
        if (changed) continue;
        for (int v = v2.first(); v != -1; v = v2.next(v)) {
            if (double(host.degree_in(v, v1)) < threshold) {
                v2.erase(v);
                ++deleted2;
                changed = true;
                break;
            }
        }
    }
    if (deleted1 > budget || deleted2 > budget) {
        std::ostringstream os;
        os << "degree-trim cascade removed " << std::max(deleted1, deleted2)
           << " vertices, beyond the 34000 m / d budget of " << budget
           << "; the spectral certificate does not support this configuration";
        throw Error("template/trim", os.str());
    }

    // refill to exact part sizes with vertices already clearing the threshold
    for (size_t i = 0; v1.count() < 3 * m && i < xs.size(); ++i) {
        int v = xs[i];
        if (v1.contains(v)) continue;
        if (double(host.degree_in(v, v2)) >= threshold) v1.insert(v);
    }
    for (size_t i = 0; v2.count() < 2 * m && i < ys.size(); ++i) {
        int v = ys[i];
        if (v2.contains(v)) continue;
        if (double(host.degree_in(v, v1)) >= threshold) v2.insert(v);
    }
    if (v1.count() != 3 * m || v2.count() != 2 * m)
        throw Error("template/refill", "could not refill the parts to 3m and 2m at this scale");

    // flexible set: 2m lowest-id vertices of Y outside V2 with degree >= d/10 into V1
    std::vector<int> j1;
    for (int y : ys) {
        if ((long long)j1.size() == 2 * m) break;
        if (v2.contains(y)) continue;
        if (double(host.degree_in(y, v1)) >= threshold) j1.push_back(y);
    }
    if ((long long)j1.size() != 2 * m)
        throw Error("template/flexible", "not enough qualifying vertices for the flexible set");

    // assemble: I = V1 ascending -> [0,3m); J1 -> [0,2m); J2 = V2 -> [2m,4m)
    std::vector<int> i_ids = v1.to_vector();
    std::vector<int> j2_ids = v2.to_vector();
    std::sort(j1.begin(), j1.end());
    std::vector<int> jmap(size_t(hn), -1);
    for (size_t k = 0; k < j1.size(); ++k) jmap[size_t(j1[k])] = int(k);
    for (size_t k = 0; k < j2_ids.size(); ++k) jmap[size_t(j2_ids[k])] = int(2 * m + (long long)k);

    Template tpl;
    tpl.m = int(m);
    tpl.t.left = int(3 * m);
    tpl.t.right = int(4 * m);
    tpl.t.adj.assign(size_t(3 * m), {});
    for (size_t i = 0; i < i_ids.size(); ++i) {
        for (int y : host.neighbors(i_ids[i])) {
            int j = jmap[size_t(y)];
            if (j >= 0) tpl.t.adj[i].push_back(j);
        }
        std::sort(tpl.t.adj[i].begin(), tpl.t.adj[i].end());
    }
    tpl.max_degree = tpl.t.max_degree();
    require(tpl.max_degree <= d, "template", "template degree exceeds the host degree");

    if (!verify_flexibility(tpl, cfg.template_trials, cfg.template_seed))
        throw Error("template/flexibility",
                    "flexibility verification found a flexible subset without a perfect matching");
    return tpl;
}

Template build_random_template(long long m, int degree_target, uint64_t seed,
                               const RunConfig& cfg) {
    if (m < 1) throw PreconditionError("template", "m must be >= 1");
    if (degree_target < 3)
        throw PreconditionError(
            "template",
            "degree_target below 3 cannot cover a flexible set of size 2m: the matching needs "
            "3m edges that survive any m-subset deletion");

    int left = int(3 * m), right = int(4 * m);
    int two_m = int(2 * m);
    int dj = std::min<int>(degree_target, left);

    const int max_attempts = 64;
    for (int attempt = 0; attempt < max_attempts; ++attempt) {
        std::mt19937_64 rng(seed + uint64_t(attempt) * 0x9e3779b97f4a7c15ULL);
        Template tpl;
        tpl.m = int(m);
        tpl.t.left = left;
        tpl.t.right = right;
        tpl.t.adj.assign(size_t(left), {});
        std::vector<std::vector<char>> have(size_t(left), std::vector<char>(size_t(right), 0));

        // two anchors per left vertex into the never-deleted half, dealt so
        // every J2 vertex holds exactly three anchor slots: the anchor
        // subgraph is (2,3)-biregular, which makes its J2-side Hall
        // condition hold outright, and no flexible deletion can isolate a
        // left vertex
        {
            std::vector<int> slots;
            slots.reserve(size_t(6 * m));
            std::vector<int> perm((size_t)two_m);
            for (int rpt = 0; rpt < 3; ++rpt) {
                for (int j = 0; j < two_m; ++j) perm[size_t(j)] = j;
                for (int j = two_m - 1; j > 0; --j) {
                    int k = int(rng() % uint64_t(j + 1));
                    std::swap(perm[size_t(j)], perm[size_t(k)]);
                }
                slots.insert(slots.end(), perm.begin(), perm.end());
            }
            // separate equal adjacent pairs so each left vertex gets two
            // distinct anchors
            size_t ns = slots.size();
            for (size_t k = 0; k + 1 < ns; k += 2) {
                size_t probe = k + 2;
                while (slots[k] == slots[k + 1] && probe < ns) {
                    std::swap(slots[k + 1], slots[probe]);
                    ++probe;
                }
            }
            for (int i = 0; i < left; ++i) {
                for (int j2 : {slots[size_t(2 * i)], slots[size_t(2 * i + 1)]}) {
                    int j = two_m + j2;
                    if (!have[size_t(i)][size_t(j)]) {
                        have[size_t(i)][size_t(j)] = 1;
                        tpl.t.adj[size_t(i)].push_back(j);
                    }
                }
            }
        }

        // the flexible side: each of the 2m deletable vertices picks dj
        // distinct neighbours, round-robin with probing
        std::vector<int> js((size_t)two_m);
        for (int j = 0; j < two_m; ++j) js[size_t(j)] = j;
        int li = 0;
        for (int round = 0; round < dj; ++round) {
            for (int j = two_m - 1; j > 0; --j) {
                int k = int(rng() % uint64_t(j + 1));
                std::swap(js[size_t(j)], js[size_t(k)]);
            }
            for (int j : js) {
                int i = li;
                li = (li + 1) % left;
                int steps = 0;
                while (have[size_t(i)][size_t(j)] && steps < left) {
                    i = (i + 1) % left;
                    ++steps;
                }
                if (steps == left) continue;
                have[size_t(i)][size_t(j)] = 1;
                tpl.t.adj[size_t(i)].push_back(j);
            }
        }
        for (auto& a : tpl.t.adj) std::sort(a.begin(), a.end());
        tpl.max_degree = tpl.t.max_degree();
        if (verify_flexibility(tpl, cfg.template_trials, seed ^ 0x5bd1e995u)) return tpl;
    }
    std::ostringstream os;
    os << "no flexible random template found after " << max_attempts << " seeds (m=" << m
       << ", degree_target=" << degree_target << ")";
    throw NotFoundError("template/random", os.str());
}

void Template::save(std::ostream& out) const {
    out << m << ' ' << max_degree << '\n';
    for (int i = 0; i < t.left; ++i)
        for (int j : t.adj[size_t(i)]) out << i << ' ' << j << '\n';
}

void Template::save_file(const std::string& path) const {
    std::ofstream out(path);
    if (!out) throw Error("io", "cannot open " + path + " for writing");
    save(out);
}

Template Template::load(std::istream& in) {
    Template tpl;
    int md;
    if (!(in >> tpl.m >> md)) throw Error("io", "template header must be 'm max_degree'", ExitCode::parse);
    tpl.t.left = 3 * tpl.m;
    tpl.t.right = 4 * tpl.m;
    tpl.t.adj.assign(size_t(tpl.t.left), {});
    int i, j;
    while (in >> i >> j) {
        if (i < 0 || i >= tpl.t.left || j < 0 || j >= tpl.t.right)
            throw Error("io", "template edge out of range", ExitCode::parse);
        tpl.t.adj[size_t(i)].push_back(j);
    }
    for (auto& a : tpl.t.adj) std::sort(a.begin(), a.end());
    tpl.max_degree = tpl.t.max_degree();
    if (tpl.max_degree > md)
        throw Error("io", "template header max_degree below the actual degree", ExitCode::parse);
    tpl.max_degree = md;
    return tpl;
}

Template Template::load_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("io", "cannot open " + path, ExitCode::parse);
    return Template::load(in);
}

}  // namespace cyclefactor
