#include "cyclefactor/embedder.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <cmath>
#include <numeric>
#include <set>
#include <sstream>

#include "cyclefactor/errors.hpp"
#include "cyclefactor/partition.hpp"
#include "cyclefactor/paths.hpp"

namespace cyclefactor {

void CycleFamilySpec::save(std::ostream& out) const {
    for (long long l : lengths) out << l << '\n';
}

CycleFamilySpec CycleFamilySpec::load(std::istream& in) {
    CycleFamilySpec spec;
    long long l;
    while (in >> l) {
        if (l < 3) throw Error("spec", "cycle lengths must be at least 3", ExitCode::parse);
        spec.lengths.push_back(l);
    }
    return spec;
}

CycleFamilySpec CycleFamilySpec::load_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("spec", "cannot open " + path, ExitCode::parse);
    return load(in);
}

void Embedding::save(std::ostream& out) const {
    for (const auto& c : cycles) {
        for (size_t i = 0; i < c.size(); ++i) out << c[i] << (i + 1 < c.size() ? ' ' : '\n');
        if (c.empty()) out << '\n';
    }
}

Embedding Embedding::load(std::istream& in) {
    Embedding emb;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::istringstream ls(line);
        std::vector<int> c;
        int v;
        while (ls >> v) c.push_back(v);
        emb.cycles.push_back(std::move(c));
    }
    return emb;
}

Embedding Embedding::load_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("embedding", "cannot open " + path, ExitCode::parse);
    return load(in);
}

VerifyReport verify_embedding(const Graph& g, const CycleFamilySpec& spec, const Embedding& emb) {
    VerifyReport rep;
    auto fail = [&](const std::string& why) {
        rep.ok = false;
        rep.reason = why;
        return rep;
    };
    std::multiset<long long> want(spec.lengths.begin(), spec.lengths.end());
    std::multiset<long long> have;
    for (const auto& c : emb.cycles) have.insert((long long)c.size());
    if (want != have) {
        std::ostringstream os;
        os << "cycle length multiset mismatch: spec has " << spec.lengths.size()
           << " cycles totalling " << spec.total() << ", embedding has " << emb.cycles.size();
        return fail(os.str());
    }
    std::vector<char> used(size_t(g.vertex_count()), 0);
    for (size_t k = 0; k < emb.cycles.size(); ++k) {
        const auto& c = emb.cycles[k];
        if (c.size() < 3) {
            std::ostringstream os;
            os << "cycle " << k << " has fewer than 3 vertices";
            return fail(os.str());
        }
        for (size_t i = 0; i < c.size(); ++i) {
            int v = c[i];
            if (v < 0 || v >= g.vertex_count()) {
                std::ostringstream os;
                os << "cycle " << k << " position " << i << ": vertex " << v << " out of range";
                return fail(os.str());
            }
            if (used[size_t(v)]) {
                std::ostringstream os;
                os << "vertex " << v << " appears in more than one place (second time in cycle "
                   << k << ")";
                return fail(os.str());
            }
            used[size_t(v)] = 1;
            int u = c[(i + 1) % c.size()];
            if (!g.has_edge(v, u)) {
                std::ostringstream os;
                os << "missing edge (" << v << "," << u << ") in cycle " << k;
                return fail(os.str());
            }
        }
    }
    return rep;
}

bool SegmentBudget::check(const std::vector<long long>& lengths, long long r, long long v0_count,
                          long long m_prime) const {
    if (q.size() != lengths.size()) return false;
    long long s1 = 0, s2 = 0, s3 = 0;
    for (size_t i = 0; i < q.size(); ++i) {
        auto [q1, q2, q3] = q[i];
        if (q1 < 0 || q2 < 0 || q3 < 0) return false;
        if (6 * q1 + 3 * q2 + 3 * q3 > lengths[i] - 10) return false;
        // splice identity: segments reassemble to the exact cycle length
        long long li = lengths[i];
        if ((6 * q1 + 3 * q2 + 3) + (li - 6 * q1 - 3 * q2 - 3 * q3 - 9) + 3 * q3 + 6 != li)
            return false;
        s1 += q1;
        s2 += q2;
        s3 += q3;
    }
    return s1 == r && s2 == v0_count && s3 == m_prime;
}

SegmentBudget plan_segment_budget(const std::vector<long long>& lengths, long long r,
                                  long long v0_count, long long m_prime) {
    if (r < 0 || v0_count < 0 || m_prime < 0)
        throw PreconditionError("budget", "negative column totals");
    long long capacity = 0;
    for (long long l : lengths) {
        if (l < 10) throw PreconditionError("budget", "cycle lengths must be at least 10 here");
        capacity += l - 10;
    }
    long long need = 6 * r + 3 * v0_count + 3 * m_prime;
    if (need > capacity) {
        std::ostringstream os;
        os << "infeasible budget: 6r + 3|V0| + 3m' = " << need << " exceeds sum(l_i - 10) = "
           << capacity;
        throw InfeasibleError("budget", os.str());
    }
    SegmentBudget out;
    out.q.assign(lengths.size(), {0, 0, 0});
    long long rem1 = r, rem2 = v0_count, rem3 = m_prime;
    for (size_t i = 0; i < lengths.size(); ++i) {
        long long slack = lengths[i] - 10;
        long long q1 = std::min(rem1, slack / 6);
        out.q[i][0] = q1;
        rem1 -= q1;
        slack -= 6 * q1;
        long long q2 = std::min(rem2, slack / 3);
        out.q[i][1] = q2;
        rem2 -= q2;
        slack -= 3 * q2;
        long long q3 = std::min(rem3, slack / 3);
        out.q[i][2] = q3;
        rem3 -= q3;
    }
    if (rem1 || rem2 || rem3) {
        std::ostringstream os;
        os << "greedy fill left a deficit of (" << rem1 << ", " << rem2 << ", " << rem3
           << ") across the three columns";
        throw InfeasibleError("budget", os.str());
    }
    require(out.check(lengths, r, v0_count, m_prime), "budget", "planner output fails its own check");
    return out;
}

std::vector<std::array<int, 3>> brute_triangle_factor(const Graph& g, const VertexSet& host) {
    int count = host.count();
    if (count % 3 != 0)
        throw PreconditionError("triangles", "host size must be divisible by 3");
    VertexSet free = host;
    std::vector<std::array<int, 3>> tris;
    std::vector<int> owner(size_t(g.vertex_count()), -1);

    auto take = [&](int a, int b, int c) {
        owner[size_t(a)] = owner[size_t(b)] = owner[size_t(c)] = int(tris.size());
        tris.push_back({a, b, c});
        free.erase(a);
        free.erase(b);
        free.erase(c);
    };
    auto find_pair = [&](int v, const VertexSet& pool) -> std::pair<int, int> {
        VertexSet nb = g.neighbors_in(v, pool);
        for (int x = nb.first(); x != -1; x = nb.next(x)) {
            int y = g.first_neighbor_in(x, nb);
            if (y != -1 && y != x) return {std::min(x, y), std::max(x, y)};
        }
        return {-1, -1};
    };

    // greedy pass
    for (int v = free.first(); v != -1;) {
        auto [x, y] = find_pair(v, free);
        if (x != -1) {
            int nxt = v;
            take(v, x, y);
            v = free.next(nxt);
        } else {
            v = free.next(v);
        }
    }

    // repair: swap a stuck vertex into an existing triangle, freeing one of
    // its vertices; bounded, deterministic
    long long budget = 30LL * count + 1000;
    while (!free.empty()) {
        if (--budget < 0)
            throw NotFoundError("triangles",
                                "greedy + swap repair could not complete the triangle factor");
        int v = free.first();
        bool moved = false;
        VertexSet nb = g.neighbor_set(v);
        for (int x = nb.first(); x != -1 && !moved; x = nb.next(x)) {
            if (owner[size_t(x)] == -1 || !host.contains(x)) continue;
            int tid = owner[size_t(x)];
            auto [a, b, c] = tris[size_t(tid)];
            // v replaces one corner; that corner returns to the pool
            for (int out : {a, b, c}) {
                int p1 = (out == a) ? b : a;
                int p2 = (out == c) ? b : c;
                if (p1 == p2) continue;
                if (g.has_edge(v, p1) && g.has_edge(v, p2)) {
                    owner[size_t(out)] = -1;
                    owner[size_t(v)] = tid;
                    tris[size_t(tid)] = {v, p1, p2};
                    free.erase(v);
                    free.insert(out);
                    moved = true;
                    break;
                }
            }
        }
        if (!moved) {
            // rotate: push v to the back of consideration by trying a direct
            // triangle once more (pool may have changed)
            auto [x, y] = find_pair(v, free);
            if (x != -1) {
                take(v, x, y);
            } else {
                throw NotFoundError("triangles", "stuck vertex admits no triangle or swap");
            }
        } else {
            // the freed vertex may close a triangle immediately
            int w = free.first();
            auto [x, y] = find_pair(w, free);
            if (x != -1) take(w, x, y);
        }
    }
    return tris;
}

namespace {

struct LengthPool {
    // constructed cycles grouped by length, drained in construction order
    std::map<long long, std::vector<std::vector<int>>> by_len;
    std::map<long long, size_t> cursor;

    void add(std::vector<int> cycle) { by_len[(long long)cycle.size()].push_back(std::move(cycle)); }
    std::vector<int> pull(long long len) {
        auto& vec = by_len[len];
        size_t& cur = cursor[len];
        require(cur < vec.size(), "embed", "cycle pool exhausted for a requested length");
        return vec[cur++];
    }
};

}  // namespace

Embedding embed_short_cycles(const Graph& g, const CycleFamilySpec& spec,
                             const JumbledParams& params, const RunConfig& cfg, EmbedStats* stats) {
    return embed_short_cycles_in(g, VertexSet::full(g.vertex_count()), spec, params, cfg, stats);
}

Embedding embed_short_cycles_in(const Graph& g, const VertexSet& host, const CycleFamilySpec& spec,
                                const JumbledParams& params, const RunConfig& cfg,
                                EmbedStats* stats) {
    EmbedStats local;
    EmbedStats& st = stats ? *stats : local;
    long long nh = host.count();
    for (long long l : spec.lengths)
        if (l < 4 || l > cfg.L)
            throw PreconditionError("embed_short", "all lengths must lie in [4, L]");
    long long total = spec.total();
    if (total > nh)
        throw InfeasibleError("embed_short", "spec total exceeds the available vertex count");
    const double p = params.p;
    const JumbledParams* prm = cfg.mode == Mode::strict ? &params : nullptr;

    if (cfg.mode == Mode::strict) {
        long long L0 = cfg.L0();
        double eps0 = cfg.delta / (8000.0 * double(cfg.K) * double(L0) * double(L0) * double(L0) *
                                   std::ldexp(1.0, int(std::min<long long>(L0 + 6, 1000))));
        if (params.epsilon >= eps0)
            throw PreconditionError("embed_short",
                                    "epsilon must lie below eps_0(delta, K, L0) in strict mode");
    }

    // pad to the full host with 4-cycles; up to three high-id vertices are set
    // aside when the gap is not a multiple of four
    VertexSet work = host;
    long long gap = nh - total;
    {
        long long drop = gap % 4;
        std::vector<int> ids = host.to_vector();
        for (long long k = 0; k < drop; ++k) work.erase(ids[size_t(nh - 1 - k)]);
        gap -= drop;
    }
    std::vector<long long> all_lengths = spec.lengths;
    for (long long k = 0; k < gap / 4; ++k) all_lengths.push_back(4);

    // majority length: most vertices, ties to the smaller length
    std::map<long long, long long> vertices_of;
    for (long long l : all_lengths) vertices_of[l] += l;
    long long ell = 0, best = -1;
    for (auto [l, v] : vertices_of)
        if (v > best) {
            best = v;
            ell = l;
        }
    st.notes.push_back("majority_length=" + std::to_string(ell));

    // split work into V1 (1/L0 of it) and V2
    long long L0 = cfg.mode == Mode::practical ? std::min<long long>(cfg.L0(), 16) : cfg.L0();
    int kk = 0;
    while ((1LL << kk) < L0) ++kk;
    double delta_h = params.delta;
    DegreePartition dp = degree_preserving_partition(g, work, work, kk, delta_h, p, cfg);
    int n = g.vertex_count();
    VertexSet v2(n);
    for (size_t i = 1; i < dp.parts.size(); ++i) v2 |= dp.part_set(int(i), n);

    // greedily embed the non-majority cycles in V2, longest first
    std::vector<size_t> other_idx;
    for (size_t k = 0; k < all_lengths.size(); ++k)
        if (all_lengths[k] != ell) other_idx.push_back(k);
    std::stable_sort(other_idx.begin(), other_idx.end(),
                     [&](size_t a, size_t b) { return all_lengths[a] > all_lengths[b]; });
    LengthPool pool;
    VertexSet v2_free = v2;
    VertexSet used(n);
    for (size_t k : other_idx) {
        long long len = all_lengths[k];
        BookCycle bc = find_book_cycle(g, v2_free, int(len), 1, p, cfg, prm);
        ++st.book_cycles;
        std::vector<int> cyc = bc.spine.v;
        cyc.push_back(bc.pages[0]);
        for (int v : cyc) {
            v2_free.erase(v);
            used.insert(v);
        }
        pool.add(std::move(cyc));
    }

    // the majority territory
    VertexSet u = work - used;
    long long cu = u.count();
    long long c_ell = vertices_of[ell] / ell;
    require(cu == c_ell * ell, "embed_short", "majority territory has unexpected size");

    // absorbing structure on U
    double delta_u = delta_h * double(dp.parts[0].size()) / (2.0 * double(cu));
    JumbledParams pu = params;
    pu.delta = delta_u;
    long long m = cfg.alpha_for(int(ell)) > 0
                      ? (long long)(cfg.alpha_for(int(ell)) * double(cu))
                      : 1;
    {
        // cap so the spine/page/path block fits its half of U
        long long per_m = 3 * (ell - 1) + ell * (6 + 2LL * cfg.template_degree);
        long long cap = (long long)(0.8 * double(cu) / 2.0 / double(per_m));
        m = std::max(1LL, std::min(m, cap));
    }
    Template tpl = cfg.mode == Mode::practical
                       ? build_random_template(m, cfg.template_degree, cfg.template_seed, cfg)
                       : build_template(m, kStrictTemplatePrimeFloor + 41, cfg);
    AbsorberResult ar = build_absorbing_structure(g, u, int(ell), m, pu, cfg, &tpl);
    const AbsorbingStructure& s = ar.s;
    st.m = m;
    VertexSet w_free = ar.w;

    VertexSet z1set(n);
    for (long long j = 0; j < 2 * m; ++j) z1set.insert(s.z[size_t(j)]);

    // sweep the vertices that see too little of Z1 through W
    VertexSet free = u - s.vertices;
    VertexSet u0(n);
    double z_need = p * double(z1set.count()) / 2.0;
    for (int v = free.first(); v != -1; v = free.next(v))
        if (double(g.degree_in(v, z1set)) <= z_need) u0.insert(v);
    if (!u0.empty()) {
        PairSystem sys;
        for (int v = u0.first(); v != -1; v = u0.next(v)) sys.pairs.push_back({v, v});
        VertexSet sweep_pool = (w_free - s.vertices) - u0;
        auto qs = connect_pairs(g, sys, sweep_pool, int(ell), delta_u / 4.0, p, cfg, prm);
        st.pairs_connected += (long long)qs.size();
        for (const auto& q : qs) {
            for (int v : q.v) {
                free.erase(v);
                w_free.erase(v);
                used.insert(v);
            }
            pool.add(q.v);
        }
    }

    // greedy majority-length cycles, keeping W for last, down to the target
    long long t_max = m / (ell - 1);
    long long t_target = -1;
    for (long long x = t_max; x >= 0; --x)
        if ((x + m) % ell == 0) {
            t_target = x;
            break;
        }
    if (t_target < 0)
        throw InfeasibleError("embed_short", "no reachable leftover size; m too small for ell");
    VertexSet w_now = w_free - s.vertices;
    VertexSet early = free - w_now;
    auto drain = [&](VertexSet& region, long long floor_total) {
        while (free.count() > floor_total) {
            BookCycle bc;
            try {
                bc = find_book_cycle(g, region, int(ell), 1, p, cfg, prm);
            } catch (const NotFoundError&) {
                break;
            }
            ++st.book_cycles;
            std::vector<int> cyc = bc.spine.v;
            cyc.push_back(bc.pages[0]);
            for (int v : cyc) {
                region.erase(v);
                free.erase(v);
            }
            pool.add(std::move(cyc));
        }
    };
    drain(early, t_target + w_now.count());
    VertexSet rest = free;
    drain(rest, t_target);

    // insurance: sweep stragglers through whatever free pool remains
    if (free.count() > t_target) {
        long long r_now = free.count();
        long long sweep = (r_now - t_target) / ell;
        require((r_now - t_target) % ell == 0, "embed_short", "leftover congruence broken");
        PairSystem sys;
        VertexSet sweep_set(n);
        for (int v = free.first(); v != -1 && (long long)sys.pairs.size() < sweep;
             v = free.next(v)) {
            sys.pairs.push_back({v, v});
            sweep_set.insert(v);
        }
        VertexSet sweep_pool = free - sweep_set;
        auto qs = connect_pairs(g, sys, sweep_pool, int(ell), 0.25, p, cfg, prm);
        st.pairs_connected += (long long)qs.size();
        st.stall_swept += sweep;
        for (const auto& q : qs) {
            for (int v : q.v) free.erase(v);
            pool.add(q.v);
        }
    }

    // close the leftover through Z1
    VertexSet u1 = free;
    long long cu1 = u1.count();
    require(cu1 == t_target, "embed_short", "greedy fill missed the leftover target");
    VertexSet z1_free = z1set;
    if (cu1 > 0) {
        PairSystem sys;
        for (int v = u1.first(); v != -1; v = u1.next(v)) sys.pairs.push_back({v, v});
        auto qs = connect_pairs(g, sys, z1_free, int(ell), 0.45, p, cfg, prm);
        st.pairs_connected += (long long)qs.size();
        for (const auto& q : qs) {
            for (size_t i = 1; i < q.v.size(); ++i) z1_free.erase(q.v[i]);
            pool.add(q.v);
        }
    }
    // top up inside Z1 so exactly m flexible vertices stay uncovered
    long long fill = (m - cu1 * (ell - 1)) / ell;
    for (long long k = 0; k < fill; ++k) {
        BookCycle bc = find_book_cycle(g, z1_free, int(ell), 1, p, cfg, prm);
        ++st.book_cycles;
        std::vector<int> cyc = bc.spine.v;
        cyc.push_back(bc.pages[0]);
        for (int v : cyc) z1_free.erase(v);
        pool.add(std::move(cyc));
    }
    require(z1_free.count() == m, "embed_short", "flexible leftovers must number exactly m");

    // absorb: the consumed flexible vertices are the removed set
    std::vector<int> zbar;
    for (long long j = 0; j < 2 * m; ++j)
        if (!z1_free.contains(s.z[size_t(j)])) zbar.push_back(s.z[size_t(j)]);
    auto cycles = absorb(g, s, zbar);
    st.absorbed_cycles = (long long)cycles.size();
    st.phase_two_spills = s.phase_two_indices;
    for (auto& c : cycles) pool.add(std::move(c));

    // hand cycles back in the requested order; padding cycles stay unclaimed
    Embedding emb;
    emb.cycles.reserve(spec.lengths.size());
    for (long long len : spec.lengths) emb.cycles.push_back(pool.pull(len));
    VerifyReport rep = verify_embedding(g, spec, emb);
    if (!rep.ok) throw Error("embed_short/verify", rep.reason, ExitCode::verification_failure);
    return emb;
}

namespace {

// element of a phase-one ordering: a relabeled length-2 path (triple) or a
// low-degree vertex incorporated early
struct SegmentElement {
    bool is_triple = false;
    long long h = -1;  // triple index
    int v = -1;        // singleton vertex
};

}  // namespace

Embedding embed_long_cycles(const Graph& g, const CycleFamilySpec& spec,
                            const JumbledParams& params, const RunConfig& cfg, EmbedStats* stats) {
    return embed_long_cycles_in(g, VertexSet::full(g.vertex_count()), spec, params, cfg, stats);
}

Embedding embed_long_cycles_in(const Graph& g, const VertexSet& host, const CycleFamilySpec& spec,
                               const JumbledParams& params, const RunConfig& cfg,
                               EmbedStats* stats) {
    EmbedStats local;
    EmbedStats& st = stats ? *stats : local;
    long long nh = host.count();
    for (long long l : spec.lengths)
        if (l <= cfg.L)
            throw PreconditionError("embed_long", "all lengths must exceed L");
    long long total = spec.total();
    if (total > nh)
        throw InfeasibleError("embed_long", "spec total exceeds the available vertex count");
    const double p = params.p;
    const JumbledParams* prm = cfg.mode == Mode::strict ? &params : nullptr;
    const int n = g.vertex_count();

    if (cfg.mode == Mode::strict) {
        if (params.p > 1.0 / 3.0)
            throw PreconditionError("embed_long", "strict mode requires p <= 1/3");
        double eps1 = cfg.delta / (1600000.0 * double(cfg.K));
        if (params.epsilon >= eps1)
            throw PreconditionError("embed_long",
                                    "epsilon must lie below eps_1(delta, K) in strict mode");
    }

    // pad so at most L vertices stay uncovered; one long padding cycle keeps
    // the cycle count small
    std::vector<long long> lengths = spec.lengths;
    long long gap = nh - total;
    if (gap > cfg.L) lengths.push_back(gap);
    long long l_sum = std::accumulate(lengths.begin(), lengths.end(), 0LL);
    long long uncovered = nh - l_sum;
    require(uncovered >= 0 && uncovered <= cfg.L, "embed_long", "padding arithmetic broken");

    // process longest first; map back at the end
    std::vector<size_t> order(lengths.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](size_t a, size_t b) { return lengths[a] > lengths[b]; });
    std::vector<long long> lens;
    for (size_t k : order) lens.push_back(lengths[k]);
    long long t = (long long)lens.size();
    st.t = t;

    long long m_prime = cfg.m_prime_for(nh);
    st.m_prime = m_prime;
    long long m = std::max({(long long)(cfg.gamma * double(nh)), 2 * m_prime + 4 * t + 8, 8LL});
    {
        long long per_m = 9 + 4 * (6 + 2LL * cfg.template_degree);
        long long cap = (long long)(0.8 * double(nh) / 2.0 / double(per_m));
        if (cap < 2 * m_prime + 4 * t)
            throw InfeasibleError("embed_long",
                                  "too many cycles for this host: the flexible pool cannot cover "
                                  "2m' + 4t connection slots");
        m = std::min(m, cap);
    }
    st.m = m;

    Template tpl = cfg.mode == Mode::practical
                       ? build_random_template(m, cfg.template_degree, cfg.template_seed, cfg)
                       : build_template(m, kStrictTemplatePrimeFloor + 41, cfg);
    long long r = 3 * m + tpl.t.edge_count();

    // budget feasibility before any graph work
    plan_segment_budget(lens, r, 0, m_prime);

    AbsorberResult ar = build_absorbing_structure(g, host, 4, m, params, cfg, &tpl);
    const AbsorbingStructure& s = ar.s;
    VertexSet w_free = ar.w;
    require((long long)(s.p1.size() + s.p2.size()) == r, "embed_long", "path relabeling count");

    // triples Q_h: first the spines, then the auxiliary paths
    std::vector<const Path*> q_paths;
    for (const auto& pth : s.p1) q_paths.push_back(&pth);
    for (const auto& pth : s.p2) q_paths.push_back(&pth);

    // Z' and the low-degree set V0
    VertexSet z1set(n);
    for (long long j = 0; j < 2 * m; ++j) z1set.insert(s.z[size_t(j)]);
    long long z_prime_size = m + 2 * m_prime + 4 * t;
    require(z_prime_size <= 2 * m, "embed_long", "Z' cannot exceed Z1");
    VertexSet z_prime(n);
    {
        long long picked = 0;
        for (int v = z1set.first(); v != -1 && picked < z_prime_size; v = z1set.next(v)) {
            z_prime.insert(v);
            ++picked;
        }
    }
    VertexSet pool_p = (host - s.vertices) | (z1set - z_prime);
    VertexSet v0(n);
    double z_need = p * double(z_prime_size) / 2.0;
    for (int v = pool_p.first(); v != -1; v = pool_p.next(v))
        if (double(g.degree_in(v, z_prime)) <= z_need) v0.insert(v);
    long long v0_count = v0.count();

    SegmentBudget budget = plan_segment_budget(lens, r, v0_count, m_prime);

    // phase (i): distribute triples and V0 vertices across the cycles in id
    // order, filling each cycle's quota
    std::vector<std::vector<SegmentElement>> elems((size_t)(t));
    {
        long long h = 0;
        int v = v0.first();
        for (long long i = 0; i < t; ++i) {
            for (long long k = 0; k < budget.q[size_t(i)][0]; ++k)
                elems[size_t(i)].push_back({true, h++, -1});
            for (long long k = 0; k < budget.q[size_t(i)][1]; ++k) {
                elems[size_t(i)].push_back({false, -1, v});
                v = v0.next(v);
            }
        }
        require(h == r && v == -1, "embed_long", "phase-one distribution incomplete");
    }

    // phase (ii): segment endpoints x1, x2 and the joining length-3 paths
    std::vector<int> x1((size_t)t), x2((size_t)t);
    {
        VertexSet cand = pool_p - w_free;
        cand -= v0;
        cand -= z1set;  // keep the flexible pool out of the endpoints
        int v = cand.first();
        for (long long i = 0; i < t; ++i) {
            x1[size_t(i)] = v;
            v = cand.next(v);
            x2[size_t(i)] = v;
            v = cand.next(v);
            require(x2[size_t(i)] != -1, "embed_long", "ran out of segment endpoints");
        }
    }
    VertexSet used(n);
    for (long long i = 0; i < t; ++i) {
        used.insert(x1[size_t(i)]);
        used.insert(x2[size_t(i)]);
    }

    PairSystem phase2_pairs;
    std::vector<std::vector<size_t>> pair_slots((size_t)(t));  // per cycle, indices into the system
    for (long long i = 0; i < t; ++i) {
        int prev_out = x1[size_t(i)];
        for (const auto& e : elems[size_t(i)]) {
            int in = e.is_triple ? q_paths[size_t(e.h)]->front() : e.v;
            pair_slots[size_t(i)].push_back(phase2_pairs.pairs.size());
            phase2_pairs.pairs.push_back({prev_out, in});
            prev_out = e.is_triple ? q_paths[size_t(e.h)]->v[1] : e.v;
        }
        pair_slots[size_t(i)].push_back(phase2_pairs.pairs.size());
        phase2_pairs.pairs.push_back({prev_out, x2[size_t(i)]});
    }
    std::vector<Path> joins;
    if (!phase2_pairs.pairs.empty()) {
        VertexSet sweep_pool = w_free - v0;
        joins = connect_pairs(g, phase2_pairs, sweep_pool, 3, params.delta / 9.0, p, cfg, prm);
        st.pairs_connected += (long long)joins.size();
        for (const auto& q : joins)
            for (int v : q.v) used.insert(v);
    }
    for (int v = v0.first(); v != -1; v = v0.next(v)) used.insert(v);

    // phase (iii): the long greedy paths
    VertexSet u_free = pool_p - used;
    std::vector<Path> spines((size_t)(t));
    for (long long i = 0; i < t; ++i) {
        auto [q1, q2, q3] = budget.q[size_t(i)];
        long long len = lens[size_t(i)] - 6 * q1 - 3 * q2 - 3 * q3 - 9;
        spines[size_t(i)] = greedy_long_path(g, u_free, len, p, cfg, prm);
        for (int v : spines[size_t(i)].v) u_free.erase(v);
    }

    // phase (iv): exactly m' slack vertices remain (plus the uncovered tail)
    require(u_free.count() == m_prime + uncovered, "embed_long",
            "free pool after the greedy phase must be exactly m' plus the uncovered tail");
    std::vector<std::vector<int>> slack((size_t)(t));
    {
        int v = u_free.first();
        for (long long i = 0; i < t; ++i)
            for (long long k = 0; k < budget.q[size_t(i)][2]; ++k) {
                slack[size_t(i)].push_back(v);
                v = u_free.next(v);
            }
    }

    // phase (v): close every cycle through Z'
    PairSystem closing;
    std::vector<std::vector<size_t>> close_slots((size_t)(t));
    for (long long i = 0; i < t; ++i) {
        auto& sl = slack[size_t(i)];
        close_slots[size_t(i)].push_back(closing.pairs.size());
        closing.pairs.push_back({x2[size_t(i)], spines[size_t(i)].front()});
        int prev = spines[size_t(i)].back();
        for (int uv : sl) {
            close_slots[size_t(i)].push_back(closing.pairs.size());
            closing.pairs.push_back({prev, uv});
            prev = uv;
        }
        close_slots[size_t(i)].push_back(closing.pairs.size());
        closing.pairs.push_back({prev, x1[size_t(i)]});
    }
    VertexSet z_pool = z_prime;
    auto closers = connect_pairs(g, closing, z_pool, 3, 0.45, p, cfg, prm);
    st.pairs_connected += (long long)closers.size();
    VertexSet z_used(n);
    for (const auto& q : closers)
        for (size_t i = 1; i + 1 < q.v.size(); ++i) z_used.insert(q.v[i]);
    require((long long)z_used.count() == 2 * (2 * t + m_prime), "embed_long",
            "phase five must consume exactly 2(2t + m') flexible vertices");

    // absorb against the untouched flexible set
    VertexSet z_rest = z_prime - z_used;  // Z'': exactly m vertices
    require(z_rest.count() == m, "embed_long", "Z'' must have exactly m vertices");
    std::vector<int> zbar;
    for (long long j = 0; j < 2 * m; ++j) {
        int zv = s.z[size_t(j)];
        if (!z_rest.contains(zv)) zbar.push_back(zv);
    }
    auto c4s = absorb(g, s, zbar);
    st.absorbed_cycles = (long long)c4s.size();
    st.phase_two_spills = s.phase_two_indices;

    // y_h for every triple: the vertex that closed Q_h in the factor
    std::vector<int> y_of(size_t(r), -1);
    {
        std::vector<long long> h_of_front(size_t(n), -1);
        for (long long h = 0; h < r; ++h) h_of_front[size_t(q_paths[size_t(h)]->front())] = h;
        for (const auto& c : c4s) {
            require(c.size() == 4, "embed_long", "absorbed cycles must be 4-cycles");
            long long h = h_of_front[size_t(c[1])];
            require(h >= 0, "embed_long", "absorbed cycle does not match a relabeled path");
            y_of[size_t(h)] = c[0];
        }
    }

    // assemble the cycles
    std::vector<std::vector<int>> built((size_t)(t));
    for (long long i = 0; i < t; ++i) {
        std::vector<int>& seq = built[size_t(i)];
        seq.push_back(x1[size_t(i)]);
        auto append_join = [&](const Path& q) {
            // q = [from, w1, w2, to]; from is already in place, to comes next
            for (size_t k = 1; k + 1 < q.v.size(); ++k) seq.push_back(q.v[k]);
        };
        for (size_t e = 0; e < elems[size_t(i)].size(); ++e) {
            append_join(joins[pair_slots[size_t(i)][e]]);
            const auto& el = elems[size_t(i)][e];
            if (el.is_triple) {
                const Path& q = *q_paths[size_t(el.h)];
                int y = y_of[size_t(el.h)];
                require(y >= 0, "embed_long", "triple was never absorbed");
                seq.push_back(q.v[0]);  // a_h
                seq.push_back(y);
                seq.push_back(q.v[2]);  // c_h
                seq.push_back(q.v[1]);  // b_h
            } else {
                seq.push_back(el.v);
            }
        }
        append_join(joins[pair_slots[size_t(i)].back()]);
        seq.push_back(x2[size_t(i)]);

        const auto& cl = close_slots[size_t(i)];
        size_t ci = 0;
        append_join(closers[cl[ci++]]);
        for (int v : spines[size_t(i)].v) seq.push_back(v);
        for (int uv : slack[size_t(i)]) {
            append_join(closers[cl[ci++]]);
            seq.push_back(uv);
        }
        append_join(closers[cl[ci++]]);
        require((long long)seq.size() == lens[size_t(i)], "embed_long",
                "assembled cycle has the wrong length");
    }

    Embedding emb;
    emb.cycles.resize(spec.lengths.size());
    for (size_t k = 0; k < order.size(); ++k) {
        if (order[k] < spec.lengths.size()) emb.cycles[order[k]] = std::move(built[k]);
    }
    VerifyReport rep = verify_embedding(g, spec, emb);
    if (!rep.ok) throw Error("embed_long/verify", rep.reason, ExitCode::verification_failure);
    return emb;
}

Embedding embed_two_factor(const Graph& g, const CycleFamilySpec& spec,
                           const JumbledParams& params, const RunConfig& cfg,
                           const TriangleProvider& triangles, EmbedStats* stats) {
    EmbedStats local;
    EmbedStats& st = stats ? *stats : local;
    const int n = g.vertex_count();
    if (spec.total() != n)
        throw InfeasibleError("embed_two_factor",
                              "the spec must sum to exactly n; pad the family first");
    for (long long l : spec.lengths)
        if (l < 3) throw PreconditionError("embed_two_factor", "cycle lengths must be >= 3");

    // split into triangles, short cycles, long cycles
    CycleFamilySpec f1, f2, f3;
    std::vector<size_t> idx1, idx2, idx3;
    for (size_t k = 0; k < spec.lengths.size(); ++k) {
        long long l = spec.lengths[k];
        if (l == 3) {
            f1.lengths.push_back(l);
            idx1.push_back(k);
        } else if (l <= cfg.L) {
            f2.lengths.push_back(l);
            idx2.push_back(k);
        } else {
            f3.lengths.push_back(l);
            idx3.push_back(k);
        }
    }
    long long n1 = f1.total(), n2 = f2.total(), n3 = f3.total();
    if (n1 > 0 && !triangles)
        throw CapabilityError("embed_two_factor",
                              "spec contains triangles but no triangle provider is configured");
    if (n1 % 3 != 0) throw InfeasibleError("embed_two_factor", "triangle total must be divisible by 3");

    Embedding emb;
    emb.cycles.resize(spec.lengths.size());
    VertexSet covered(n);
    auto place_sub = [&](const std::vector<size_t>& idx, Embedding sub) {
        for (size_t k = 0; k < idx.size(); ++k) {
            for (int v : sub.cycles[k]) covered.insert(v);
            emb.cycles[idx[k]] = std::move(sub.cycles[k]);
        }
    };
    auto place_triangles = [&](const std::vector<std::array<int, 3>>& tris) {
        require(tris.size() == idx1.size(), "embed_two_factor", "triangle count mismatch");
        for (size_t k = 0; k < idx1.size(); ++k) {
            emb.cycles[idx1[k]] = {tris[k][0], tris[k][1], tris[k][2]};
            for (int v : tris[k]) covered.insert(v);
        }
    };

    if (n2 == 0 && n3 == 0) {
        // pure triangle factor: the provider spans the whole graph
        place_triangles(triangles(g, VertexSet::full(n)));
    } else {
        VertexSet full = VertexSet::full(n);
        DegreePartition dp = degree_preserving_partition(g, full, full, 2, cfg.delta, params.p, cfg);
        VertexSet q0 = dp.part_set(0, n), q1 = dp.part_set(1, n), q2 = dp.part_set(2, n),
                  q3 = dp.part_set(3, n);
        // delta for a host whose guarantees come from the quarters it fully contains
        auto delta_for = [&](const VertexSet& host) {
            double lb = 0.0;
            for (const VertexSet* q : {&q0, &q1, &q2, &q3})
                if (q->is_subset_of(host)) lb += cfg.delta * params.p * double(q->count()) / 2.0;
            double rel = lb / (params.p * double(host.count()));
            return std::max(rel, cfg.delta / 8.0);
        };
        auto run_stage = [&](const CycleFamilySpec& f, const std::vector<size_t>& idx,
                             bool is_long, const VertexSet& host) {
            JumbledParams sub = params;
            sub.delta = delta_for(host);
            Embedding e = is_long ? embed_long_cycles_in(g, host, f, sub, cfg, &st)
                                  : embed_short_cycles_in(g, host, f, sub, cfg, &st);
            place_sub(idx, std::move(e));
        };

        // the larger of the two cycle families goes first
        struct Stage {
            const CycleFamilySpec* f;
            const std::vector<size_t>* idx;
            bool is_long;
            long long size;
        };
        std::vector<Stage> mid;
        if (n2 >= n3) {
            if (n2) mid.push_back({&f2, &idx2, false, n2});
            if (n3) mid.push_back({&f3, &idx3, true, n3});
        } else {
            if (n3) mid.push_back({&f3, &idx3, true, n3});
            if (n2) mid.push_back({&f2, &idx2, false, n2});
        }

        bool tri_major = n1 >= (long long)q0.count();
        if (!tri_major && n1 > 0) {
            // the triangle family is too small to earn the reserved quarter;
            // pack it greedily into Q0 before the cycle stages
            long long want = n1 / 3;
            std::vector<std::array<int, 3>> tris;
            VertexSet pool = q0;
            for (int v = pool.first(); v != -1 && (long long)tris.size() < want;) {
                VertexSet nb = g.neighbors_in(v, pool);
                int x = -1, y = -1;
                for (int c = nb.first(); c != -1 && x == -1; c = nb.next(c)) {
                    int d = g.first_neighbor_in(c, nb);
                    if (d != -1) {
                        x = c;
                        y = d;
                    }
                }
                if (x == -1) {
                    v = pool.next(v);
                    continue;
                }
                tris.push_back({v, std::min(x, y), std::max(x, y)});
                int nxt = v;
                pool.erase(v);
                pool.erase(x);
                pool.erase(y);
                v = pool.next(nxt);
            }
            if ((long long)tris.size() < want)
                throw NotFoundError("embed_two_factor/triangles",
                                    "greedy packing could not place the triangle family");
            place_triangles(tris);
        }

        for (size_t si = 0; si < mid.size(); ++si) {
            VertexSet host(n);
            if (si == 0) {
                host = q2 | q3;
                if (!tri_major) host |= q0 - covered;
                if (mid.size() == 1 || mid[si].size > (long long)host.count()) host |= q1;
            } else {
                host = (q1 | q2 | q3) - covered;
                if (!tri_major) host |= q0 - covered;
            }
            if (mid[si].size > (long long)host.count())
                throw InfeasibleError("embed_two_factor", "stage host too small for its family");
            run_stage(*mid[si].f, *mid[si].idx, mid[si].is_long, host);
        }

        if (tri_major) {
            VertexSet rest = full - covered;
            require((long long)rest.count() == n1, "embed_two_factor",
                    "triangle stage must receive exactly its own vertices");
            place_triangles(triangles(g, rest));
        }
    }

    VerifyReport rep = verify_embedding(g, spec, emb);
    if (!rep.ok) throw Error("embed_two_factor/verify", rep.reason, ExitCode::verification_failure);
    return emb;
}

}  // namespace cyclefactor
