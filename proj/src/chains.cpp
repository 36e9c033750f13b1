#include "cyclefactor/chains.hpp"

#include <algorithm>
#include <sstream>

#include "cyclefactor/errors.hpp"

namespace cyclefactor {

std::vector<int> Chain::vertices() const {
    std::vector<int> out = tips;
    for (auto [u, w] : inner) {
        out.push_back(u);
        out.push_back(w);
    }
    return out;
}

bool Chain::validate(const Graph& g) const {
    if (tips.size() != inner.size() + 1 || inner.empty()) return false;
    std::vector<int> vs = vertices();
    std::sort(vs.begin(), vs.end());
    if (std::adjacent_find(vs.begin(), vs.end()) != vs.end()) return false;
    for (size_t i = 0; i < inner.size(); ++i) {
        auto [u, w] = inner[i];
        int a = tips[i], b = tips[i + 1];
        if (!g.has_edge(a, u) || !g.has_edge(a, w) || !g.has_edge(u, w) || !g.has_edge(u, b) ||
            !g.has_edge(w, b))
            return false;
    }
    return true;
}

std::vector<std::array<int, 3>> Chain::factor_without(int tip_index) const {
    // copies up to the removed tip lean on their left tip, the rest on the right
    std::vector<std::array<int, 3>> out;
    for (size_t i = 0; i < inner.size(); ++i) {
        auto [u, w] = inner[i];
        if (int(i) < tip_index)
            out.push_back({tips[i], u, w});
        else
            out.push_back({u, w, tips[i + 1]});
    }
    return out;
}

namespace {

bool grow_chain(const Graph& g, int copies_left, int tip, VertexSet& free, Chain& chain,
                long long& budget) {
    if (copies_left == 0) return true;
    VertexSet cand = g.neighbors_in(tip, free);
    for (int u = cand.first(); u != -1; u = cand.next(u)) {
        VertexSet both = g.neighbors_in(u, cand);
        for (int w = both.next(u); w != -1; w = both.next(w)) {
            // u < w adjacent, both adjacent to tip; now a far tip
            VertexSet far = g.neighbors_in(u, free);
            far &= g.neighbor_set(w);
            far.erase(u);
            far.erase(w);
            for (int t2 = far.first(); t2 != -1; t2 = far.next(t2)) {
                if (--budget < 0) return false;
                chain.inner.push_back({u, w});
                chain.tips.push_back(t2);
                free.erase(u);
                free.erase(w);
                free.erase(t2);
                if (grow_chain(g, copies_left - 1, t2, free, chain, budget)) return true;
                free.insert(u);
                free.insert(w);
                free.insert(t2);
                chain.inner.pop_back();
                chain.tips.pop_back();
            }
        }
    }
    return false;
}

}  // namespace

Chain build_chain(const Graph& g, int ell_c, const VertexSet& forbidden, const RunConfig& cfg) {
    if (ell_c < 1)
        throw PreconditionError("chain", "a chain consists of at least one copy (ell_c >= 1)");
    VertexSet free = VertexSet::full(g.vertex_count());
    free -= forbidden;
    long long budget = cfg.search_budget;
    for (int t0 = free.first(); t0 != -1; t0 = free.next(t0)) {
        Chain chain;
        chain.tips.push_back(t0);
        free.erase(t0);
        if (grow_chain(g, ell_c, t0, free, chain, budget)) {
            require(chain.validate(g), "chain", "constructed chain invalid");
            return chain;
        }
        free.insert(t0);
        if (budget < 0) break;
    }
    throw NotFoundError("chain", "no chain of the requested length avoiding the forbidden set");
}

std::optional<std::array<int, 3>> find_traversing_triangle(const Graph& g, const Chain& da,
                                                           const Chain& db, const Chain& dc) {
    for (int x : da.removable())
        for (int y : db.removable()) {
            if (!g.has_edge(x, y)) continue;
            for (int z : dc.removable())
                if (g.has_edge(x, z) && g.has_edge(y, z)) return std::array<int, 3>{x, y, z};
        }
    return std::nullopt;
}

ChainAbsorber rebalance_chains(const Graph& g, const std::vector<Chain>& long_chains,
                               const VertexSet& w, const JumbledParams& params,
                               const RunConfig& cfg) {
    int t = int(long_chains.size());
    if (t == 0) throw PreconditionError("rebalance", "need at least one chain");
    int ell = long_chains[0].length();
    for (const auto& c : long_chains) {
        if (c.length() != ell) throw PreconditionError("rebalance", "chains must share one length");
        if (!c.validate(g)) throw PreconditionError("rebalance", "input chain invalid");
    }
    if (ell % 2 != 0) throw PreconditionError("rebalance", "chain length ell must be even");
    if (cfg.mode == Mode::strict) {
        if (t < 2000) throw PreconditionError("rebalance", "strict mode requires t >= 2000");
        double lhs = 400.0 * params.lambda / (params.p * params.p);
        double mid = double(t) * double(ell + 1);
        if (!(lhs <= mid && mid <= double(g.vertex_count()) / 24.0)) {
            std::ostringstream os;
            os << "t*(ell+1) = " << mid << " violates the strict window 400*lambda/p^2 = " << lhs
               << " <= t*(ell+1) <= n/24 = " << double(g.vertex_count()) / 24.0;
            throw PreconditionError("rebalance", os.str());
        }
        if (double(w.count()) < double(g.vertex_count()) / 4.0)
            throw PreconditionError("rebalance", "strict mode requires |W| >= n/4");
    }

    ChainAbsorber ab;
    ab.g_ = &g;
    ab.long_ = long_chains;
    ab.t_ = t;
    ab.edge_threshold_ = kChainEpsilon * params.p * double(t) * double(ell);
    // contiguous quarters
    for (int i = 0; i < t; ++i) ab.groups_[size_t(i * 4 / std::max(1, t))].push_back(i);

    // vertices with low degree to the removable pools of groups 3 and 4 are
    // bad: half-chains must avoid them
    VertexSet rem3(g.vertex_count()), rem4(g.vertex_count());
    for (int i : ab.groups_[2])
        for (int v : long_chains[size_t(i)].removable()) rem3.insert(v);
    for (int i : ab.groups_[3])
        for (int v : long_chains[size_t(i)].removable()) rem4.insert(v);

    VertexSet forbidden = VertexSet::full(g.vertex_count());
    forbidden -= w;
    for (const auto& c : long_chains)
        for (int v : c.vertices()) forbidden.insert(v);
    for (int v = 0; v < g.vertex_count(); ++v) {
        if (forbidden.contains(v)) continue;
        if (double(g.degree_in(v, rem3)) < ab.edge_threshold_ ||
            double(g.degree_in(v, rem4)) < ab.edge_threshold_)
            forbidden.insert(v);
    }

    for (int i = 0; i < 2 * t; ++i) {
        Chain half = build_chain(g, ell / 2, forbidden, cfg);
        for (int v : half.vertices()) forbidden.insert(v);
        ab.half_.push_back(std::move(half));
    }
    return ab;
}

namespace {

// lexicographically first triangle with one removable vertex in each listed
// chain family
std::optional<std::array<int, 3>> triangle_across(
    const Graph& g, const std::vector<const Chain*>& fam_a,
    const std::vector<const Chain*>& fam_b, const std::vector<const Chain*>& fam_c) {
    for (const Chain* ca : fam_a)
        for (int x : ca->removable())
            for (const Chain* cb : fam_b)
                for (int y : cb->removable()) {
                    if (!g.has_edge(x, y)) continue;
                    for (const Chain* cc : fam_c)
                        for (int z : cc->removable())
                            if (g.has_edge(x, z) && g.has_edge(y, z))
                                return std::array<int, 3>{x, y, z};
                }
    return std::nullopt;
}

}  // namespace

ChainAbsorber::FactorResult ChainAbsorber::factor_for(const std::vector<int>& half_ids) const {
    const Graph& g = *g_;
    FactorResult out;
    std::vector<int> active = half_ids;
    std::sort(active.begin(), active.end());
    if (std::adjacent_find(active.begin(), active.end()) != active.end())
        throw PreconditionError("chain_absorber", "half-chain ids repeat");
    for (int i : active)
        if (i < 0 || i >= int(half_.size()))
            throw PreconditionError("chain_absorber", "half-chain id out of range");

    // vertex -> half chain index, for locating the chains a triangle meets
    std::vector<int> owner(size_t(g.vertex_count()), -1);
    for (int i : active)
        for (int v : half_[size_t(i)].removable()) owner[size_t(v)] = i;

    auto emit_half = [&](int idx, int via) {
        for (auto tri : half_[size_t(idx)].factor_without(
                 int(std::find(half_[size_t(idx)].removable().begin(),
                               half_[size_t(idx)].removable().end(), via) -
                     half_[size_t(idx)].removable().begin())))
            out.triangles.push_back(tri);
    };
    auto emit_long = [&](int idx, int via) {
        out.used_long.push_back(idx);
        const Chain& c = long_[size_t(idx)];
        for (auto tri : c.factor_without(int(std::find(c.removable().begin(), c.removable().end(),
                                                       via) -
                                             c.removable().begin())))
            out.triangles.push_back(tri);
    };

    // phase one: traversing triangles among the active half-chains, three at
    // a time, until at most t/8 remain
    while (int(active.size()) > std::max(2, t_ / 8)) {
        size_t third = active.size() / 3;
        std::vector<const Chain*> fa, fb, fc;
        for (size_t k = 0; k < active.size(); ++k) {
            const Chain* c = &half_[size_t(active[k])];
            (k < third ? fa : (k < 2 * third ? fb : fc)).push_back(c);
        }
        auto tri = triangle_across(g, fa, fb, fc);
        if (!tri) break;  // fall through to the matching phases
        auto [x, y, z] = *tri;
        out.triangles.push_back(*tri);
        int ix = owner[size_t(x)], iy = owner[size_t(y)], iz = owner[size_t(z)];
        emit_half(ix, x);
        emit_half(iy, y);
        emit_half(iz, z);
        for (int idx : {ix, iy, iz}) active.erase(std::find(active.begin(), active.end(), idx));
    }

    // matching phases: pair each leftover half-chain with two long chains
    // via a triangle, first through groups 1/2, then through 3/4
    std::vector<char> long_used(long_.size(), 0);
    auto pool_of = [&](int grp) {
        VertexSet pool(g.vertex_count());
        for (int i : groups_[size_t(grp)])
            if (!long_used[size_t(i)])
                for (int v : long_[size_t(i)].removable()) pool.insert(v);
        return pool;
    };
    std::vector<int> long_owner(size_t(g.vertex_count()), -1);
    for (size_t i = 0; i < long_.size(); ++i)
        for (int v : long_[i].removable()) long_owner[size_t(v)] = int(i);

    for (auto [ga, gb] : {std::pair<int, int>{0, 1}, std::pair<int, int>{2, 3}}) {
        bool moved = true;
        while (moved && !active.empty()) {
            moved = false;
            VertexSet pa = pool_of(ga), pb = pool_of(gb);
            for (size_t k = 0; k < active.size(); ++k) {
                int idx = active[k];
                for (int v : half_[size_t(idx)].removable()) {
                    bool gate = ga == 0
                                    ? (double(g.degree_in(v, pa)) > edge_threshold_ &&
                                       double(g.degree_in(v, pb)) > edge_threshold_)
                                    : (g.degree_in(v, pa) > 0 && g.degree_in(v, pb) > 0);
                    if (!gate) continue;
                    // an edge between the two pooled neighbourhoods closes a triangle
                    VertexSet na = g.neighbors_in(v, pa);
                    int d1 = -1, d2 = -1;
                    for (int x = na.first(); x != -1 && d1 == -1; x = na.next(x)) {
                        VertexSet nb = g.neighbors_in(x, pb);
                        nb &= g.neighbor_set(v);
                        int y = nb.first();
                        if (y != -1) {
                            d1 = x;
                            d2 = y;
                        }
                    }
                    if (d1 == -1) continue;
                    out.triangles.push_back({v, d1, d2});
                    emit_half(idx, v);
                    int l1 = long_owner[size_t(d1)], l2 = long_owner[size_t(d2)];
                    emit_long(l1, d1);
                    emit_long(l2, d2);
                    long_used[size_t(l1)] = 1;
                    long_used[size_t(l2)] = 1;
                    active.erase(active.begin() + long(k));
                    moved = true;
                    break;
                }
                if (moved) break;
            }
        }
        if (active.empty()) break;
    }
    if (!active.empty()) {
        std::ostringstream os;
        os << active.size() << " half-chains could not be matched against the long chains";
        throw NotFoundError("chain_absorber/match", os.str());
    }

    std::sort(out.used_long.begin(), out.used_long.end());

    // audit: triangles are disjoint, adjacency-valid, and cover exactly the
    // chosen chains' vertices
    VertexSet covered(g.vertex_count());
    for (auto [x, y, z] : out.triangles) {
        require(g.has_edge(x, y) && g.has_edge(y, z) && g.has_edge(x, z), "chain_absorber",
                "triangle edge missing");
        for (int v : {x, y, z}) {
            require(!covered.contains(v), "chain_absorber", "triangles overlap");
            covered.insert(v);
        }
    }
    VertexSet want(g.vertex_count());
    for (int i : half_ids)
        for (int v : half_[size_t(i)].vertices()) want.insert(v);
    for (int i : out.used_long)
        for (int v : long_[size_t(i)].vertices()) want.insert(v);
    require(covered == want, "chain_absorber", "factor must cover exactly the chosen chains");
    return out;
}

}  // namespace cyclefactor
