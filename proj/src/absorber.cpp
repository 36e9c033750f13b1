#include "cyclefactor/absorber.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "cyclefactor/errors.hpp"
#include "cyclefactor/partition.hpp"

namespace cyclefactor {

bool AbsorbingStructure::check_invariants(const Graph& g) const {
    int n = g.vertex_count();
    // pairwise disjointness of V(P1), V(P2), A, Z
    VertexSet seen(n);
    auto add_all = [&](const std::vector<int>& vs) {
        for (int v : vs) {
            if (seen.contains(v)) return false;
            seen.insert(v);
        }
        return true;
    };
    for (const auto& p : p1)
        if (!add_all(p.v)) return false;
    for (const auto& p : p2)
        if (!add_all(p.v)) return false;
    if (!add_all(a)) return false;
    if (!add_all(z)) return false;
    if (!(seen == vertices)) return false;

    if ((long long)vertices.count() > vertex_budget()) return false;

    for (size_t e = 0; e < edges.size(); ++e) {
        auto [i, j] = edges[e];
        const Path& spine = p1[size_t(i)];
        const Path& aux = p2[e];
        if (spine.length() != ell - 2 || aux.length() != ell - 2) return false;
        if (!spine.validate(g) || !aux.validate(g)) return false;
        int page = a[e];
        if (!g.has_edge(page, spine.front()) || !g.has_edge(page, spine.back())) return false;
        if (!g.has_edge(page, aux.front()) || !g.has_edge(page, aux.back())) return false;
        int zj = z[size_t(j)];
        if (!g.has_edge(zj, aux.front()) || !g.has_edge(zj, aux.back())) return false;
    }
    return true;
}

namespace {

struct PartitionPlan {
    VertexSet v1, v2, v3, w;
};

// strict: four equal quarters as published. practical: half the host for the
// heavy spine/page/path block, an eighth each for the z pool and the spill
// pool, a quarter reserved as W.
PartitionPlan plan_partition(const Graph& g, const VertexSet& host, const JumbledParams& params,
                             const RunConfig& cfg) {
    int n = g.vertex_count();
    VertexSet everyone = VertexSet::full(n);
    PartitionPlan plan{VertexSet(n), VertexSet(n), VertexSet(n), VertexSet(n)};
    if (cfg.mode == Mode::strict) {
        auto dp = degree_preserving_partition(g, host, everyone, 2, params.delta, params.p, cfg);
        plan.v1 = dp.part_set(0, n);
        plan.v2 = dp.part_set(1, n);
        plan.v3 = dp.part_set(2, n);
        plan.w = dp.part_set(3, n);
    } else {
        auto dp = degree_preserving_partition(g, host, everyone, 3, params.delta, params.p, cfg);
        for (int i = 0; i < 4; ++i) plan.v1 |= dp.part_set(i, n);
        plan.v2 = dp.part_set(4, n);
        plan.v3 = dp.part_set(5, n);
        plan.w = dp.part_set(6, n) | dp.part_set(7, n);
    }
    return plan;
}

}  // namespace

AbsorberResult build_absorbing_structure(const Graph& g, const VertexSet& host, int ell,
                                         long long m, const JumbledParams& params,
                                         const RunConfig& cfg, const Template* tpl_override) {
    if (ell < 4) throw PreconditionError("absorber", "ell must be >= 4");
    if (m < 0) throw PreconditionError("absorber", "m must be >= 0");
    long long nh = host.count();
    if (nh == 0) throw PreconditionError("absorber", "host set must be nonempty");

    if (cfg.mode == Mode::strict) {
        double alpha = double(m) / double(nh);
        double alpha_max = cfg.alpha_ell(ell);
        if (alpha > alpha_max) {
            std::ostringstream os;
            os << "alpha = " << alpha << " exceeds alpha(ell) = 1/(60*ell*(K+2)) = " << alpha_max
               << " for ell = " << ell << ", K = " << cfg.K;
            throw PreconditionError("absorber", os.str());
        }
        if (params.p > 1.0 / 3.0)
            throw PreconditionError("absorber", "strict mode requires p <= 1/3");
        double eps0 = std::min({params.delta / (400.0 * cfg.K * ell), std::ldexp(1.0, -(ell + 6)),
                                alpha > 0 ? alpha : alpha_max});
        if (params.epsilon >= eps0)
            throw PreconditionError("absorber", "epsilon must lie below eps_0(delta, ell, K)");
    }

    PartitionPlan plan = plan_partition(g, host, params, cfg);

    AbsorberResult out{AbsorbingStructure{}, plan.w};
    AbsorbingStructure& s = out.s;
    s.ell = ell;
    s.vertices = VertexSet(g.vertex_count());
    if (m == 0) {
        s.tpl.m = 0;
        s.tpl.t.left = s.tpl.t.right = 0;
        return out;
    }

    if (tpl_override) {
        s.tpl = *tpl_override;
        if (s.tpl.m != m) throw PreconditionError("absorber", "template flexibility != m");
    } else if (cfg.mode == Mode::practical) {
        s.tpl = build_random_template(m, cfg.template_degree, cfg.template_seed, cfg);
    } else {
        s.tpl = build_template(m, kStrictTemplatePrimeFloor + 41, cfg);
    }
    if (s.tpl.max_degree > cfg.K)
        throw PreconditionError("absorber", "template max degree exceeds the page budget K");
    s.edges = s.tpl.edges();

    const double p = params.p;
    const double delta = params.delta;
    VertexSet v1_free = plan.v1;
    VertexSet v2_free = plan.v2;
    VertexSet v3_free = plan.v3;

    // 3m vertex-disjoint book-cycles in V1: spines and their pages
    s.p1.resize(size_t(3 * m));
    s.a.assign(s.edges.size(), -1);
    s.p2.resize(s.edges.size());
    std::vector<std::vector<size_t>> edges_of_i(size_t(3 * m)), edges_of_j(size_t(4 * m));
    for (size_t e = 0; e < s.edges.size(); ++e) {
        edges_of_i[size_t(s.edges[e].first)].push_back(e);
        edges_of_j[size_t(s.edges[e].second)].push_back(e);
    }
    for (long long i = 0; i < 3 * m; ++i) {
        int pages_needed = int(edges_of_i[size_t(i)].size());
        require(pages_needed >= 1, "absorber", "template has an isolated left vertex");
        BookCycle bc;
        try {
            bc = find_book_cycle(g, v1_free, ell, pages_needed, p, cfg,
                                 cfg.mode == Mode::strict ? &params : nullptr);
        } catch (const NotFoundError& e) {
            std::ostringstream os;
            os << "book-cycle " << i << " of " << 3 * m << ": " << e.what();
            throw NotFoundError("absorber/book_cycles", os.str());
        }
        s.p1[size_t(i)] = bc.spine;
        for (int v : bc.spine.v) {
            v1_free.erase(v);
            s.vertices.insert(v);
        }
        // lowest-id pages serve the incident template edges in ascending j order
        for (size_t k = 0; k < edges_of_i[size_t(i)].size(); ++k) {
            int page = bc.pages[k];
            s.a[edges_of_i[size_t(i)][k]] = page;
            v1_free.erase(page);
            s.vertices.insert(page);
        }
    }

    // z selection and the P_ij paths, smallest eligible index first
    const double z_gate = kZDegreeFraction * delta * p * double(nh);          // delta p n / 10
    const double bad_gate = kBadSetFraction * delta * p * p * double(nh);     // delta p^2 n / 20
    const double end_gate = kEndDegreeFraction * p * double(nh);              // p n / 30

    s.z.assign(size_t(4 * m), -1);
    std::vector<char> processed(size_t(4 * m), 0);

    auto build_paths_for_j = [&](long long j, VertexSet& pool) {
        // z candidate: lowest vertex of V2 whose shared neighbourhoods with
        // every incident page clear the bad-set gate
        int zj = -1;
        for (int zc = v2_free.first(); zc != -1; zc = v2_free.next(zc)) {
            bool ok = true;
            for (size_t e : edges_of_j[size_t(j)]) {
                VertexSet uij = g.neighbors_in(s.a[e], pool);
                uij &= g.neighbor_set(zc);
                if (double(uij.count()) < bad_gate) {
                    ok = false;
                    break;
                }
            }
            if (ok) {
                zj = zc;
                break;
            }
        }
        if (zj == -1) {
            std::ostringstream os;
            os << "no usable z for index " << j << " (bad-set gate " << bad_gate << ")";
            throw NotFoundError("absorber/z", os.str());
        }
        v2_free.erase(zj);
        s.vertices.insert(zj);
        s.z[size_t(j)] = zj;
        VertexSet nz = g.neighbor_set(zj);

        for (size_t e : edges_of_j[size_t(j)]) {
            VertexSet uij = g.neighbors_in(s.a[e], pool);
            uij &= nz;
            Path pij;
            if (ell == 4) {
                // a middle vertex seeing two ends inside U_ij
                int w = -1, y1 = -1, y2 = -1;
                for (int c = pool.first(); c != -1; c = pool.next(c)) {
                    if (uij.contains(c)) continue;
                    VertexSet ends = g.neighbors_in(c, uij);
                    if (ends.count() >= 2) {
                        w = c;
                        y1 = ends.first();
                        y2 = ends.next(y1);
                        break;
                    }
                }
                if (w == -1)
                    throw NotFoundError("absorber/p2", "no middle vertex for a length-2 path");
                pij.v = {y1, w, y2};
            } else {
                VertexSet interior = pool - uij;
                int y1 = -1, y2 = -1;
                for (int c = uij.first(); c != -1; c = uij.next(c)) {
                    if (double(g.degree_in(c, interior)) < end_gate) continue;
                    if (y1 == -1) {
                        y1 = c;
                    } else {
                        y2 = c;
                        break;
                    }
                }
                if (y2 == -1)
                    throw NotFoundError("absorber/p2", "fewer than two high-degree path ends");
                VertexSet a_side = g.neighbors_in(y1, interior);
                VertexSet b_side = g.neighbors_in(y2, interior);
                Path mid = connect_path_inner(g, a_side, b_side, interior, ell - 4, p,
                                              cfg.search_budget);
                pij.v.push_back(y1);
                pij.v.insert(pij.v.end(), mid.v.begin(), mid.v.end());
                pij.v.push_back(y2);
            }
            require(pij.length() == ell - 2, "absorber", "P_ij has wrong length");
            require(pij.validate(g), "absorber", "P_ij invalid");
            require(g.has_edge(s.a[e], pij.front()) && g.has_edge(s.a[e], pij.back()), "absorber",
                    "page not adjacent to its path ends");
            require(g.has_edge(zj, pij.front()) && g.has_edge(zj, pij.back()), "absorber",
                    "z not adjacent to its path ends");
            for (int v : pij.v) {
                pool.erase(v);
                s.vertices.insert(v);
            }
            s.p2[e] = std::move(pij);
        }
        processed[size_t(j)] = 1;
    };

    // phase one inside V1
    while (true) {
        long long pick = -1;
        for (long long j = 0; j < 4 * m; ++j) {
            if (processed[size_t(j)]) continue;
            bool good = true;
            for (size_t e : edges_of_j[size_t(j)]) {
                if (double(g.degree_in(s.a[e], v1_free)) < z_gate) {
                    good = false;
                    break;
                }
            }
            if (good) {
                pick = j;
                break;
            }
        }
        if (pick == -1) break;
        build_paths_for_j(pick, v1_free);
    }

    // phase two: leftover indices spill into V3
    for (long long j = 0; j < 4 * m; ++j) {
        if (processed[size_t(j)]) continue;
        ++s.phase_two_indices;
        build_paths_for_j(j, v3_free);
    }
    if (cfg.mode == Mode::strict &&
        double(s.phase_two_indices) > params.epsilon * p * p * double(nh))
        throw Error("absorber/phase2", "spill indices exceed eps p^2 n");

    require(s.check_invariants(g), "absorber", "structure failed its invariant audit");
    return out;
}

std::vector<std::vector<int>> absorb(const Graph& g, const AbsorbingStructure& s,
                                     const std::vector<int>& zbar) {
    long long m = s.m();
    if ((long long)zbar.size() != m)
        throw PreconditionError("absorb", "zbar must contain exactly m vertices");

    // map the chosen zs back to flexible indices
    std::vector<int> jbar;
    {
        std::vector<int> z_to_j(size_t(g.vertex_count()), -1);
        for (long long j = 0; j < 2 * m; ++j) z_to_j[size_t(s.z[size_t(j)])] = int(j);
        for (int v : zbar) {
            int j = (v >= 0 && v < g.vertex_count()) ? z_to_j[size_t(v)] : -1;
            if (j < 0) throw PreconditionError("absorb", "zbar must be a subset of Z1");
            jbar.push_back(j);
        }
        std::sort(jbar.begin(), jbar.end());
        if (std::adjacent_find(jbar.begin(), jbar.end()) != jbar.end())
            throw PreconditionError("absorb", "zbar has repeated vertices");
    }

    std::vector<int> match = s.tpl.matching_avoiding(jbar);
    if (m > 0 && match.empty())
        throw Error("absorb/flexibility",
                    "template flexibility violated: no perfect matching avoiding the chosen subset");

    std::vector<char> banned(size_t(4 * m), 0);
    for (int j : jbar) banned[size_t(j)] = 1;

    std::vector<std::vector<int>> cycles;
    cycles.reserve(size_t(s.cycle_count()));
    std::vector<char> edge_matched(s.edges.size(), 0);
    for (size_t e = 0; e < s.edges.size(); ++e) {
        auto [i, j] = s.edges[e];
        if (!banned[size_t(j)] && match[size_t(i)] == j) edge_matched[e] = 1;
    }
    // matched (i, j): a_ij closes the spine P^i, z_j closes P_ij;
    // unmatched edges: a_ij closes P_ij
    for (size_t e = 0; e < s.edges.size(); ++e) {
        auto [i, j] = s.edges[e];
        if (edge_matched[e]) {
            std::vector<int> c1{s.a[e]};
            c1.insert(c1.end(), s.p1[size_t(i)].v.begin(), s.p1[size_t(i)].v.end());
            cycles.push_back(std::move(c1));
            std::vector<int> c2{s.z[size_t(j)]};
            c2.insert(c2.end(), s.p2[e].v.begin(), s.p2[e].v.end());
            cycles.push_back(std::move(c2));
        } else {
            std::vector<int> c{s.a[e]};
            c.insert(c.end(), s.p2[e].v.begin(), s.p2[e].v.end());
            cycles.push_back(std::move(c));
        }
    }
    require((long long)cycles.size() == s.cycle_count(), "absorb", "cycle count must be 3m + |E(T)|");

    // exact audit: disjoint C_ell's covering V(S) minus zbar
    VertexSet covered(g.vertex_count());
    for (const auto& c : cycles) {
        require((int)c.size() == s.ell, "absorb", "cycle has wrong length");
        for (size_t k = 0; k < c.size(); ++k) {
            require(g.has_edge(c[k], c[(k + 1) % c.size()]), "absorb", "cycle edge missing");
            require(!covered.contains(c[k]), "absorb", "cycles overlap");
            covered.insert(c[k]);
        }
    }
    VertexSet want = s.vertices;
    for (int v : zbar) want.erase(v);
    require(covered == want, "absorb", "cycles must cover exactly V(S) minus zbar");
    return cycles;
}

}  // namespace cyclefactor
