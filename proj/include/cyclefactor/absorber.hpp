#pragma once

#include <optional>
#include <vector>

#include "cyclefactor/config.hpp"
#include "cyclefactor/graph.hpp"
#include "cyclefactor/jumbled.hpp"
#include "cyclefactor/paths.hpp"
#include "cyclefactor/template_graph.hpp"

namespace cyclefactor {

// The absorbing gadget for cycles on ell = s+2 vertices. Spine paths P^i are
// closed into cycles by their page vertices a_ij; auxiliary paths P_ij can be
// closed either by a_ij or by z_j, and that two-way choice, steered by a
// perfect matching in the template, is what absorbs an arbitrary m-subset of
// the flexible zs.
struct AbsorbingStructure {
    Template tpl;
    int ell = 0;
    std::vector<std::pair<int, int>> edges;  // template edges (i, j), fixed order
    std::vector<Path> p1;                    // 3m spine paths of length ell-2
    std::vector<int> a;                      // a[e]: page vertex of edge e
    std::vector<Path> p2;                    // p2[e]: auxiliary path of length ell-2
    std::vector<int> z;                      // z[j], j in [0, 4m)
    VertexSet vertices;                      // V(S)
    int phase_two_indices = 0;               // js that had to spill into V3

    int m() const { return tpl.m; }
    std::vector<int> z1() const {  // flexible zs
        return std::vector<int>(z.begin(), z.begin() + 2 * size_t(m()));
    }
    long long cycle_count() const { return 3LL * m() + (long long)edges.size(); }
    long long vertex_budget() const {  // 3 ell m (Delta(T) + 2)
        return 3LL * ell * m() * (tpl.max_degree + 2);
    }
    // all three adjacency families plus disjointness; exhaustive
    bool check_invariants(const Graph& g) const;
};

struct AbsorberResult {
    AbsorbingStructure s;
    VertexSet w;  // reserved quarter with deg(v, W) >= delta p |W|/8 for all v
};

// Constructive assembly inside host: degree-preserving split, 3m book-cycles
// for the spines and pages, then the two-phase z / P_ij selection avoiding
// the per-index bad sets. A caller-provided template overrides the built-in
// source (random fallback in practical mode, explicit construction in
// strict).
AbsorberResult build_absorbing_structure(const Graph& g, const VertexSet& host, int ell,
                                         long long m, const JumbledParams& params,
                                         const RunConfig& cfg,
                                         const Template* tpl_override = nullptr);

// For |zbar| = m flexible vertices: the C_ell-factor on V(S) minus zbar,
// exactly 3m + |E(T)| cycles. Throws TemplateFlexibilityViolation (as
// Error("absorb/flexibility")) if the template matching fails, which a
// verified template rules out.
std::vector<std::vector<int>> absorb(const Graph& g, const AbsorbingStructure& s,
                                     const std::vector<int>& zbar);

// named constants from the assembly
inline constexpr double kZDegreeFraction = 0.1;    // delta p n / 10 index gate
inline constexpr double kBadSetFraction = 0.05;    // delta p^2 n / 20 bad-set gate
inline constexpr double kEndDegreeFraction = 1.0 / 30.0;  // p n / 30 path-end gate

}  // namespace cyclefactor
