#pragma once

#include <array>
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "cyclefactor/absorber.hpp"
#include "cyclefactor/config.hpp"
#include "cyclefactor/graph.hpp"
#include "cyclefactor/jumbled.hpp"

namespace cyclefactor {

// Requested family of vertex-disjoint cycles. lengths[k] >= 3.
struct CycleFamilySpec {
    std::vector<long long> lengths;

    long long total() const {
        long long s = 0;
        for (long long l : lengths) s += l;
        return s;
    }
    void save(std::ostream& out) const;                 // one length per line
    static CycleFamilySpec load(std::istream& in);
    static CycleFamilySpec load_file(const std::string& path);
};

// cycles[k] lists the vertices of the cycle realizing lengths[k], in cyclic
// order.
struct Embedding {
    std::vector<std::vector<int>> cycles;

    void save(std::ostream& out) const;                 // one line per cycle
    static Embedding load(std::istream& in);
    static Embedding load_file(const std::string& path);
};

struct VerifyReport {
    bool ok = true;
    std::string reason;  // first failure, precisely located
};

// Multiset of cycle lengths equals the spec, global vertex-disjointness,
// every cyclic adjacency present.
VerifyReport verify_embedding(const Graph& g, const CycleFamilySpec& spec, const Embedding& emb);

// Per-cycle budget rows (q1, q2, q3): 6q1 + 3q2 + 3q3 <= l_i - 10, with
// column sums (r, v0_count, m_prime). Greedy water-fill in index order.
struct SegmentBudget {
    std::vector<std::array<long long, 3>> q;

    bool check(const std::vector<long long>& lengths, long long r, long long v0_count,
               long long m_prime) const;
};

SegmentBudget plan_segment_budget(const std::vector<long long>& lengths, long long r,
                                  long long v0_count, long long m_prime);

// Supplies a triangle factor covering the host set exactly.
using TriangleProvider =
    std::function<std::vector<std::array<int, 3>>(const Graph&, const VertexSet&)>;

// Greedy matching into triangles with a local swap repair; intended for
// dense instances of a few thousand vertices.
std::vector<std::array<int, 3>> brute_triangle_factor(const Graph& g, const VertexSet& host);

struct EmbedStats {
    long long book_cycles = 0;
    long long pairs_connected = 0;
    long long absorbed_cycles = 0;
    long long phase_two_spills = 0;
    long long stall_swept = 0;
    long long m = 0;
    long long m_prime = 0;
    long long t = 0;
    std::vector<std::string> notes;
};

// Short-cycle families (lengths in [4, L]): majority length absorbed, the
// rest embedded greedily, remainder closed through the flexible set.
Embedding embed_short_cycles(const Graph& g, const CycleFamilySpec& spec,
                             const JumbledParams& params, const RunConfig& cfg,
                             EmbedStats* stats = nullptr);
Embedding embed_short_cycles_in(const Graph& g, const VertexSet& host, const CycleFamilySpec& spec,
                                const JumbledParams& params, const RunConfig& cfg,
                                EmbedStats* stats = nullptr);

// Long-cycle families (lengths > L): three-phase segment construction around
// a C4 absorbing structure.
Embedding embed_long_cycles(const Graph& g, const CycleFamilySpec& spec,
                            const JumbledParams& params, const RunConfig& cfg,
                            EmbedStats* stats = nullptr);
Embedding embed_long_cycles_in(const Graph& g, const VertexSet& host, const CycleFamilySpec& spec,
                               const JumbledParams& params, const RunConfig& cfg,
                               EmbedStats* stats = nullptr);

// The top-level dispatcher: splits the spec into triangles / short / long,
// partitions the host, and runs the sub-embedders in the published order
// (triangles always last, via the pluggable provider).
Embedding embed_two_factor(const Graph& g, const CycleFamilySpec& spec,
                           const JumbledParams& params, const RunConfig& cfg,
                           const TriangleProvider& triangles = nullptr,
                           EmbedStats* stats = nullptr);

}  // namespace cyclefactor
