#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "cyclefactor/config.hpp"
#include "cyclefactor/graph.hpp"

namespace cyclefactor {

// Deterministic Miller-Rabin, exact below 2^64.
bool is_prime(uint64_t n);
// Legendre symbol (a/q) by Euler's criterion; q an odd prime.
int legendre(uint64_t a, uint64_t q);

struct TemplatePrime {
    uint64_t q = 0;
    bool widened = false;  // the tight interval was empty, search widened
};

// Smallest prime q == 1 (mod 4 p_r) with q >= (21 m)^{1/3}. Strict mode also
// demands q <= 1.01 (21 m)^{1/3}; otherwise the window widens geometrically
// and the result is flagged.
TemplatePrime find_template_prime(long long m, uint64_t p_r, Mode mode);
TemplatePrime find_template_prime_from(uint64_t lo, uint64_t p_r, Mode mode);

// Cayley graph on PSL(2,q) (p_r a quadratic residue mod q) or PGL(2,q)
// (non-residue; bipartite) with the p_r + 1 integral-quaternion generators.
struct RamanujanGraph {
    Graph graph;
    uint64_t p_r = 0, q = 0;
    int degree = 0;
    bool bipartite = false;
    // for the bipartite (PGL) case: side of each vertex
    std::vector<int8_t> side;
};

RamanujanGraph build_lps_graph(uint64_t p_r, uint64_t q);

// Two copies of V with cross edges mirroring the original adjacency;
// vertex (v, side b) gets id v + b*n.
Graph bipartite_double_cover(const Graph& g);

// Bipartite graph with explicit sides, the shape templates and matchings
// live on.
struct BipartiteGraph {
    int left = 0, right = 0;
    std::vector<std::vector<int>> adj;  // adj[u] = right-neighbours of left u

    long long edge_count() const {
        long long s = 0;
        for (auto& a : adj) s += (long long)a.size();
        return s;
    }
    int max_degree() const;
};

struct MatchingResult {
    std::vector<int> match_of_left;  // right id or -1, indices into the full right side
    int size = 0;
    bool perfect_on_left = false;
};

// Maximum matching between U (left ids) and W (right ids) by layered
// augmenting paths (Hopcroft-Karp).
MatchingResult bipartite_matching(const BipartiteGraph& b, const std::vector<int>& u,
                                  const std::vector<int>& w);

enum class FlexVerification { unverified, sampled, exhaustive };

// Bipartite template on I (3m, left) and J (4m, right; flexible set J1 =
// [0, 2m)): removing any m vertices of J1 leaves a perfect matching.
struct Template {
    int m = 0;
    BipartiteGraph t;
    int max_degree = 0;
    FlexVerification verified = FlexVerification::unverified;
    int verification_trials = 0;

    std::vector<std::pair<int, int>> edges() const;  // (i, j) in fixed order
    // perfect matching of I into J minus the flexible subset jbar; empty on failure
    std::vector<int> matching_avoiding(const std::vector<int>& jbar) const;

    void save(std::ostream& out) const;
    void save_file(const std::string& path) const;
    static Template load(std::istream& in);
    static Template load_file(const std::string& path);
};

// Flexibility check: exhaustive for m <= 6 (every m-subset of J1), else
// `trials` sampled subsets plus a greedy adversarial subset. Returns true
// when no counterexample was found and records the level reached.
bool verify_flexibility(Template& tpl, int trials, uint64_t seed);

// The explicit construction: pick q, build the LPS graph and its bipartite
// host, trim low-degree vertices against the d/10 threshold, refill to exact
// part sizes, then take the flexible set from the leftover high-degree
// vertices. Strict mode enforces p_r >= 68000 and the tight prime window;
// practical mode sizes q by the host-part window and gates on verification.
Template build_template(long long m, uint64_t p_r, const RunConfig& cfg);

// Random bounded-degree fallback: every right vertex picks `degree_target`
// left neighbours (stub-evened on the left), then flexibility is verified;
// retries with fresh seeds up to a cap.
Template build_random_template(long long m, int degree_target, uint64_t seed,
                               const RunConfig& cfg);

// named constants from the explicit construction
inline constexpr double kTemplateDegreeThresholdFraction = 0.1;  // d/10 trim threshold
inline constexpr double kTemplateDeletionBudgetFactor = 34000.0; // 34000 m / d cascade budget
inline constexpr uint64_t kStrictTemplatePrimeFloor = 68000;     // strict p_r lower bound

}  // namespace cyclefactor
