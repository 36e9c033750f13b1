#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace cyclefactor {

// strict: enforce the published size preconditions and constants, refusing
//   instances that fall below them.
// practical: run the identical algorithms at desk scale, verify outputs
//   post hoc, and record every constant that deviates from its strict value.
enum class Mode { strict, practical };

inline const char* to_string(Mode m) { return m == Mode::strict ? "strict" : "practical"; }

// Named pipeline constants. Strict defaults reproduce the published values;
// the practical preset substitutes documented desk-scale ones. Every
// deviation from a strict value is reported by deviations().
struct RunConfig {
    Mode mode = Mode::strict;

    // book-cycle page count; also caps the template maximum degree
    int K = 68042;
    // boundary between "short" and "long" cycle lengths
    long long L = 8000LL * 68042;
    // flexibility fraction for the long-cycle pipeline's absorber
    double gamma = 1.0 / (600.0 * (68042 + 2));
    // flexibility fraction for the short-cycle pipeline; <= alpha_ell(ell)
    double alpha = -1.0;  // negative: use alpha_ell(ell)
    // slack vertices consumed in the long-cycle endgame; negative: epsilon*n
    int m_prime = -1;
    // jumbledness ratio lambda/(p^2 n) assumed when certifying instances
    double epsilon = 0.01;
    // minimum-degree ratio: delta(G) >= delta * p * n
    double delta = 0.5;

    // random-template fallback knobs (practical mode)
    int template_degree = 3;
    uint64_t template_seed = 1;
    int template_trials = 1000;

    // search budgets for backtracking path/cycle finders
    long long search_budget = 200000;

    uint64_t seed = 1;

    double alpha_ell(int ell) const { return 1.0 / (60.0 * double(ell) * (K + 2)); }
    double alpha_for(int ell) const { return alpha > 0 ? alpha : alpha_ell(ell); }
    long long L0() const {  // smallest power of two strictly above L
        long long v = 1;
        while (v <= L) v <<= 1;
        return v;
    }
    int m_prime_for(long long n) const {
        if (m_prime >= 0) return m_prime;
        return int(epsilon * double(n)) + 1;
    }

    static RunConfig strict_defaults() { return RunConfig{}; }

    static RunConfig practical_defaults() {
        RunConfig c;
        c.mode = Mode::practical;
        c.K = 14;
        c.L = 12;
        c.gamma = 1.0 / 150.0;
        c.alpha = 1.0 / 150.0;
        c.m_prime = 24;
        c.epsilon = 0.15;
        c.delta = 0.5;
        return c;
    }

    // strict-vs-default differences, for run reports
    std::vector<std::string> deviations() const {
        std::vector<std::string> out;
        RunConfig strict;
        auto note = [&](const char* name, double have, double want) {
            if (have != want)
                out.push_back(std::string(name) + "=" + std::to_string(have) + " (published " +
                              std::to_string(want) + ")");
        };
        note("K", K, strict.K);
        note("L", double(L), double(strict.L));
        note("gamma", gamma, strict.gamma);
        if (alpha > 0) out.push_back("alpha=" + std::to_string(alpha) + " (published alpha(ell))");
        if (m_prime >= 0)
            out.push_back("m_prime=" + std::to_string(m_prime) + " (published epsilon*n)");
        return out;
    }
};

}  // namespace cyclefactor
