#pragma once

#include <cstdint>
#include <string>
#include <vector>

// Self-contained property checks against independent references: closed-form
// operation counts against the worked numbers, analytic gradients against
// central finite differences of the smoothed error probability, the running
// rank scorer against brute-force truncated evaluation, algebraic receiver
// reductions against decision-for-decision trace comparison, and the fading
// simulator against its ensemble statistics. The `validate` CLI subcommand
// and the acceptance runner both drive these.

namespace jiomber {

struct CheckResult {
    std::string name;
    bool pass = false;
    std::string detail;
};

// Worked operation counts: jio-mber(32,6) = 1225/933, mwf-mber(32,6) = 7836/5517.
CheckResult complexity_exactness();

// grad_w / grad_s vs central differences (step 1e-6) over random states with
// M <= 16, D <= 6, at rtol 1e-5 (absolute floor 1e-8 for saturated states).
CheckResult gradient_fidelity(int states, std::uint64_t seed);

// |w_bar^H S^H S w_bar - 1| <= 1e-10 after every rescaled update of a
// training + decision-directed trajectory at M = 32, D = 8.
CheckResult constraint_invariant(long symbols, std::uint64_t seed);

// rank_error_probabilities / select_rank vs per-D truncated receivers built
// explicitly, rtol 1e-12.
CheckResult rank_selection_oracle(int states, std::uint64_t seed);

// full-rank MBER == JIO-MBER(S = I, mu_S = 0) and auto-rank(D, D) == fixed
// rank D, decision for decision over a shared frame sequence.
CheckResult reduction_equivalences(long symbols, std::uint64_t seed);

// Per-element normalized fading autocorrelation at lag 1000 (fdTs = 1e-5)
// within +-0.02 of J0(2 pi 1e-2), noise sample covariance within 5% of
// sigma^2 I in Frobenius norm, both over `symbols` symbols.
CheckResult channel_statistics(long symbols, std::uint64_t seed);

// Every check at its reference scale.
std::vector<CheckResult> run_all_checks(std::uint64_t seed);

}  // namespace jiomber
