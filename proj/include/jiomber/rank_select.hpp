#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "jiomber/receiver.hpp"

// Automatic rank adaptation. The bank adapts one filter/projection pair at
// D_max; every symbol the prefix outputs
//
//   x_bar^D = sum_{d<=D} conj(w_d) (s_d^H r),   D = 1..D_max
//
// are evaluated in one pass, the smoothed error probability of each
// candidate D in [D_min, D_max] is scored with that candidate's truncated
// constraint norm, and the detector decides at the minimizing rank. The
// stochastic-gradient update always runs at D_max.

namespace jiomber {

struct RankBank {
    ReceiverState state; // projection M x D_max, filter length D_max
    std::size_t d_min = 1;
    std::size_t d_max = 1;
    std::vector<int> selected; // selected rank per processed symbol
};

// All prefix outputs x_bar^D for D = 1..D_max.
CVector partial_outputs(const ReceiverState& state, const CVector& r);

// Candidate scores indexed D = d_min + i. Candidates whose truncated norm is
// zero are excluded (valid = 0, p = NaN).
struct RankCandidates {
    std::size_t d_min = 1;
    std::vector<double> p;
    std::vector<std::uint8_t> valid;
};

RankCandidates rank_error_probabilities(const ReceiverState& state, const CVector& r,
                                        int b, std::size_t d_min);

// argmin over valid candidates, ties to the smallest D. Throws when no
// candidate is valid.
std::size_t select_rank(const RankCandidates& candidates);

class AutoRankReceiver {
  public:
    AutoRankReceiver(ReceiverState initial, std::size_t d_min, std::size_t d_max,
                     long training_length);

    static AutoRankReceiver standard(std::size_t m, std::size_t d_min, std::size_t d_max,
                                     double rho, double mu_w, double mu_s,
                                     long training_length);

    // Detect one symbol at the selected rank and adapt the D_max bank. In
    // DecisionDirected mode the bit driving both the candidate scores and
    // the update is the current symbol's decision at the previously selected
    // rank (selection itself depends on that bit).
    int step(const CVector& r, std::optional<int> training_bit);

    const RankBank& bank() const { return bank_; }
    const std::vector<int>& rank_history() const { return bank_.selected; }
    std::size_t last_selected_rank() const { return prev_rank_; }
    // Symbols where every candidate was degenerate (zero filter bootstrap)
    // and selection fell back to the previous rank.
    long fallback_count() const { return fallbacks_; }
    Mode mode() const { return bank_.state.mode; }
    bool last_step_scaled() const { return scaled_; }

  private:
    RankBank bank_;
    long training_;
    long index_ = 0;
    std::size_t prev_rank_;
    long fallbacks_ = 0;
    bool scaled_ = false;
};

}  // namespace jiomber
