#pragma once

#include <optional>

#include "jiomber/receiver.hpp"

// Joint iterative optimization of the projection and the reduced-rank filter
// under the smoothed-BER cost. Both factors take a stochastic-gradient step
// computed from the same pre-update snapshot, then w_bar is rescaled to keep
// w_bar^H S_D^H S_D w_bar = 1:
//
//   g      = exp(-Re[x_bar]^2 / (2 rho^2)) sign(b) / (2 sqrt(2 pi) rho)
//   w_bar <- w_bar + mu_w g (S_D^H r - Re[x_bar] S_D^H S_D w_bar)
//   S_D   <- S_D   + mu_S g (r - Re[x_bar] S_D w_bar) w_bar^H
//   w_bar <- w_bar / sqrt(w_bar^H S_D^H S_D w_bar)      (skipped when <= eps)

namespace jiomber {

// Rescale guard: the constraint norm below which scaling is skipped.
inline constexpr double kNormEps = 1e-12;

// [I_D; 0] initializer for the projection (M x D).
CMatrix truncation_projection(std::size_t m, std::size_t d);

// d P_e / d w_bar^* of the smoothed cost at arbitrary constraint norm.
CVector grad_w(const ReceiverState& state, const CVector& r, int b);

// d P_e / d S_D^* of the smoothed cost at arbitrary constraint norm.
CMatrix grad_s(const ReceiverState& state, const CVector& r, int b);

// One constrained update. rbar = S_D^H r and x_bar = w_bar^H rbar must come
// from the pre-update state. Returns whether the rescale was applied.
bool jio_mber_update(ReceiverState& state, const CVector& r, const CVector& rbar,
                     Complex x_bar, int b);

class JioMberReceiver {
  public:
    JioMberReceiver(ReceiverState initial, long training_length);

    // Zero filter, truncation projection, Training mode.
    static JioMberReceiver standard(std::size_t m, std::size_t d, double rho,
                                    double mu_w, double mu_s, long training_length);

    // Detect one symbol and adapt. training_bit is required in Training mode
    // and ignored in DecisionDirected mode (the decision feeds back).
    int step(const CVector& r, std::optional<int> training_bit);

    const ReceiverState& state() const { return state_; }
    long symbol_index() const { return index_; }
    Mode mode() const { return state_.mode; }
    bool last_step_scaled() const { return scaled_; }

  private:
    ReceiverState state_;
    long training_;
    long index_ = 0;
    bool scaled_ = false;
};

}  // namespace jiomber
