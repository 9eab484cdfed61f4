#pragma once

#include <cstdint>
#include <vector>

#include "jiomber/linalg.hpp"
#include "jiomber/rng.hpp"

// Flat-fading K-user, M-antenna uplink:
//
//   r(i) = sum_k A_k h_k(i) b_k(i) + n(i)
//
// with BPSK symbols b_k, unit-variance Rayleigh-fading gains h_k(i) (one
// complex gain per user/antenna pair) and circularly symmetric Gaussian
// noise of variance sigma^2 per antenna. Each gain element is a 16-oscillator
// sum of sinusoids with random arrival angles and phases, so its temporal
// autocorrelation follows J0(2 pi fdTs tau) and distinct elements are
// independent.

namespace jiomber {

struct ChannelConfig {
    std::size_t num_users = 1;
    std::size_t num_antennas = 1;
    double doppler = 1e-5;          // normalized Doppler rate fd*Ts
    double noise_variance = 0.1;    // sigma^2 per antenna (0 allowed: noise-free)
    std::vector<double> amplitudes; // per-user A_k; empty means all 1
    std::size_t oscillators = 16;

    double amplitude(std::size_t k) const {
        return amplitudes.empty() ? 1.0 : amplitudes.at(k);
    }
};

struct SymbolFrame {
    std::vector<int> bits; // b_k(i), +-1, length K
    CVector noise;         // n(i), length M
    CVector received;      // r(i), length M
};

class ChannelState {
  public:
    ChannelState(const ChannelConfig& config, std::uint64_t phase_seed);

    long symbol_index() const { return index_; }
    std::size_t num_users() const { return users_; }
    std::size_t num_antennas() const { return antennas_; }

    // h_{k,f}(i) for the current symbol index.
    Complex gain(std::size_t k, std::size_t f) const { return h_[k * antennas_ + f]; }

    // Oscillator phasors rotate by e^{j 2 pi fdTs cos(alpha_n)} per symbol;
    // a zero Doppler rate keeps every gain bit-exactly constant.
    void advance_in_place();

  private:
    std::size_t users_, antennas_, oscillators_;
    long index_ = 0;
    std::vector<Complex> rotation_; // per (k, f, n)
    std::vector<Complex> phasor_;   // per (k, f, n), current
    std::vector<Complex> h_;        // per (k, f), current
    void refresh_gains();
};

// Functional form used by the contract tests; harness code advances with
// std::move to avoid the copy.
ChannelState advance_channel(ChannelState state, const ChannelConfig& config);

// One symbol period at the current channel state. Symbols and noise come
// from separate streams so that e.g. changing sigma^2 never perturbs the
// transmitted bit sequence.
SymbolFrame emit_frame(const ChannelState& state, const ChannelConfig& config,
                       Rng& symbol_rng, Rng& noise_rng);

}  // namespace jiomber
