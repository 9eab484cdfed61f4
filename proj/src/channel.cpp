#include "jiomber/channel.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace jiomber {

ChannelState::ChannelState(const ChannelConfig& config, std::uint64_t phase_seed)
    : users_(config.num_users),
      antennas_(config.num_antennas),
      oscillators_(config.oscillators) {
    if (users_ == 0 || antennas_ == 0) throw std::invalid_argument("channel: K and M must be >= 1");
    if (oscillators_ == 0) throw std::invalid_argument("channel: need at least one oscillator");
    if (config.noise_variance < 0) throw std::invalid_argument("channel: negative noise variance");
    if (config.doppler < 0) throw std::invalid_argument("channel: negative doppler rate");
    if (!config.amplitudes.empty() && config.amplitudes.size() != users_)
        throw std::invalid_argument("channel: amplitude list must have one entry per user");

    Rng rng(phase_seed);
    rotation_.resize(users_ * antennas_ * oscillators_);
    phasor_.resize(rotation_.size());
    h_.resize(users_ * antennas_);
    const double two_pi = 2.0 * std::numbers::pi;
    for (std::size_t e = 0; e < users_ * antennas_; ++e) {
        for (std::size_t n = 0; n < oscillators_; ++n) {
            const double alpha = two_pi * rng.uniform();
            const double phi = two_pi * rng.uniform();
            const double omega = two_pi * config.doppler * std::cos(alpha);
            rotation_[e * oscillators_ + n] = {std::cos(omega), std::sin(omega)};
            phasor_[e * oscillators_ + n] = {std::cos(phi), std::sin(phi)};
        }
    }
    refresh_gains();
}

void ChannelState::refresh_gains() {
    const double scale = 1.0 / std::sqrt(static_cast<double>(oscillators_));
    for (std::size_t e = 0; e < users_ * antennas_; ++e) {
        Complex acc = 0.0;
        for (std::size_t n = 0; n < oscillators_; ++n) acc += phasor_[e * oscillators_ + n];
        h_[e] = scale * acc;
    }
}

void ChannelState::advance_in_place() {
    for (std::size_t i = 0; i < phasor_.size(); ++i) phasor_[i] *= rotation_[i];
    ++index_;
    refresh_gains();
}

ChannelState advance_channel(ChannelState state, const ChannelConfig& config) {
    (void)config;
    state.advance_in_place();
    return state;
}

SymbolFrame emit_frame(const ChannelState& state, const ChannelConfig& config,
                       Rng& symbol_rng, Rng& noise_rng) {
    const std::size_t users = state.num_users();
    const std::size_t antennas = state.num_antennas();
    SymbolFrame frame;
    frame.bits.resize(users);
    for (std::size_t k = 0; k < users; ++k) frame.bits[k] = symbol_rng.bpsk();
    frame.noise.resize(antennas);
    for (std::size_t f = 0; f < antennas; ++f)
        frame.noise[f] = noise_rng.cgaussian(config.noise_variance);
    frame.received.resize(antennas);
    // r_f = (sum_k (A_k b_k) h_{k,f}) + n_f, users in ascending order.
    for (std::size_t f = 0; f < antennas; ++f) {
        Complex acc = 0.0;
        for (std::size_t k = 0; k < users; ++k)
            acc += (config.amplitude(k) * frame.bits[k]) * state.gain(k, f);
        frame.received[f] = acc + frame.noise[f];
    }
    return frame;
}

}  // namespace jiomber
