#pragma once

#include <cstdint>
#include <random>

#include "jiomber/linalg.hpp"

// Deterministic random streams. Every run of the Monte-Carlo harness derives
// its seeds from the base seed and the run index alone, so runs are
// independent, per-run results do not depend on how many runs follow, and
// every point of a sweep reuses the same per-run randomness (common random
// numbers: adjacent points on a curve are positively correlated, which keeps
// point-to-point comparisons stable at modest run counts).

namespace jiomber {

std::uint64_t splitmix64(std::uint64_t x);

// Order-sensitive combiner: mix(a, b) != mix(b, a).
std::uint64_t mix_seed(std::uint64_t a, std::uint64_t b);

// Seed for run `run`. `x` salts families of streams that must be mutually
// independent; the experiment harness passes 0 for every grid point (common
// random numbers across a sweep), tests pass case indices.
std::uint64_t derive_run_seed(std::uint64_t base_seed, double x, std::uint64_t run);

// Purpose tags for the per-run sub-streams.
enum class Stream : std::uint64_t {
    ChannelPhases = 1,
    Symbols = 2,
    Noise = 3,
};

std::uint64_t stream_seed(std::uint64_t run_seed, Stream s);

class Rng {
  public:
    explicit Rng(std::uint64_t seed) : eng_(seed) {}

    std::uint64_t next_u64() { return eng_(); }

    // Uniform in [0, 1).
    double uniform() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }

    // Standard normal, Box-Muller (pairs cached).
    double gaussian();

    // Circularly symmetric complex Gaussian with E|z|^2 = variance.
    // Exact zero when variance == 0.
    Complex cgaussian(double variance);

    // Equiprobable +-1.
    int bpsk() { return (eng_() & 1u) ? 1 : -1; }

  private:
    std::mt19937_64 eng_;
    double cached_ = 0.0;
    bool has_cached_ = false;
};

}  // namespace jiomber
