#include "jiomber/rng.hpp"

#include <bit>
#include <cmath>
#include <numbers>

namespace jiomber {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

std::uint64_t mix_seed(std::uint64_t a, std::uint64_t b) {
    return splitmix64(splitmix64(a) ^ (b + 0x9e3779b97f4a7c15ULL));
}

std::uint64_t derive_run_seed(std::uint64_t base_seed, double x, std::uint64_t run) {
    return mix_seed(mix_seed(base_seed, std::bit_cast<std::uint64_t>(x)), run);
}

std::uint64_t stream_seed(std::uint64_t run_seed, Stream s) {
    return mix_seed(run_seed, static_cast<std::uint64_t>(s));
}

double Rng::gaussian() {
    if (has_cached_) {
        has_cached_ = false;
        return cached_;
    }
    const double u1 = uniform();
    const double u2 = uniform();
    const double radius = std::sqrt(-2.0 * std::log1p(-u1));
    const double angle = 2.0 * std::numbers::pi * u2;
    cached_ = radius * std::sin(angle);
    has_cached_ = true;
    return radius * std::cos(angle);
}

Complex Rng::cgaussian(double variance) {
    const double u1 = uniform();
    const double u2 = uniform();
    // |z| = sqrt(-variance ln(1-u1)), arg z = 2 pi u2; E|z|^2 = variance.
    const double amplitude = std::sqrt(-variance * std::log1p(-u1));
    const double angle = 2.0 * std::numbers::pi * u2;
    return {amplitude * std::cos(angle), amplitude * std::sin(angle)};
}

}  // namespace jiomber
