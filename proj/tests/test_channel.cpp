#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <complex>
#include <vector>

#if __has_include(<version>)
#include <version>
#endif

#include "jiomber/channel.hpp"
#include "jiomber/rng.hpp"

using namespace jiomber;

namespace {

constexpr double kPi = 3.141592653589793238462643383279502884;

// J0 via the integral definition, evaluated with the midpoint rule; exact
// enough at the small arguments used here and independent of <cmath>.
double bessel_j0(double x) {
    const int n = 20000;
    double acc = 0;
    for (int i = 0; i < n; ++i) {
        const double t = kPi * (i + 0.5) / n;
        acc += std::cos(x * std::sin(t));
    }
    return acc / n;
}

}  // namespace

TEST_CASE("received vector reassembles from gains, bits and noise") {
    ChannelConfig cfg;
    cfg.num_users = 3;
    cfg.num_antennas = 4;
    cfg.noise_variance = 0.5;
    cfg.amplitudes = {1.0, 0.7, 2.0};
    ChannelState st(cfg, 99);
    Rng symbols(1), noise(2);
    for (int i = 0; i < 5; ++i) {
        const auto frame = emit_frame(st, cfg, symbols, noise);
        REQUIRE(frame.bits.size() == 3);
        REQUIRE(frame.received.size() == 4);
        for (std::size_t f = 0; f < 4; ++f) {
            Complex want = 0;
            for (std::size_t k = 0; k < 3; ++k)
                want += (cfg.amplitude(k) * frame.bits[k]) * st.gain(k, f);
            want += frame.noise[f];
            CHECK(frame.received[f] == want);
        }
        st.advance_in_place();
    }
}

TEST_CASE("noise-free single user is the channel gain times the bit") {
    ChannelConfig cfg;
    cfg.num_users = 1;
    cfg.num_antennas = 3;
    cfg.noise_variance = 0.0;
    ChannelState st(cfg, 5);
    Rng symbols(3), noise(4);
    const auto frame = emit_frame(st, cfg, symbols, noise);
    for (std::size_t f = 0; f < 3; ++f) {
        CHECK(frame.noise[f] == Complex{0.0, 0.0});
        CHECK(frame.received[f] == double(frame.bits[0]) * st.gain(0, f));
    }
}

TEST_CASE("zero Doppler freezes the gains bit-exactly") {
    ChannelConfig cfg;
    cfg.num_users = 2;
    cfg.num_antennas = 3;
    cfg.doppler = 0.0;
    ChannelState st(cfg, 7);
    std::vector<Complex> h0;
    for (std::size_t k = 0; k < 2; ++k)
        for (std::size_t f = 0; f < 3; ++f) h0.push_back(st.gain(k, f));
    for (int i = 0; i < 1000; ++i) st.advance_in_place();
    std::size_t idx = 0;
    for (std::size_t k = 0; k < 2; ++k)
        for (std::size_t f = 0; f < 3; ++f) CHECK(st.gain(k, f) == h0[idx++]);
    CHECK(st.symbol_index() == 1000);
}

TEST_CASE("functional advance matches in-place advance") {
    ChannelConfig cfg;
    cfg.num_users = 1;
    cfg.num_antennas = 2;
    cfg.doppler = 1e-3;
    ChannelState a(cfg, 11);
    ChannelState b = a;
    b.advance_in_place();
    const ChannelState c = advance_channel(std::move(a), cfg);
    for (std::size_t f = 0; f < 2; ++f) CHECK(c.gain(0, f) == b.gain(0, f));
}

TEST_CASE("gain elements have unit power and are uncorrelated") {
    // Fast fading so time averages are ergodic over the horizon.
    ChannelConfig cfg;
    cfg.num_users = 2;
    cfg.num_antennas = 4;
    cfg.doppler = 1e-2;
    ChannelState st(cfg, 13);
    const long n = 200000;
    const std::size_t elems = 8;
    std::vector<double> power(elems, 0.0);
    Complex cross01 = 0, mean0 = 0;
    for (long i = 0; i < n; ++i) {
        for (std::size_t e = 0; e < elems; ++e)
            power[e] += std::norm(st.gain(e / 4, e % 4));
        cross01 += st.gain(0, 0) * std::conj(st.gain(0, 1));
        mean0 += st.gain(0, 0);
        st.advance_in_place();
    }
    for (std::size_t e = 0; e < elems; ++e)
        CHECK(power[e] / n == doctest::Approx(1.0).epsilon(0.1));
    CHECK(std::abs(cross01) / n < 0.05);
    CHECK(std::abs(mean0) / n < 0.05);
}

TEST_CASE("fading autocorrelation follows the zeroth Bessel curve") {
    ChannelConfig cfg;
    cfg.num_users = 1;
    cfg.num_antennas = 8;
    cfg.doppler = 1e-5;
    ChannelState st(cfg, 17);

    const long lag = 1000;
    const long symbols = 400000;
    const std::size_t elems = 8;
    std::vector<std::vector<Complex>> ring(elems, std::vector<Complex>(lag));
    std::vector<Complex> lag_product(elems, 0.0);
    std::vector<double> power(elems, 0.0);
    for (long i = 0; i < symbols + lag; ++i) {
        for (std::size_t f = 0; f < elems; ++f) {
            const Complex cur = st.gain(0, f);
            if (i >= lag) lag_product[f] += cur * std::conj(ring[f][i % lag]);
            if (i < symbols) power[f] += std::norm(cur);
            ring[f][i % lag] = cur;
        }
        st.advance_in_place();
    }
    const double want = bessel_j0(2.0 * kPi * cfg.doppler * lag);
    CHECK(want == doctest::Approx(0.9990).epsilon(2e-4)); // J0(0.0628..)
    for (std::size_t f = 0; f < elems; ++f) {
        // Normalizing by the sample power cancels the slow cross-oscillator
        // terms that dominate the raw lag product at this Doppler rate.
        const double est = (lag_product[f] / double(symbols)).real() / (power[f] / symbols);
        CHECK(est == doctest::Approx(want).epsilon(0.02));
    }
}

TEST_CASE("noise covariance is sigma^2 I") {
    ChannelConfig cfg;
    cfg.num_users = 1;
    cfg.num_antennas = 8;
    cfg.noise_variance = 2.0;
    ChannelState st(cfg, 19);
    Rng symbols(23), noise(29);

    const long n = 100000;
    const std::size_t m = 8;
    std::vector<Complex> cov(m * m, 0.0);
    double p_re = 0, p_im = 0;
    for (long i = 0; i < n; ++i) {
        const auto frame = emit_frame(st, cfg, symbols, noise);
        for (std::size_t a = 0; a < m; ++a) {
            for (std::size_t b = 0; b < m; ++b)
                cov[a * m + b] += frame.noise[a] * std::conj(frame.noise[b]);
            p_re += frame.noise[a].real() * frame.noise[a].real();
            p_im += frame.noise[a].imag() * frame.noise[a].imag();
        }
    }
    double err_sq = 0;
    for (std::size_t a = 0; a < m; ++a)
        for (std::size_t b = 0; b < m; ++b) {
            const Complex want = (a == b) ? Complex{2.0, 0.0} : Complex{0.0, 0.0};
            err_sq += std::norm(cov[a * m + b] / double(n) - want);
        }
    CHECK(std::sqrt(err_sq) < 0.05 * m);
    // Each quadrature carries half the noise power.
    CHECK(p_re / (n * m) == doctest::Approx(1.0).epsilon(0.05));
    CHECK(p_im / (n * m) == doctest::Approx(1.0).epsilon(0.05));
}

TEST_CASE("phase seeds select distinct channels deterministically") {
    ChannelConfig cfg;
    cfg.num_users = 1;
    cfg.num_antennas = 2;
    const ChannelState a(cfg, 1), b(cfg, 1), c(cfg, 2);
    CHECK(a.gain(0, 0) == b.gain(0, 0));
    CHECK(a.gain(0, 1) == b.gain(0, 1));
    CHECK(a.gain(0, 0) != c.gain(0, 0));
}

TEST_CASE("symbol and noise streams are decoupled") {
    ChannelConfig cfg;
    cfg.num_users = 2;
    cfg.num_antennas = 2;
    cfg.noise_variance = 1.0;
    ChannelState st(cfg, 31);

    Rng sym_a(41), noise_a(43);
    ChannelConfig quiet = cfg;
    quiet.noise_variance = 0.0;
    Rng sym_b(41), noise_b(43);

    // Changing sigma^2 must not perturb the transmitted bits.
    for (int i = 0; i < 50; ++i) {
        const auto fa = emit_frame(st, cfg, sym_a, noise_a);
        const auto fb = emit_frame(st, quiet, sym_b, noise_b);
        CHECK(fa.bits == fb.bits);
    }
}
