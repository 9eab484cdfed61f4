#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <stdexcept>

#include "jiomber/baselines.hpp"
#include "jiomber/channel.hpp"
#include "jiomber/jio_mber.hpp"
#include "jiomber/rng.hpp"

using namespace jiomber;

namespace {

CVector random_vector(Rng& rng, std::size_t n) {
    CVector v(n);
    for (auto& z : v) z = {rng.gaussian(), rng.gaussian()};
    return v;
}

// Random Hermitian positive definite matrix A^H A + I.
CMatrix random_hpd(Rng& rng, std::size_t n) {
    CMatrix a(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) a(i, j) = {rng.gaussian(), rng.gaussian()};
    CMatrix h = hermitian_matmul(a, a);
    for (std::size_t i = 0; i < n; ++i) h(i, i) += 1.0;
    return h;
}

// Eigenvalues of a 3x3 Hermitian matrix from the characteristic cubic,
// written in the trigonometric form. Independent of the Jacobi path.
std::array<double, 3> eig3_closed_form(const CMatrix& h) {
    const double p1 = std::norm(h(0, 1)) + std::norm(h(0, 2)) + std::norm(h(1, 2));
    const double q = (h(0, 0).real() + h(1, 1).real() + h(2, 2).real()) / 3.0;
    const double p2 = (h(0, 0).real() - q) * (h(0, 0).real() - q) +
                      (h(1, 1).real() - q) * (h(1, 1).real() - q) +
                      (h(2, 2).real() - q) * (h(2, 2).real() - q) + 2.0 * p1;
    const double p = std::sqrt(p2 / 6.0);
    CMatrix b = h;
    for (std::size_t i = 0; i < 3; ++i) b(i, i) -= q;
    for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t j = 0; j < 3; ++j) b(i, j) *= 1.0 / p;
    const Complex det = b(0, 0) * (b(1, 1) * b(2, 2) - b(1, 2) * b(2, 1)) -
                        b(0, 1) * (b(1, 0) * b(2, 2) - b(1, 2) * b(2, 0)) +
                        b(0, 2) * (b(1, 0) * b(2, 1) - b(1, 1) * b(2, 0));
    const double r = std::clamp(det.real() / 2.0, -1.0, 1.0);
    const double phi = std::acos(r) / 3.0;
    const double e1 = q + 2.0 * p * std::cos(phi);
    const double e3 = q + 2.0 * p * std::cos(phi + 2.0 * 3.141592653589793 / 3.0);
    return {e1, 3.0 * q - e1 - e3, e3}; // descending
}

}  // namespace

TEST_CASE("full-rank LMS reproduces a hand-worked update") {
    FullRankLms lms(2, 0.1);
    // Seed the filter through a synthetic first step is awkward; instead run
    // the recurrence by hand from zero. Step 1: w = 0, so x = 0, e = b.
    CVector r1 = {Complex{1.0, 1.0}, Complex{2.0, 0.0}};
    CHECK(lms.step(r1, 1) == 1); // tie at zero resolves to +1
    // w = 0.1 * conj(1) * r1 = (0.1 + 0.1i, 0.2)
    CHECK(lms.filter()[0].real() == doctest::Approx(0.1));
    CHECK(lms.filter()[0].imag() == doctest::Approx(0.1));
    CHECK(lms.filter()[1].real() == doctest::Approx(0.2));
    CHECK(lms.filter()[1].imag() == doctest::Approx(0.0));
}

TEST_CASE("full-rank LMS update matches the error-times-input rule") {
    Rng rng(31);
    FullRankLms lms(3, 0.07);
    CVector w(3, 0.0);
    for (int i = 0; i < 25; ++i) {
        const auto r = random_vector(rng, 3);
        const int b = rng.bpsk();
        // Oracle recurrence maintained alongside.
        const Complex x = inner(w, r);
        const Complex c = 0.07 * std::conj(static_cast<double>(b) - x);
        for (std::size_t j = 0; j < 3; ++j) w[j] += c * r[j];

        const int dec = lms.step(r, b);
        CHECK((dec == 1 || dec == -1));
        for (std::size_t j = 0; j < 3; ++j) {
            CHECK(lms.filter()[j].real() == doctest::Approx(w[j].real()).epsilon(1e-12));
            CHECK(lms.filter()[j].imag() == doctest::Approx(w[j].imag()).epsilon(1e-12));
        }
    }
}

TEST_CASE("rejects a training bit outside {-1, +1}") {
    FullRankLms lms(2, 0.05);
    FullRankMber mber(2, 0.05, 1.0);
    const CVector r = {Complex{1.0, 0.0}, Complex{0.0, 1.0}};
    CHECK_THROWS_AS(lms.step(r, 3), std::invalid_argument);
    CHECK_THROWS_AS(mber.step(r, 0), std::invalid_argument);
    CHECK_THROWS_AS(FullRankMber(4, 0.05, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(FullRankLms(0, 0.05), std::invalid_argument);
}

TEST_CASE("full-rank MBER equals the joint receiver with identity projection") {
    ChannelConfig ch;
    ch.num_users = 3;
    ch.num_antennas = 6;
    ch.doppler = 1e-4;
    ch.noise_variance = 0.1;
    ChannelState state(ch, 21);
    Rng symbols(22), noise(23);

    const double rho = 2.0 * std::sqrt(ch.noise_variance);
    FullRankMber full(6, 0.02, rho);
    ReceiverState init;
    init.projection = CMatrix::identity(6);
    init.filter = CVector(6, 0.0);
    init.kernel_radius = rho;
    init.step_w = 0.02;
    init.step_s = 0.0; // frozen projection
    JioMberReceiver joint(init, 150);

    for (int i = 0; i < 600; ++i) {
        const auto frame = emit_frame(state, ch, symbols, noise);
        std::optional<int> sup;
        if (i < 150) sup = frame.bits[0];
        const int a = full.step(frame.received, sup);
        const int b = joint.step(frame.received, frame.bits[0]);
        REQUIRE(a == b);
        state.advance_in_place();
    }
    for (std::size_t j = 0; j < 6; ++j)
        CHECK(std::abs(full.filter()[j] - joint.state().filter[j]) < 1e-10);
}

TEST_CASE("joint LMS runs both hand-worked update steps") {
    JioLms rx(2, 1, 0.1, 0.05);
    // Step 1: w = 0 so the projection update vanishes and w absorbs mu*b*rbar.
    CHECK(rx.step({Complex{2.0, 0.0}, Complex{0.0, 3.0}}, 1) == 1);
    CHECK(rx.projection()(0, 0) == Complex{1.0, 0.0});
    CHECK(rx.projection()(1, 0) == Complex{0.0, 0.0});
    CHECK(rx.filter()[0].real() == doctest::Approx(0.2).epsilon(1e-14));
    // Step 2: rbar = 1, x = 0.2, e = 0.8.
    CHECK(rx.step({Complex{1.0, 0.0}, Complex{0.0, 1.0}}, 1) == 1);
    CHECK(rx.filter()[0].real() == doctest::Approx(0.28).epsilon(1e-12));
    CHECK(rx.projection()(0, 0).real() == doctest::Approx(1.008).epsilon(1e-12));
    CHECK(rx.projection()(1, 0).imag() == doctest::Approx(0.008).epsilon(1e-12));
}

TEST_CASE("exponentially weighted statistics match the direct recursion") {
    Rng rng(41);
    const std::size_t m = 4;
    const double lambda = 0.9;
    EwmaStats stats(m, lambda);
    CMatrix cov_ref(m, m);
    CVector p_ref(m, 0.0);
    for (int i = 0; i < 30; ++i) {
        const auto r = random_vector(rng, m);
        const int b = rng.bpsk();
        for (std::size_t a = 0; a < m; ++a) {
            for (std::size_t c = 0; c < m; ++c)
                cov_ref(a, c) = lambda * cov_ref(a, c) + r[a] * std::conj(r[c]);
            p_ref[a] = lambda * p_ref[a] + static_cast<double>(b) * r[a];
        }
        stats.update(r, b);
    }
    for (std::size_t a = 0; a < m; ++a) {
        CHECK(stats.cov(a, a).imag() == 0.0); // exactly real diagonal
        CHECK(std::abs(stats.steer[a] - p_ref[a]) < 1e-12);
        for (std::size_t c = 0; c < m; ++c) {
            CHECK(std::abs(stats.cov(a, c) - cov_ref(a, c)) < 1e-12);
            CHECK(stats.cov(c, a) == std::conj(stats.cov(a, c))); // exactly Hermitian
        }
    }
    CHECK_THROWS_AS(EwmaStats(3, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(EwmaStats(3, 1.25), std::invalid_argument);
}

TEST_CASE("multistage construction spans the Krylov space of the statistics") {
    Rng rng(43);
    const std::size_t m = 8, d = 4;
    const CMatrix cov = random_hpd(rng, m);
    const CVector p = random_vector(rng, m);
    const MwfBasis mb = mwf_construct(cov, p, d);
    REQUIRE(mb.rank == d);
    CHECK_FALSE(mb.deficient);

    // First column is the normalized steering vector.
    const double sp = std::sqrt(norm_sq(p));
    for (std::size_t i = 0; i < m; ++i)
        CHECK(std::abs(mb.basis(i, 0) - p[i] / sp) < 1e-14);

    // Orthonormal columns.
    const CMatrix gram = hermitian_matmul(mb.basis, mb.basis);
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = 0; j < d; ++j)
            CHECK(std::abs(gram(i, j) - (i == j ? 1.0 : 0.0)) < 1e-10);

    // Projector onto the Krylov space {p, R p, R^2 p, R^3 p}, orthonormalized
    // here by classical Gram-Schmidt, must equal the basis projector.
    std::vector<CVector> kry;
    CVector cur = p;
    for (std::size_t j = 0; j < d; ++j) {
        CVector u = cur;
        for (const auto& h : kry) add_scaled(u, -inner(h, u), h);
        for (const auto& h : kry) add_scaled(u, -inner(h, u), h);
        const double nr = std::sqrt(norm_sq(u));
        REQUIRE(nr > 1e-8);
        for (auto& z : u) z *= 1.0 / nr;
        kry.push_back(u);
        cur = matvec(cov, cur);
    }
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < m; ++j) {
            Complex pb = 0.0, pk = 0.0;
            for (std::size_t c = 0; c < d; ++c) {
                pb += mb.basis(i, c) * std::conj(mb.basis(j, c));
                pk += kry[c][i] * std::conj(kry[c][j]);
            }
            CHECK(std::abs(pb - pk) < 1e-9);
        }
}

TEST_CASE("multistage construction reports rank deficiency") {
    // Identity covariance: R p = p, so the recursion dies after one stage.
    const std::size_t m = 5;
    const CMatrix cov = CMatrix::identity(m);
    CVector p(m, 0.0);
    p[1] = Complex{0.0, 2.0};
    const MwfBasis mb = mwf_construct(cov, p, 3);
    CHECK(mb.rank == 1);
    CHECK(mb.deficient);
    CHECK(std::abs(mb.basis(1, 0) - Complex{0.0, 1.0}) < 1e-15);

    // Zero steering: nothing to build on at all.
    const MwfBasis empty = mwf_construct(cov, CVector(m, 0.0), 2);
    CHECK(empty.rank == 0);
    CHECK(empty.deficient);

    CHECK_THROWS_AS(mwf_construct(cov, p, 0), std::invalid_argument);
    CHECK_THROWS_AS(mwf_construct(cov, p, m + 1), std::invalid_argument);
    CHECK_THROWS_AS(mwf_construct(cov, CVector(m + 1, 0.0), 2), std::invalid_argument);
}

TEST_CASE("Jacobi eigenvalues match the closed-form cubic on 3x3 inputs") {
    Rng rng(47);
    for (int trial = 0; trial < 40; ++trial) {
        const CMatrix h = random_hpd(rng, 3);
        const auto expect = eig3_closed_form(h);
        const EigenDecomposition ed = hermitian_eig(h);
        REQUIRE(ed.values.size() == 3);
        const double scale = std::max(1.0, std::abs(expect[0]));
        for (int i = 0; i < 3; ++i)
            CHECK(std::abs(ed.values[i] - expect[i]) < 1e-8 * scale);
    }
}

TEST_CASE("Jacobi eigenpairs satisfy the defining residual") {
    Rng rng(53);
    const std::size_t n = 6;
    const CMatrix h = random_hpd(rng, n);
    const EigenDecomposition ed = hermitian_eig(h);
    for (std::size_t j = 0; j + 1 < n; ++j) CHECK(ed.values[j] >= ed.values[j + 1]);
    const double scale = frobenius_norm(h);
    for (std::size_t j = 0; j < n; ++j) {
        CVector v(n);
        for (std::size_t i = 0; i < n; ++i) v[i] = ed.vectors(i, j);
        CHECK(norm_sq(v) == doctest::Approx(1.0).epsilon(1e-10));
        CVector av = matvec(h, v);
        add_scaled(av, -ed.values[j], v);
        CHECK(std::sqrt(norm_sq(av)) < 1e-9 * scale);
    }
    const EigenDecomposition diag = hermitian_eig([] {
        CMatrix a(2, 2);
        a(0, 0) = 1.0;
        a(1, 1) = 4.0;
        return a;
    }());
    CHECK(diag.values[0] == 4.0);
    CHECK(diag.values[1] == 1.0);
    CHECK(std::abs(diag.vectors(1, 0)) == 1.0);

    CHECK_THROWS_AS(hermitian_eig(CMatrix(2, 3)), std::invalid_argument);
    const CMatrix bad(3, 3);
    const CMatrix ws(2, 2);
    CHECK_THROWS_AS(hermitian_eig(bad, &ws), std::invalid_argument);
}

TEST_CASE("warm-started decomposition converges fast and agrees with cold") {
    Rng rng(59);
    const std::size_t n = 8;
    CMatrix h = random_hpd(rng, n);
    const EigenDecomposition first = hermitian_eig(h);
    // Nudge the matrix slightly, as the tracking receivers do each symbol.
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i; j < n; ++j) {
            const Complex eps = 1e-6 * Complex{rng.gaussian(), i == j ? 0.0 : rng.gaussian()};
            h(i, j) += eps;
            if (j != i) h(j, i) = std::conj(h(i, j));
        }
    const EigenDecomposition cold = hermitian_eig(h);
    const EigenDecomposition warm = hermitian_eig(h, &first.vectors);
    CHECK(warm.sweeps <= 2);
    for (std::size_t j = 0; j < n; ++j)
        CHECK(warm.values[j] == doctest::Approx(cold.values[j]).epsilon(1e-9));
}

TEST_CASE("eigen projection takes the leading principal directions") {
    Rng rng(61);
    const CMatrix cov = random_hpd(rng, 5);
    const EigenDecomposition ed = hermitian_eig(cov);
    const CMatrix basis = eig_construct(cov, 2);
    REQUIRE(basis.cols() == 2);
    for (std::size_t j = 0; j < 2; ++j)
        for (std::size_t i = 0; i < 5; ++i) CHECK(basis(i, j) == ed.vectors(i, j));
    CHECK_THROWS_AS(eig_construct(cov, 0), std::invalid_argument);
    CHECK_THROWS_AS(eig_construct(cov, 6), std::invalid_argument);
}

TEST_CASE("frozen identity basis reduces the subspace receiver to full rank") {
    ChannelConfig ch;
    ch.num_users = 4;
    ch.num_antennas = 8;
    ch.doppler = 1e-4;
    ch.noise_variance = 0.0316;
    ChannelState state(ch, 71);
    Rng symbols(72), noise(73);

    const double rho = 2.0 * std::sqrt(ch.noise_variance);
    MwfMber frozen(8, 8, 0.02, rho, 0.998);
    frozen.freeze_basis(CMatrix::identity(8));
    FullRankMber full(8, 0.02, rho);

    for (int i = 0; i < 800; ++i) {
        const auto frame = emit_frame(state, ch, symbols, noise);
        std::optional<int> sup;
        if (i < 200) sup = frame.bits[0];
        REQUIRE(frozen.step(frame.received, sup) == full.step(frame.received, sup));
        state.advance_in_place();
    }
    CHECK(frozen.deficient_symbols() == 0);
}

TEST_CASE("tracking subspace receivers stay finite over a fading run") {
    ChannelConfig ch;
    ch.num_users = 5;
    ch.num_antennas = 16;
    ch.doppler = 1e-4;
    ch.noise_variance = 0.0316;
    ChannelState state(ch, 81);
    Rng symbols(82), noise(83);

    const double rho = 2.0 * std::sqrt(ch.noise_variance);
    MwfMber mwf_mber(16, 4, 0.02, rho, 0.998);
    MwfLms mwf_lms(16, 4, 0.01, 0.998);
    EigMber eig_mber(16, 4, 0.02, rho, 0.998);

    for (int i = 0; i < 600; ++i) {
        const auto frame = emit_frame(state, ch, symbols, noise);
        std::optional<int> sup;
        if (i < 200) sup = frame.bits[0];
        for (int dec : {mwf_mber.step(frame.received, sup), mwf_lms.step(frame.received, sup),
                        eig_mber.step(frame.received, sup)})
            CHECK((dec == 1 || dec == -1));
        state.advance_in_place();
    }
    // Rank deficiency is a warm-up artifact; it must not persist.
    CHECK(mwf_mber.deficient_symbols() < 50);
    CHECK(mwf_lms.deficient_symbols() < 50);
    for (const Complex& w : mwf_mber.filter()) CHECK(std::isfinite(std::abs(w)));
    for (const Complex& w : eig_mber.filter()) CHECK(std::isfinite(std::abs(w)));

    CHECK_THROWS_AS(MwfMber(4, 5, 0.02, rho, 0.998), std::invalid_argument);
    CHECK_THROWS_AS(EigMber(4, 2, 0.02, -1.0, 0.998), std::invalid_argument);
}
