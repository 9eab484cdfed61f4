#include "jiomber/validation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "jiomber/baselines.hpp"
#include "jiomber/complexity.hpp"
#include "jiomber/harness.hpp"
#include "jiomber/jio_mber.hpp"
#include "jiomber/rank_select.hpp"

namespace jiomber {

namespace {

std::string fmt(double v) {
    std::ostringstream os;
    os.precision(3);
    os << v;
    return os.str();
}

Complex random_entry(Rng& rng) { return Complex(rng.gaussian(), rng.gaussian()); }

CMatrix random_matrix(Rng& rng, std::size_t rows, std::size_t cols) {
    CMatrix a(rows, cols);
    for (std::size_t i = 0; i < rows; ++i)
        for (std::size_t j = 0; j < cols; ++j) a(i, j) = random_entry(rng);
    return a;
}

CVector random_vector(Rng& rng, std::size_t n) {
    CVector v(n);
    for (Complex& c : v) c = random_entry(rng);
    return v;
}

// Random receiver state with a well-conditioned constraint norm.
ReceiverState random_state(Rng& rng, std::size_t m, std::size_t d) {
    ReceiverState st;
    st.kernel_radius = 0.5 + 1.5 * rng.uniform();
    do {
        st.projection = random_matrix(rng, m, d);
        st.filter = random_vector(rng, d);
    } while (constraint_norm(st) < 1e-2);
    return st;
}

double pe_at(const ReceiverState& st, const CVector& r, int b) {
    return error_probability(st, output(st, r), b);
}

}  // namespace

CheckResult complexity_exactness() {
    const OpCount jio = count_ops(Algorithm::JioMber, 32, 6);
    const OpCount mwf = count_ops(Algorithm::MwfMber, 32, 6);
    CheckResult out;
    out.name = "complexity_exactness";
    out.pass = jio.exact && jio.mul == 1225 && jio.add == 933 && mwf.exact &&
               mwf.mul == 7836 && mwf.add == 5517;
    std::ostringstream os;
    os << "jio-mber(32,6) = " << jio.mul << "/" << jio.add << " (want 1225/933), "
       << "mwf-mber(32,6) = " << mwf.mul << "/" << mwf.add << " (want 7836/5517)";
    out.detail = os.str();
    return out;
}

CheckResult gradient_fidelity(int states, std::uint64_t seed) {
    const double h = 1e-6, rtol = 1e-5, atol = 1e-8;
    double worst = 0.0; // excess over the tolerance, normalized; pass iff <= 1
    int components = 0;

    auto check = [&](double analytic, double fd) {
        const double excess =
            std::abs(fd - analytic) / (rtol * std::max(std::abs(fd), std::abs(analytic)) + atol);
        worst = std::max(worst, excess);
        ++components;
    };

    for (int s = 0; s < states; ++s) {
        Rng rng(derive_run_seed(seed, 11.0, static_cast<std::uint64_t>(s)));
        const std::size_t m = 2 + rng.next_u64() % 15;                    // 2..16
        const std::size_t d = 1 + rng.next_u64() % std::min<std::size_t>(6, m);
        const ReceiverState st = random_state(rng, m, d);
        const CVector r = random_vector(rng, m);
        const int b = rng.bpsk();

        const CVector gw = grad_w(st, r, b);
        for (std::size_t i = 0; i < d; ++i) {
            for (int part = 0; part < 2; ++part) {
                const Complex delta = part == 0 ? Complex(h, 0.0) : Complex(0.0, h);
                ReceiverState plus = st, minus = st;
                plus.filter[i] += delta;
                minus.filter[i] -= delta;
                const double fd = (pe_at(plus, r, b) - pe_at(minus, r, b)) / (2.0 * h);
                check(part == 0 ? 2.0 * gw[i].real() : 2.0 * gw[i].imag(), fd);
            }
        }

        const CMatrix gs = grad_s(st, r, b);
        for (std::size_t i = 0; i < m; ++i)
            for (std::size_t j = 0; j < d; ++j)
                for (int part = 0; part < 2; ++part) {
                    const Complex delta = part == 0 ? Complex(h, 0.0) : Complex(0.0, h);
                    ReceiverState plus = st, minus = st;
                    plus.projection(i, j) += delta;
                    minus.projection(i, j) -= delta;
                    const double fd = (pe_at(plus, r, b) - pe_at(minus, r, b)) / (2.0 * h);
                    check(part == 0 ? 2.0 * gs(i, j).real() : 2.0 * gs(i, j).imag(), fd);
                }
    }

    CheckResult out;
    out.name = "gradient_fidelity";
    out.pass = worst <= 1.0;
    out.detail = std::to_string(states) + " states, " + std::to_string(components) +
                 " components, worst error = " + fmt(worst) +
                 "x the rtol 1e-5 bound";
    return out;
}

CheckResult constraint_invariant(long symbols, std::uint64_t seed) {
    ExperimentConfig c;
    c.num_antennas = 32;
    c.num_users = 7;
    c.snr_db = 15.0;
    c.training_symbols = std::min(250L, symbols);
    c.data_symbols = std::max(1L, symbols - c.training_symbols);
    const std::vector<SymbolFrame> frames =
        generate_frames(c, derive_run_seed(seed, 37.0, 0));

    const double rho = c.rho_factor * std::sqrt(noise_variance_for_snr(c.snr_db));
    JioMberReceiver rx =
        JioMberReceiver::standard(32, 8, rho, c.mu_w, c.mu_s, c.training_symbols);

    double worst = 0.0;
    long scaled = 0, skipped = 0;
    for (long i = 0; i < symbols; ++i) {
        const SymbolFrame& f = frames[static_cast<std::size_t>(i)];
        std::optional<int> bit;
        if (i < c.training_symbols) bit = f.bits[0];
        rx.step(f.received, bit);
        if (rx.last_step_scaled()) {
            ++scaled;
            worst = std::max(worst, std::abs(constraint_norm(rx.state()) - 1.0));
        } else {
            ++skipped;
        }
    }

    CheckResult out;
    out.name = "constraint_invariant";
    out.pass = worst <= 1e-10;
    out.detail = "max |norm - 1| = " + fmt(worst) + " over " + std::to_string(scaled) +
                 " rescaled steps (" + std::to_string(skipped) + " below eps), bound 1e-10";
    return out;
}

namespace {

ReceiverState truncate_state(const ReceiverState& st, std::size_t d) {
    ReceiverState out;
    out.projection = CMatrix(st.projection.rows(), d);
    for (std::size_t i = 0; i < st.projection.rows(); ++i)
        for (std::size_t j = 0; j < d; ++j) out.projection(i, j) = st.projection(i, j);
    out.filter = CVector(st.filter.begin(), st.filter.begin() + static_cast<std::ptrdiff_t>(d));
    out.kernel_radius = st.kernel_radius;
    return out;
}

}  // namespace

CheckResult rank_selection_oracle(int states, std::uint64_t seed) {
    long mismatches = 0;
    double worst = 0.0;
    for (int s = 0; s < states; ++s) {
        Rng rng(derive_run_seed(seed, 13.0, static_cast<std::uint64_t>(s)));
        const std::size_t m = 2 + rng.next_u64() % 15;
        const std::size_t d_max = 1 + rng.next_u64() % std::min<std::size_t>(8, m);
        const std::size_t d_min = 1 + rng.next_u64() % d_max;
        ReceiverState st = random_state(rng, m, d_max);
        if (d_min == 1 && s % 4 == 0) st.filter[0] = 0.0; // degenerate D = 1 candidate
        const CVector r = random_vector(rng, m);
        const int b = rng.bpsk();

        const RankCandidates got = rank_error_probabilities(st, r, b, d_min);

        bool any_valid = false;
        std::size_t best_d = 0;
        double best_p = std::numeric_limits<double>::infinity();
        for (std::size_t d = d_min; d <= d_max; ++d) {
            const std::size_t idx = d - d_min;
            const ReceiverState ts = truncate_state(st, d);
            const double nrm = constraint_norm(ts);
            if (nrm > 0.0) {
                const double want = pe_at(ts, r, b);
                if (!got.valid[idx]) {
                    ++mismatches;
                    continue;
                }
                const double err = std::abs(got.p[idx] - want);
                const double bound =
                    1e-12 * std::max(std::abs(got.p[idx]), std::abs(want)) + 1e-280;
                worst = std::max(worst, bound > 0 ? err / bound : 0.0);
                if (err > bound) ++mismatches;
                if (want < best_p) {
                    best_p = want;
                    best_d = d;
                    any_valid = true;
                }
            } else if (got.valid[idx] || !std::isnan(got.p[idx])) {
                ++mismatches;
            }
        }

        if (any_valid) {
            if (select_rank(got) != best_d) ++mismatches;
        } else {
            try {
                select_rank(got);
                ++mismatches; // should have thrown
            } catch (const std::runtime_error&) {
            }
        }
    }

    CheckResult out;
    out.name = "rank_selection_oracle";
    out.pass = mismatches == 0;
    out.detail = std::to_string(states) + " states, " + std::to_string(mismatches) +
                 " mismatches, worst error = " + fmt(worst) + "x the rtol 1e-12 bound";
    return out;
}

CheckResult reduction_equivalences(long symbols, std::uint64_t seed) {
    ExperimentConfig c;
    c.num_antennas = 8;
    c.num_users = 3;
    c.snr_db = 12.0;
    c.training_symbols = std::min(200L, symbols / 2);
    c.data_symbols = std::max(1L, symbols - c.training_symbols);
    const std::vector<SymbolFrame> frames =
        generate_frames(c, derive_run_seed(seed, 29.0, 0));
    const double rho = c.rho_factor * std::sqrt(noise_variance_for_snr(c.snr_db));

    // Full-rank MBER against the joint update at S = I, mu_S = 0.
    FullRankMber full(c.num_antennas, c.mu_full_mber, rho);
    ReceiverState ident;
    ident.projection = CMatrix::identity(c.num_antennas);
    ident.filter = CVector(c.num_antennas, 0.0);
    ident.kernel_radius = rho;
    ident.step_w = c.mu_full_mber;
    ident.step_s = 0.0;
    JioMberReceiver as_jio(std::move(ident), c.training_symbols);

    // Fixed rank against the auto-rank receiver pinned to [D, D].
    const std::size_t d = 4;
    JioMberReceiver fixed =
        JioMberReceiver::standard(c.num_antennas, d, rho, c.mu_w, c.mu_s, c.training_symbols);
    AutoRankReceiver pinned = AutoRankReceiver::standard(c.num_antennas, d, d, rho, c.mu_w,
                                                         c.mu_s, c.training_symbols);

    long full_mismatch = 0, rank_mismatch = 0;
    for (long i = 0; i < symbols; ++i) {
        const SymbolFrame& f = frames[static_cast<std::size_t>(i)];
        std::optional<int> bit;
        if (i < c.training_symbols) bit = f.bits[0];
        if (full.step(f.received, bit) != as_jio.step(f.received, bit)) ++full_mismatch;
        if (fixed.step(f.received, bit) != pinned.step(f.received, bit)) ++rank_mismatch;
    }

    CheckResult out;
    out.name = "reduction_equivalences";
    out.pass = full_mismatch == 0 && rank_mismatch == 0;
    out.detail = std::to_string(symbols) + " symbols: full-rank-mber vs jio(I, mu_S=0) " +
                 std::to_string(full_mismatch) + " mismatches, auto(D,D) vs fixed " +
                 std::to_string(rank_mismatch) + " mismatches";
    return out;
}

CheckResult channel_statistics(long symbols, std::uint64_t seed) {
    ChannelConfig ch;
    ch.num_users = 1;
    ch.num_antennas = 8;
    ch.doppler = 1e-5;
    ch.noise_variance = 2.0;
    const long lag = 1000;
    const long total = symbols + lag;
    const std::uint64_t rs = derive_run_seed(seed, 31.0, 0);

    ChannelState state(ch, stream_seed(rs, Stream::ChannelPhases));
    Rng sym_rng(stream_seed(rs, Stream::Symbols));
    Rng noise_rng(stream_seed(rs, Stream::Noise));

    // Normalized per-element sample autocorrelation: the lag products and
    // the power share the slowly-cancelling cross-oscillator terms, so the
    // ratio converges orders of magnitude faster than the raw product mean.
    const std::size_t m = ch.num_antennas;
    std::vector<CVector> ring(m, CVector(static_cast<std::size_t>(lag)));
    CVector lag_products(m, 0.0);
    std::vector<double> power(m, 0.0);
    CMatrix cov(m, m);
    for (long i = 0; i < total; ++i) {
        const SymbolFrame frame = emit_frame(state, ch, sym_rng, noise_rng);
        const std::size_t slot = static_cast<std::size_t>(i % lag);
        for (std::size_t f = 0; f < m; ++f) {
            const Complex cur = state.gain(0, f);
            if (i >= lag) lag_products[f] += cur * std::conj(ring[f][slot]);
            if (i < symbols) power[f] += std::norm(cur);
            ring[f][slot] = cur;
        }
        if (i < symbols)
            for (std::size_t a = 0; a < m; ++a)
                for (std::size_t b = 0; b < m; ++b)
                    cov(a, b) += frame.noise[a] * std::conj(frame.noise[b]);
        state.advance_in_place();
    }

    const double j0 = std::cyl_bessel_j(0.0, 2.0 * std::numbers::pi * ch.doppler *
                                                 static_cast<double>(lag));
    double acf_err = 0.0;
    double acf = 0.0; // worst element's estimate, for the report
    for (std::size_t f = 0; f < m; ++f) {
        const double est = lag_products[f].real() / power[f];
        if (std::abs(est - j0) >= acf_err) {
            acf_err = std::abs(est - j0);
            acf = est;
        }
    }

    double cov_err = 0.0;
    for (std::size_t a = 0; a < m; ++a)
        for (std::size_t b = 0; b < m; ++b) {
            Complex c = cov(a, b) / static_cast<double>(symbols);
            if (a == b) c -= ch.noise_variance;
            cov_err += std::norm(c);
        }
    cov_err = std::sqrt(cov_err);
    const double cov_bound = 0.05 * ch.noise_variance * std::sqrt(static_cast<double>(m));

    CheckResult out;
    out.name = "channel_statistics";
    out.pass = acf_err <= 0.02 && cov_err <= cov_bound;
    out.detail = "lag-1000 autocorr worst element " + fmt(acf) + " vs J0 " + fmt(j0) +
                 " (err " + fmt(acf_err) + ", bound 0.02); noise cov err " + fmt(cov_err) +
                 " (bound " + fmt(cov_bound) + "); " + std::to_string(symbols) + " symbols";
    return out;
}

std::vector<CheckResult> run_all_checks(std::uint64_t seed) {
    return {
        complexity_exactness(),
        gradient_fidelity(120, seed),
        constraint_invariant(1750, seed),
        rank_selection_oracle(1200, seed),
        reduction_equivalences(1000, seed),
        channel_statistics(400000, seed),
    };
}

}  // namespace jiomber
