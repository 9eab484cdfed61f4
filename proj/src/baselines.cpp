#include "jiomber/baselines.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <utility>

#include "jiomber/jio_mber.hpp"

namespace jiomber {

namespace {
int resolve_bit(std::optional<int> training_bit, int decision) {
    if (!training_bit) return decision;
    if (*training_bit != 1 && *training_bit != -1)
        throw std::invalid_argument("training bit must be +-1");
    return *training_bit;
}
}  // namespace

FullRankLms::FullRankLms(std::size_t m, double mu) : w_(m, 0.0), mu_(mu) {
    if (m == 0) throw std::invalid_argument("FullRankLms: M must be >= 1");
}

int FullRankLms::step(const CVector& r, std::optional<int> training_bit) {
    const Complex x = inner(w_, r);
    const int decision = decide(x);
    const int b = resolve_bit(training_bit, decision);
    const Complex e = static_cast<double>(b) - x;
    add_scaled(w_, mu_ * std::conj(e), r); // w += mu e^* r
    return decision;
}

FullRankMber::FullRankMber(std::size_t m, double mu, double rho)
    : w_(m, 0.0), mu_(mu), rho_(rho) {
    if (m == 0) throw std::invalid_argument("FullRankMber: M must be >= 1");
    if (rho <= 0) throw std::invalid_argument("FullRankMber: rho must be > 0");
}

int FullRankMber::step(const CVector& r, std::optional<int> training_bit) {
    const Complex x = inner(w_, r);
    const int decision = decide(x);
    const int b = resolve_bit(training_bit, decision);
    const double re_x = x.real();
    const double c = mu_ * mber_gain(re_x, b, rho_);
    for (std::size_t d = 0; d < w_.size(); ++d)
        w_[d] = w_[d] + c * (r[d] - re_x * w_[d]);
    const double nrm = norm_sq(w_);
    if (nrm > kNormEps) {
        const double inv = 1.0 / std::sqrt(nrm);
        for (Complex& w : w_) w *= inv;
        scaled_ = true;
    } else {
        scaled_ = false;
    }
    return decision;
}

JioLms::JioLms(std::size_t m, std::size_t d, double mu_w, double mu_s)
    : s_(truncation_projection(m, d)), w_(d, 0.0), mu_w_(mu_w), mu_s_(mu_s) {}

int JioLms::step(const CVector& r, std::optional<int> training_bit) {
    const CVector rbar = hermitian_apply(s_, r);
    const Complex x = inner(w_, rbar);
    const int decision = decide(x);
    const int b = resolve_bit(training_bit, decision);
    const Complex e = static_cast<double>(b) - x;
    // Both updates read the pre-update snapshot.
    const Complex cw = mu_w_ * std::conj(e);
    const Complex cs = mu_s_ * std::conj(e);
    for (std::size_t i = 0; i < s_.rows(); ++i) {
        const Complex ri = cs * r[i];
        for (std::size_t j = 0; j < s_.cols(); ++j) s_(i, j) += ri * std::conj(w_[j]);
    }
    add_scaled(w_, cw, rbar);
    return decision;
}

EwmaStats::EwmaStats(std::size_t m, double lambda)
    : cov(m, m), steer(m, 0.0), lambda(lambda) {
    if (lambda <= 0.0 || lambda > 1.0) throw std::invalid_argument("EwmaStats: lambda in (0, 1]");
}

void EwmaStats::update(const CVector& r, int b) {
    if (r.size() != steer.size()) throw std::invalid_argument("EwmaStats: length mismatch");
    const std::size_t m = steer.size();
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = i; j < m; ++j) {
            const Complex v = lambda * cov(i, j) + r[i] * std::conj(r[j]);
            cov(i, j) = v;
            if (j != i) cov(j, i) = std::conj(v);
        }
        cov(i, i) = Complex(cov(i, i).real(), 0.0); // keep exactly Hermitian
        steer[i] = lambda * steer[i] + static_cast<double>(b) * r[i];
    }
}

MwfBasis mwf_construct(const CMatrix& cov, const CVector& steering, std::size_t d) {
    if (cov.rows() != cov.cols()) throw std::invalid_argument("mwf_construct: covariance not square");
    if (cov.rows() != steering.size()) throw std::invalid_argument("mwf_construct: steering length mismatch");
    if (d < 1 || d > cov.rows()) throw std::invalid_argument("mwf_construct: need 1 <= D <= M");

    const std::size_t m = cov.rows();
    std::vector<CVector> cols;
    cols.reserve(d);
    MwfBasis out;

    const double sp = std::sqrt(norm_sq(steering));
    if (sp > 0.0) {
        CVector h(steering);
        for (Complex& c : h) c *= 1.0 / sp;
        cols.push_back(std::move(h));
        while (cols.size() < d) {
            CVector u = matvec(cov, cols.back());
            const double pre = std::sqrt(norm_sq(u));
            if (!(pre > 0.0)) break;
            // Two Gram-Schmidt passes keep the basis orthonormal to ~1e-15.
            for (int pass = 0; pass < 2; ++pass)
                for (const CVector& h : cols) add_scaled(u, -inner(h, u), h);
            const double nr = std::sqrt(norm_sq(u));
            if (!(nr > 1e-10 * pre)) break; // direction already in the span
            for (Complex& c : u) c *= 1.0 / nr;
            cols.push_back(std::move(u));
        }
    }

    out.rank = cols.size();
    out.deficient = out.rank < d;
    out.basis = CMatrix(m, out.rank);
    for (std::size_t j = 0; j < out.rank; ++j)
        for (std::size_t i = 0; i < m; ++i) out.basis(i, j) = cols[j][i];
    return out;
}

namespace {

double off_diagonal_frobenius(const CMatrix& a) {
    double acc = 0.0;
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) {
            if (i == j) continue;
            const Complex& c = a(i, j);
            acc += c.real() * c.real() + c.imag() * c.imag();
        }
    return std::sqrt(acc);
}

}  // namespace

EigenDecomposition hermitian_eig(const CMatrix& input, const CMatrix* warm_start) {
    if (input.rows() != input.cols()) throw std::invalid_argument("hermitian_eig: matrix not square");
    const std::size_t n = input.rows();
    if (warm_start && (warm_start->rows() != n || warm_start->cols() != n))
        throw std::invalid_argument("hermitian_eig: warm start shape mismatch");

    CMatrix a = warm_start ? hermitian_matmul(*warm_start, matmul(input, *warm_start)) : input;
    // Symmetrize exactly; rotations below preserve this.
    for (std::size_t i = 0; i < n; ++i) {
        a(i, i) = Complex(a(i, i).real(), 0.0);
        for (std::size_t j = i + 1; j < n; ++j) {
            const Complex mean = 0.5 * (a(i, j) + std::conj(a(j, i)));
            a(i, j) = mean;
            a(j, i) = std::conj(mean);
        }
    }
    CMatrix v = warm_start ? *warm_start : CMatrix::identity(n);

    const double tol = 1e-10 * std::max(1.0, frobenius_norm(a));
    const double skip = n > 1 ? tol / static_cast<double>(n) : tol;
    constexpr int kMaxSweeps = 60;

    int sweeps = 0;
    while (n > 1 && off_diagonal_frobenius(a) >= tol) {
        if (sweeps++ >= kMaxSweeps) throw std::runtime_error("hermitian_eig: no convergence");
        for (std::size_t p = 0; p + 1 < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                const Complex apq = a(p, q);
                const double mag = std::abs(apq);
                if (mag <= skip) continue;
                const double app = a(p, p).real();
                const double aqq = a(q, q).real();
                const double tau = (app - aqq) / (2.0 * mag);
                const double t = (tau >= 0 ? 1.0 : -1.0) / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
                const double cs = 1.0 / std::sqrt(1.0 + t * t);
                const double sn = t * cs;
                const Complex w1 = (sn / mag) * apq; // sn e^{j arg(apq)}

                for (std::size_t i = 0; i < n; ++i) {
                    const Complex rp = a(p, i), rq = a(q, i);
                    a(p, i) = cs * rp + w1 * rq;
                    a(q, i) = -std::conj(w1) * rp + cs * rq;
                }
                for (std::size_t i = 0; i < n; ++i) {
                    const Complex cp = a(i, p), cq = a(i, q);
                    a(i, p) = cs * cp + std::conj(w1) * cq;
                    a(i, q) = -w1 * cp + cs * cq;
                }
                a(p, q) = 0.0;
                a(q, p) = 0.0;
                a(p, p) = Complex(a(p, p).real(), 0.0);
                a(q, q) = Complex(a(q, q).real(), 0.0);
                for (std::size_t i = 0; i < n; ++i) {
                    const Complex vp = v(i, p), vq = v(i, q);
                    v(i, p) = cs * vp + std::conj(w1) * vq;
                    v(i, q) = -w1 * vp + cs * vq;
                }
            }
        }
    }

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
        return a(x, x).real() > a(y, y).real();
    });

    EigenDecomposition out;
    out.sweeps = sweeps;
    out.values.resize(n);
    out.vectors = CMatrix(n, n);
    for (std::size_t j = 0; j < n; ++j) {
        out.values[j] = a(order[j], order[j]).real();
        for (std::size_t i = 0; i < n; ++i) out.vectors(i, j) = v(i, order[j]);
    }
    return out;
}

CMatrix eig_construct(const CMatrix& cov, std::size_t d) {
    if (d < 1 || d > cov.rows()) throw std::invalid_argument("eig_construct: need 1 <= D <= M");
    const EigenDecomposition ed = hermitian_eig(cov);
    CMatrix basis(cov.rows(), d);
    for (std::size_t j = 0; j < d; ++j)
        for (std::size_t i = 0; i < cov.rows(); ++i) basis(i, j) = ed.vectors(i, j);
    return basis;
}

namespace {

// Detect with the leading `rank` taps of w over the given basis, then apply
// the norm-constrained smoothed-BER filter update on those taps. Mirrors the
// filter half of jio_mber_update so frozen-projection runs match it
// decision for decision.
int mber_filter_step(const CMatrix& basis, std::size_t rank, CVector& w,
                     const CVector& r, std::optional<int> training_bit,
                     double mu, double rho, int* bit_out) {
    if (rank == 0) {
        const int decision = 1; // no subspace yet: soft output is 0
        if (bit_out) *bit_out = resolve_bit(training_bit, decision);
        return decision;
    }
    const CVector rbar = hermitian_apply(basis, r); // length == rank == basis cols
    Complex x = 0.0;
    for (std::size_t d = 0; d < rank; ++d) x += std::conj(w[d]) * rbar[d];
    const int decision = decide(x);
    const int b = resolve_bit(training_bit, decision);
    if (bit_out) *bit_out = b;

    const double re_x = x.real();
    const double c = mu * mber_gain(re_x, b, rho);
    // t = S w, ssw = S^H t over the active taps.
    CVector active(w.begin(), w.begin() + static_cast<std::ptrdiff_t>(rank));
    const CVector t = matvec(basis, active);
    const CVector ssw = hermitian_apply(basis, t);
    for (std::size_t d = 0; d < rank; ++d)
        w[d] = w[d] + c * (rbar[d] - re_x * ssw[d]);

    CVector next(w.begin(), w.begin() + static_cast<std::ptrdiff_t>(rank));
    const double nrm = norm_sq(matvec(basis, next));
    if (nrm > kNormEps) {
        const double inv = 1.0 / std::sqrt(nrm);
        for (std::size_t d = 0; d < rank; ++d) w[d] *= inv;
    }
    return decision;
}

}  // namespace

MwfMber::MwfMber(std::size_t m, std::size_t d, double mu, double rho, double lambda)
    : stats_(m, lambda), w_(d, 0.0), d_(d), mu_(mu), rho_(rho) {
    if (d < 1 || d > m) throw std::invalid_argument("MwfMber: need 1 <= D <= M");
    if (rho <= 0) throw std::invalid_argument("MwfMber: rho must be > 0");
}

void MwfMber::freeze_basis(CMatrix basis) { frozen_ = std::move(basis); }

int MwfMber::step(const CVector& r, std::optional<int> training_bit) {
    int bit = 0;
    int decision;
    if (frozen_) {
        decision = mber_filter_step(*frozen_, frozen_->cols(), w_, r, training_bit, mu_, rho_, &bit);
    } else {
        const MwfBasis mb = mwf_construct(stats_.cov, stats_.steer, d_);
        if (mb.deficient) ++deficient_;
        decision = mber_filter_step(mb.basis, mb.rank, w_, r, training_bit, mu_, rho_, &bit);
    }
    stats_.update(r, bit);
    return decision;
}

MwfLms::MwfLms(std::size_t m, std::size_t d, double mu, double lambda)
    : stats_(m, lambda), w_(d, 0.0), d_(d), mu_(mu) {
    if (d < 1 || d > m) throw std::invalid_argument("MwfLms: need 1 <= D <= M");
}

int MwfLms::step(const CVector& r, std::optional<int> training_bit) {
    const MwfBasis mb = mwf_construct(stats_.cov, stats_.steer, d_);
    if (mb.deficient) ++deficient_;
    int decision;
    int b;
    if (mb.rank == 0) {
        decision = 1;
        b = resolve_bit(training_bit, decision);
    } else {
        const CVector rbar = hermitian_apply(mb.basis, r);
        Complex x = 0.0;
        for (std::size_t d = 0; d < mb.rank; ++d) x += std::conj(w_[d]) * rbar[d];
        decision = decide(x);
        b = resolve_bit(training_bit, decision);
        const Complex ce = mu_ * std::conj(static_cast<double>(b) - x);
        for (std::size_t d = 0; d < mb.rank; ++d) w_[d] += ce * rbar[d];
    }
    stats_.update(r, b);
    return decision;
}

EigMber::EigMber(std::size_t m, std::size_t d, double mu, double rho, double lambda)
    : stats_(m, lambda), w_(d, 0.0), d_(d), mu_(mu), rho_(rho) {
    if (d < 1 || d > m) throw std::invalid_argument("EigMber: need 1 <= D <= M");
    if (rho <= 0) throw std::invalid_argument("EigMber: rho must be > 0");
}

int EigMber::step(const CVector& r, std::optional<int> training_bit) {
    const EigenDecomposition ed = hermitian_eig(stats_.cov, have_basis_ ? &eigenbasis_ : nullptr);
    eigenbasis_ = ed.vectors;
    have_basis_ = true;
    CMatrix basis(eigenbasis_.rows(), d_);
    for (std::size_t j = 0; j < d_; ++j)
        for (std::size_t i = 0; i < eigenbasis_.rows(); ++i) basis(i, j) = eigenbasis_(i, j);
    int bit = 0;
    const int decision = mber_filter_step(basis, d_, w_, r, training_bit, mu_, rho_, &bit);
    stats_.update(r, bit);
    return decision;
}

}  // namespace jiomber
