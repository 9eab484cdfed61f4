#pragma once

#include <optional>
#include <vector>

#include "jiomber/receiver.hpp"

// Reference detectors the adaptive receiver is measured against: full-rank
// LMS and MBER stochastic gradient, the LMS-adapted joint projection/filter,
// the multistage Wiener filter (correlation-subtraction forward recursion)
// and principal-eigenvector projection, each combined with either the MSE or
// the smoothed-BER filter update. The subspace receivers track second-order
// statistics with an exponentially weighted estimate
//
//   R(i) = lambda R(i-1) + r(i) r(i)^H,   p(i) = lambda p(i-1) + b(i) r(i)
//
// (lambda = 0.998 in the harness) and rebuild their projection every symbol
// from the statistics accumulated through the previous symbol.

namespace jiomber {

class FullRankLms {
  public:
    FullRankLms(std::size_t m, double mu);
    int step(const CVector& r, std::optional<int> training_bit);
    const CVector& filter() const { return w_; }

  private:
    CVector w_;
    double mu_;
};

class FullRankMber {
  public:
    FullRankMber(std::size_t m, double mu, double rho);
    int step(const CVector& r, std::optional<int> training_bit);
    const CVector& filter() const { return w_; }
    bool last_step_scaled() const { return scaled_; }

  private:
    CVector w_;
    double mu_, rho_;
    bool scaled_ = false;
};

// MSE-driven joint adaptation of (S_D, w_bar); both updates read the same
// pre-update snapshot. No norm constraint.
class JioLms {
  public:
    JioLms(std::size_t m, std::size_t d, double mu_w, double mu_s);
    int step(const CVector& r, std::optional<int> training_bit);
    const CVector& filter() const { return w_; }
    const CMatrix& projection() const { return s_; }

  private:
    CMatrix s_;
    CVector w_;
    double mu_w_, mu_s_;
};

struct EwmaStats {
    CMatrix cov;   // R, Hermitian by construction
    CVector steer; // p
    double lambda;

    EwmaStats(std::size_t m, double lambda);
    void update(const CVector& r, int b);
};

// Forward recursion of the multistage Wiener filter: orthonormal stage
// vectors spanning {p, R p, R^2 p, ...}. Stops early (deficient = true) when
// the next direction is numerically inside the span already built.
struct MwfBasis {
    CMatrix basis; // M x rank
    std::size_t rank = 0;
    bool deficient = false;
};

MwfBasis mwf_construct(const CMatrix& cov, const CVector& steering, std::size_t d);

// Cyclic Jacobi on a Hermitian matrix. Rotations stop when the off-diagonal
// Frobenius norm falls below 1e-10 * max(1, ||A||_F). warm_start, when given,
// pre-rotates with a previous eigenbasis so slowly varying matrices converge
// in one or two sweeps and eigenvector phases stay continuous.
struct EigenDecomposition {
    std::vector<double> values; // descending
    CMatrix vectors;            // columns, same order
    int sweeps = 0;
};

EigenDecomposition hermitian_eig(const CMatrix& a, const CMatrix* warm_start = nullptr);

// First d principal eigenvectors as projection columns.
CMatrix eig_construct(const CMatrix& cov, std::size_t d);

// Shared subspace receiver body: projection rebuilt every symbol by the
// derived policy, filter adapted with either the MSE or smoothed-BER rule.
// During statistics warm-up the recursion can be rank deficient; the
// receiver then operates on the leading `rank` taps and flags the symbol.
class MwfMber {
  public:
    MwfMber(std::size_t m, std::size_t d, double mu, double rho, double lambda);
    int step(const CVector& r, std::optional<int> training_bit);
    // Test hook: skip reconstruction and project with a fixed basis.
    void freeze_basis(CMatrix basis);
    long deficient_symbols() const { return deficient_; }
    const CVector& filter() const { return w_; }

  private:
    EwmaStats stats_;
    CVector w_;
    std::size_t d_;
    double mu_, rho_;
    long deficient_ = 0;
    std::optional<CMatrix> frozen_;
};

class MwfLms {
  public:
    MwfLms(std::size_t m, std::size_t d, double mu, double lambda);
    int step(const CVector& r, std::optional<int> training_bit);
    long deficient_symbols() const { return deficient_; }

  private:
    EwmaStats stats_;
    CVector w_;
    std::size_t d_;
    double mu_;
    long deficient_ = 0;
};

class EigMber {
  public:
    EigMber(std::size_t m, std::size_t d, double mu, double rho, double lambda);
    int step(const CVector& r, std::optional<int> training_bit);
    const CVector& filter() const { return w_; }

  private:
    EwmaStats stats_;
    CMatrix eigenbasis_; // warm start for the next symbol
    bool have_basis_ = false;
    CVector w_;
    std::size_t d_;
    double mu_, rho_;
};

}  // namespace jiomber
