#pragma once

#include <complex>
#include <cstddef>
#include <vector>

// Dense complex vectors/matrices for the detector kernels. Everything here
// accumulates sums left-to-right in ascending index order; several tests
// assert bit-identical results between code paths that must perform the
// same arithmetic, so do not "optimize" the loop order.

namespace jiomber {

using Complex = std::complex<double>;
using CVector = std::vector<Complex>;

// Optional tally of complex multiply/add counts, incremented at kernel
// granularity (one bump per call, not per element). Used by the complexity
// sanity test; costs nothing when no tally is installed.
struct OpTally {
    long long mul = 0;
    long long add = 0;
};

class TallyScope {
  public:
    explicit TallyScope(OpTally& tally);
    ~TallyScope();
    TallyScope(const TallyScope&) = delete;
    TallyScope& operator=(const TallyScope&) = delete;

  private:
    OpTally* prev_;
};

void tally_ops(long long mul, long long add);

// Row-major complex matrix.
class CMatrix {
  public:
    CMatrix() = default;
    CMatrix(std::size_t rows, std::size_t cols)
        : rows_(rows), cols_(cols), data_(rows * cols) {}

    static CMatrix identity(std::size_t n);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    Complex& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
    const Complex& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

    Complex* data() { return data_.data(); }
    const Complex* data() const { return data_.data(); }

    bool same_shape(const CMatrix& other) const {
        return rows_ == other.rows_ && cols_ == other.cols_;
    }

  private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<Complex> data_;
};

// m^H v: per column d, sum_f conj(m(f,d)) v[f].
CVector hermitian_apply(const CMatrix& m, const CVector& v);

// m v: per row f, sum_d m(f,d) v[d].
CVector matvec(const CMatrix& m, const CVector& v);

// a^H b = sum_i conj(a[i]) b[i].
Complex inner(const CVector& a, const CVector& b);

// a b^H (rows from a, columns from b).
CMatrix outer(const CVector& a, const CVector& b);

// sum_i |v[i]|^2.
double norm_sq(const CVector& v);

// y += c x.
void add_scaled(CVector& y, Complex c, const CVector& x);

// s += c a b^H with real c.
void add_scaled_outer(CMatrix& s, double c, const CVector& a, const CVector& b);

// a b (matrix product).
CMatrix matmul(const CMatrix& a, const CMatrix& b);

// a^H b (matrix product).
CMatrix hermitian_matmul(const CMatrix& a, const CMatrix& b);

double frobenius_norm(const CMatrix& m);

}  // namespace jiomber
