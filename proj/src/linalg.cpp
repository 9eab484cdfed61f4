#include "jiomber/linalg.hpp"

#include <cmath>
#include <stdexcept>

namespace jiomber {

namespace {
thread_local OpTally* g_tally = nullptr;
}  // namespace

TallyScope::TallyScope(OpTally& tally) : prev_(g_tally) { g_tally = &tally; }
TallyScope::~TallyScope() { g_tally = prev_; }

void tally_ops(long long mul, long long add) {
    if (g_tally) {
        g_tally->mul += mul;
        g_tally->add += add;
    }
}

CMatrix CMatrix::identity(std::size_t n) {
    CMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
}

CVector hermitian_apply(const CMatrix& m, const CVector& v) {
    if (m.rows() == 0 || m.cols() == 0 || v.empty())
        throw std::invalid_argument("hermitian_apply: empty operand");
    if (m.rows() != v.size())
        throw std::invalid_argument("hermitian_apply: rows != vector length");
    const std::size_t rows = m.rows(), cols = m.cols();
    CVector out(cols);
    for (std::size_t d = 0; d < cols; ++d) {
        Complex acc = 0.0;
        for (std::size_t f = 0; f < rows; ++f) acc += std::conj(m(f, d)) * v[f];
        out[d] = acc;
    }
    tally_ops(static_cast<long long>(rows * cols),
              static_cast<long long>((rows - 1) * cols));
    return out;
}

CVector matvec(const CMatrix& m, const CVector& v) {
    if (m.rows() == 0 || m.cols() == 0 || v.empty())
        throw std::invalid_argument("matvec: empty operand");
    if (m.cols() != v.size())
        throw std::invalid_argument("matvec: cols != vector length");
    const std::size_t rows = m.rows(), cols = m.cols();
    CVector out(rows);
    for (std::size_t f = 0; f < rows; ++f) {
        Complex acc = 0.0;
        for (std::size_t d = 0; d < cols; ++d) acc += m(f, d) * v[d];
        out[f] = acc;
    }
    tally_ops(static_cast<long long>(rows * cols),
              static_cast<long long>(rows * (cols - 1)));
    return out;
}

Complex inner(const CVector& a, const CVector& b) {
    if (a.empty() || b.empty()) throw std::invalid_argument("inner: empty operand");
    if (a.size() != b.size()) throw std::invalid_argument("inner: length mismatch");
    Complex acc = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) acc += std::conj(a[i]) * b[i];
    tally_ops(static_cast<long long>(a.size()), static_cast<long long>(a.size() - 1));
    return acc;
}

CMatrix outer(const CVector& a, const CVector& b) {
    if (a.empty() || b.empty()) throw std::invalid_argument("outer: empty operand");
    CMatrix m(a.size(), b.size());
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < b.size(); ++j) m(i, j) = a[i] * std::conj(b[j]);
    tally_ops(static_cast<long long>(a.size() * b.size()), 0);
    return m;
}

double norm_sq(const CVector& v) {
    if (v.empty()) throw std::invalid_argument("norm_sq: empty operand");
    double acc = 0.0;
    for (const Complex& c : v) acc += c.real() * c.real() + c.imag() * c.imag();
    tally_ops(static_cast<long long>(v.size()), static_cast<long long>(v.size() - 1));
    return acc;
}

void add_scaled(CVector& y, Complex c, const CVector& x) {
    if (y.size() != x.size()) throw std::invalid_argument("add_scaled: length mismatch");
    for (std::size_t i = 0; i < y.size(); ++i) y[i] += c * x[i];
    tally_ops(static_cast<long long>(x.size()), static_cast<long long>(x.size()));
}

void add_scaled_outer(CMatrix& s, double c, const CVector& a, const CVector& b) {
    if (s.rows() != a.size() || s.cols() != b.size())
        throw std::invalid_argument("add_scaled_outer: shape mismatch");
    for (std::size_t i = 0; i < a.size(); ++i) {
        const Complex ca = c * a[i];
        for (std::size_t j = 0; j < b.size(); ++j) s(i, j) += ca * std::conj(b[j]);
    }
    tally_ops(static_cast<long long>(2 * a.size() * b.size()),
              static_cast<long long>(a.size() * b.size()));
}

CMatrix matmul(const CMatrix& a, const CMatrix& b) {
    if (a.cols() != b.rows()) throw std::invalid_argument("matmul: shape mismatch");
    CMatrix out(a.rows(), b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < b.cols(); ++j) {
            Complex acc = 0.0;
            for (std::size_t k = 0; k < a.cols(); ++k) acc += a(i, k) * b(k, j);
            out(i, j) = acc;
        }
    tally_ops(static_cast<long long>(a.rows() * a.cols() * b.cols()),
              static_cast<long long>(a.rows() * (a.cols() - 1) * b.cols()));
    return out;
}

CMatrix hermitian_matmul(const CMatrix& a, const CMatrix& b) {
    if (a.rows() != b.rows()) throw std::invalid_argument("hermitian_matmul: shape mismatch");
    CMatrix out(a.cols(), b.cols());
    for (std::size_t i = 0; i < a.cols(); ++i)
        for (std::size_t j = 0; j < b.cols(); ++j) {
            Complex acc = 0.0;
            for (std::size_t k = 0; k < a.rows(); ++k) acc += std::conj(a(k, i)) * b(k, j);
            out(i, j) = acc;
        }
    tally_ops(static_cast<long long>(a.rows() * a.cols() * b.cols()),
              static_cast<long long>((a.rows() - 1) * a.cols() * b.cols()));
    return out;
}

double frobenius_norm(const CMatrix& m) {
    double acc = 0.0;
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j) {
            const Complex& c = m(i, j);
            acc += c.real() * c.real() + c.imag() * c.imag();
        }
    return std::sqrt(acc);
}

}  // namespace jiomber
