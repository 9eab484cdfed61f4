#include "jiomber/receiver.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace jiomber {

namespace {
void check_bit(int b) {
    if (b != 1 && b != -1) throw std::invalid_argument("bit must be +-1");
}
}  // namespace

double q_function(double x) { return 0.5 * std::erfc(x / std::numbers::sqrt2); }

int decide(Complex x_bar) { return x_bar.real() >= 0.0 ? 1 : -1; }

CVector project(const ReceiverState& state, const CVector& r) {
    return hermitian_apply(state.projection, r);
}

Complex output(const ReceiverState& state, const CVector& r) {
    return inner(state.filter, project(state, r));
}

double constraint_norm(const ReceiverState& state) {
    return norm_sq(matvec(state.projection, state.filter));
}

double error_probability(const ReceiverState& state, Complex x_bar, int b) {
    check_bit(b);
    const double nrm = constraint_norm(state);
    if (nrm <= 0.0) throw std::domain_error("error_probability: zero-norm receiver");
    return q_function(b * x_bar.real() / (state.kernel_radius * std::sqrt(nrm)));
}

double kernel_density(const ReceiverState& state, double x_tilde, Complex x_bar, int b) {
    check_bit(b);
    const double nrm = constraint_norm(state);
    if (nrm <= 0.0) throw std::domain_error("kernel_density: zero-norm receiver");
    const double rho = state.kernel_radius;
    const double center = b * x_bar.real();
    const double dev = x_tilde - center;
    return std::exp(-dev * dev / (2.0 * nrm * rho * rho)) /
           (rho * std::sqrt(2.0 * std::numbers::pi * nrm));
}

double mber_gain(double re_x_bar, int b, double rho) {
    check_bit(b);
    return std::exp(-re_x_bar * re_x_bar / (2.0 * rho * rho)) * b /
           (2.0 * std::sqrt(2.0 * std::numbers::pi) * rho);
}

}  // namespace jiomber
