#include "jiomber/jio_mber.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <utility>

namespace jiomber {

CMatrix truncation_projection(std::size_t m, std::size_t d) {
    if (d < 1 || d > m) throw std::invalid_argument("truncation_projection: need 1 <= D <= M");
    CMatrix s(m, d);
    for (std::size_t i = 0; i < d; ++i) s(i, i) = 1.0;
    return s;
}

namespace {

// exp(-Re^2 / (2 rho^2 nrm)) sign(b) / (2 sqrt(2 pi) rho), the gradient
// scalar at arbitrary constraint norm.
double general_gain(double re_x, int b, double rho, double nrm) {
    if (b != 1 && b != -1) throw std::invalid_argument("bit must be +-1");
    return std::exp(-re_x * re_x / (2.0 * rho * rho * nrm)) * b /
           (2.0 * std::sqrt(2.0 * std::numbers::pi) * rho);
}

}  // namespace

CVector grad_w(const ReceiverState& state, const CVector& r, int b) {
    const double nrm = constraint_norm(state);
    if (nrm <= 0.0) throw std::domain_error("grad_w: zero-norm receiver");
    const CVector rbar = project(state, r);
    const Complex x = inner(state.filter, rbar);
    const double re_x = x.real();
    const double g = general_gain(re_x, b, state.kernel_radius, nrm);
    const CVector ssw = hermitian_apply(state.projection, matvec(state.projection, state.filter));
    const double inv_sqrt = 1.0 / std::sqrt(nrm);
    const double inv_32 = inv_sqrt / nrm;
    CVector out(rbar.size());
    for (std::size_t d = 0; d < out.size(); ++d)
        out[d] = -g * (rbar[d] * inv_sqrt - re_x * ssw[d] * inv_32);
    return out;
}

CMatrix grad_s(const ReceiverState& state, const CVector& r, int b) {
    const double nrm = constraint_norm(state);
    if (nrm <= 0.0) throw std::domain_error("grad_s: zero-norm receiver");
    const CVector rbar = project(state, r);
    const Complex x = inner(state.filter, rbar);
    const double re_x = x.real();
    const double g = general_gain(re_x, b, state.kernel_radius, nrm);
    const CVector sw = matvec(state.projection, state.filter);
    const double inv_sqrt = 1.0 / std::sqrt(nrm);
    const double inv_32 = inv_sqrt / nrm;
    // -g (r / nrm^{1/2} - Re[x] S w_bar / nrm^{3/2}) w_bar^H
    CVector left(r.size());
    for (std::size_t f = 0; f < r.size(); ++f)
        left[f] = -g * (r[f] * inv_sqrt - re_x * sw[f] * inv_32);
    return outer(left, state.filter);
}

bool jio_mber_update(ReceiverState& state, const CVector& r, const CVector& rbar,
                     Complex x_bar, int b) {
    const double re_x = x_bar.real();
    const double g = mber_gain(re_x, b, state.kernel_radius);
    const CVector t = matvec(state.projection, state.filter);       // S w (snapshot)
    const CVector ssw = hermitian_apply(state.projection, t);       // S^H S w
    const double cw = state.step_w * g;
    CVector w_next(state.filter.size());
    for (std::size_t d = 0; d < w_next.size(); ++d)
        w_next[d] = state.filter[d] + cw * (rbar[d] - re_x * ssw[d]);
    // S update reads the snapshot filter, so it runs before the assignment.
    CVector u(r.size());
    for (std::size_t f = 0; f < r.size(); ++f) u[f] = r[f] - re_x * t[f];
    add_scaled_outer(state.projection, state.step_s * g, u, state.filter);
    state.filter = std::move(w_next);
    const double nrm = norm_sq(matvec(state.projection, state.filter));
    if (nrm > kNormEps) {
        const double inv = 1.0 / std::sqrt(nrm);
        for (Complex& w : state.filter) w *= inv;
        return true;
    }
    return false;
}

JioMberReceiver::JioMberReceiver(ReceiverState initial, long training_length)
    : state_(std::move(initial)), training_(training_length) {
    if (training_ < 0) throw std::invalid_argument("JioMberReceiver: negative training length");
    if (state_.kernel_radius <= 0) throw std::invalid_argument("JioMberReceiver: rho must be > 0");
    if (state_.projection.cols() != state_.filter.size())
        throw std::invalid_argument("JioMberReceiver: filter length != projection columns");
    state_.mode = training_ > 0 ? Mode::Training : Mode::DecisionDirected;
}

JioMberReceiver JioMberReceiver::standard(std::size_t m, std::size_t d, double rho,
                                          double mu_w, double mu_s, long training_length) {
    ReceiverState st;
    st.projection = truncation_projection(m, d);
    st.filter = CVector(d, 0.0);
    st.kernel_radius = rho;
    st.step_w = mu_w;
    st.step_s = mu_s;
    return JioMberReceiver(std::move(st), training_length);
}

int JioMberReceiver::step(const CVector& r, std::optional<int> training_bit) {
    const CVector rbar = project(state_, r);
    const Complex x = inner(state_.filter, rbar);
    const int decision = decide(x);
    int b;
    if (state_.mode == Mode::Training) {
        if (!training_bit) throw std::invalid_argument("jio_mber step: training bit required in Training mode");
        if (*training_bit != 1 && *training_bit != -1)
            throw std::invalid_argument("jio_mber step: training bit must be +-1");
        b = *training_bit;
    } else {
        b = decision;
    }
    scaled_ = jio_mber_update(state_, r, rbar, x, b);
    ++index_;
    if (index_ >= training_) state_.mode = Mode::DecisionDirected;
    return decision;
}

}  // namespace jiomber
