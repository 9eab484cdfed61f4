#pragma once

#include "jiomber/linalg.hpp"

// Reduced-rank linear detection front end. A receiver is the pair
// (S_D, w_bar): an M x D projection and a D-tap filter. The soft output for
// a received vector r is
//
//   x_bar = w_bar^H S_D^H r,     b_hat = sign(Re[x_bar]),
//
// and the smoothed single-sample error probability used as the adaptation
// cost is
//
//   P_e = Q( sign(b) Re[x_bar] / (rho sqrt(w_bar^H S_D^H S_D w_bar)) ),
//
// a kernel-smoothed error indicator with radius rho (rho = 2 sigma in the
// harness). The product norm w_bar^H S_D^H S_D w_bar is held at 1 by the
// adaptive receivers; the functions here accept arbitrary positive norms.

namespace jiomber {

enum class Mode { Training, DecisionDirected };

struct ReceiverState {
    CMatrix projection;         // S_D, M x D
    CVector filter;             // w_bar, length D
    double kernel_radius = 1.0; // rho > 0
    double step_w = 0.0;        // mu_w
    double step_s = 0.0;        // mu_S
    Mode mode = Mode::Training;
};

// Q(x) = 0.5 erfc(x / sqrt(2)).
double q_function(double x);

// sign(Re[x_bar]) with ties (Re = 0) resolved to +1.
int decide(Complex x_bar);

// S_D^H r.
CVector project(const ReceiverState& state, const CVector& r);

// w_bar^H S_D^H r.
Complex output(const ReceiverState& state, const CVector& r);

// w_bar^H S_D^H S_D w_bar, evaluated as ||S_D w_bar||^2.
double constraint_norm(const ReceiverState& state);

// Smoothed error probability of the decision on x_bar given the true (or
// assumed) bit b. Throws std::domain_error when the constraint norm is zero.
double error_probability(const ReceiverState& state, Complex x_bar, int b);

// Gaussian kernel density estimate of the soft output distribution: one
// sample at sign(b) Re[x_bar], standard deviation rho sqrt(norm).
double kernel_density(const ReceiverState& state, double x_tilde, Complex x_bar, int b);

// Common scalar of the norm-constrained stochastic-gradient updates:
//   exp(-Re[x_bar]^2 / (2 rho^2)) sign(b) / (2 sqrt(2 pi) rho).
// Shared so that algebraically equivalent update paths stay bit-identical.
double mber_gain(double re_x_bar, int b, double rho);

}  // namespace jiomber
