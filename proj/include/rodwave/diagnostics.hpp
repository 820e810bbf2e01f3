#ifndef RODWAVE_DIAGNOSTICS_HPP
#define RODWAVE_DIAGNOSTICS_HPP

#include <utility>
#include <vector>

#include "rodwave/evolve.hpp"
#include "rodwave/weights.hpp"

namespace rodwave {

// ---- snapshot-level fields ----

// g(u) + f''(u) u_x^2 / 2, with spectral u_x.
GridFunction h_field(const ModelSpec& spec, const GridFunction& u);
GridFunction h_field(const ModelSpec& spec, const GridFunction& u,
                     const GridFunction& ux);

// f'(u) u_x, the transport term.
GridFunction transport_field(const ModelSpec& spec, const GridFunction& u,
                             const GridFunction& ux);

// d/dx (1-d^2/dx^2)^{-1} applied to h_field.
GridFunction F_field(const ModelSpec& spec, const HelmholtzOperator& op,
                     const GridFunction& u);

// The invariant integral(u^2 + u_x^2).
double energy(const GridFunction& u);

// ---- trajectory-level diagnostics ----

// Time average (1/t) int_0^t h_tau; h_0 of the datum at t = 0.
GridFunction sigma_field(const Trajectory& traj, double t);

// Exponential moments (lambda_plus, lambda_minus) of sigma,
// lambda_pm = (1/2) int e^{+-y} sigma(t,y) dy. Refuses when the integrand
// has not decayed below the guard threshold before the boundary.
std::pair<double, double> lambda_pm(const Trajectory& traj, double t);

// Nonnegative tail fields vanishing at the respective infinity:
//   eps_plus(x)  = (1/2) int_x^inf  (e^{y}  + e^{2x-y}) sigma(t,y) dy
//   eps_minus(x) = (1/2) int_-inf^x (e^{-y} + e^{y-2x}) sigma(t,y) dy
// The solution tail obeys u - u_0 - R = t e^{-x} (lambda_plus - eps_plus)
// for x > 0 (mirrored on the left), exactly in the continuum algebra.
std::pair<GridFunction, GridFunction> epsilon_pm(const Trajectory& traj,
                                                 double t);

struct TailFit {
    double window_lo = 0.0;
    double window_hi = 0.0;
    double relative_error = 0.0;  // magnitude-weighted L2 residual of the fit
};

/** Decomposition of u(t,.) into datum, transport integral, and exponential
    tail, with the pointwise residual of the identity
    u = u_0 + R + sign(x) t e^{-|x|} (lambda_pm - eps_pm). */
struct ProfileReport {
    double t = 0.0;
    double lambda_plus = 0.0;
    double lambda_minus = 0.0;
    GridFunction epsilon_plus;
    GridFunction epsilon_minus;
    GridFunction r_field;            // R(t,.) = -int_0^t f'(u) u_x
    GridFunction identity_residual;  // LHS - RHS, pointwise
    double residual_max = 0.0;
    TailFit tail_fit;
};

// support_radius: where the datum's numerical support ends (the tail-law
// window is [support_radius + 5, L - 10]).
ProfileReport profile_decompose(const Trajectory& traj, double t,
                                double support_radius = 1.0);

/** e^{|x|/2} (1+|x|)^{1/2} ln(1+|x|)^d (|u|+|u_x|) and its grid supremum;
    cells with |u|+|u_x| below 1e-250 are masked. Requires d > 1/2. */
struct DecayEnvelope {
    double d = 0.0;
    GridFunction envelope_values;
    double sup_value = 0.0;
};

DecayEnvelope decay_envelope(const GridFunction& u, const GridFunction& ux,
                             double d);

struct WeightedSeriesEntry {
    double t = 0.0;
    double norm = 0.0;       // |phi u|_p + |phi u_x|_p
    double ratio = 0.0;      // norm / norm(0), 1 for the zero datum
    double kappa_hat = 0.0;  // running max ratio
    double half_l2 = 0.0;    // |phi^{1/2} u|_2 + |phi^{1/2} u_x|_2
};

// Refuses when the weighted datum norm is not finite.
std::vector<WeightedSeriesEntry> weighted_persistence(const Trajectory& traj,
                                                      const Weight& w,
                                                      double p);

struct BoundConstantM {
    double sup_u = 0.0;
    double sup_ux = 0.0;
    double sup_f_u = 0.0;
    double sup_fp_u = 0.0;
    double sup_fpp_u = 0.0;
    double total() const {
        return sup_u + sup_ux + sup_f_u + sup_fp_u + sup_fpp_u;
    }
};

BoundConstantM bound_constant_M(const Trajectory& traj);

}  // namespace rodwave

#endif
