#ifndef RODWAVE_MODEL_HPP
#define RODWAVE_MODEL_HPP

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <utility>

#include "rodwave/grid.hpp"
#include "rodwave/nonlocal.hpp"

namespace rodwave {

using ScalarFn = std::function<double(double)>;

/** The nonlinearity pair (f, g) with closed-form derivatives of f.
    Immutable after construction. */
struct ModelSpec {
    std::string name;
    ScalarFn f, f_prime, f_second, g;
    // c with g(u) <= c u^2 on the working amplitude range, when known.
    std::optional<double> g_quadratic_constant;
    bool f_prime_vanishes_at_zero = true;
    std::map<std::string, double> parameters;
};

struct Witness {
    double x = 0.0;
    double value = 0.0;
};

/** Sampled verification of the structural conditions on (f, g): smoothness
    is assumed for closed-form presets, convexity of f and positivity of g
    away from zero are checked on [-amplitude, amplitude]. */
struct HypothesisReport {
    bool h1_smooth_assumed = true;
    bool h2_ok = false;            // f(0) = 0 and f'' >= 0
    std::optional<Witness> h2_witness;
    bool h3_ok = false;            // g >= 0, zero only at 0
    std::optional<Witness> h3_witness;
    bool quadratic_bound_ok = false;
    double estimated_c = 0.0;      // max g(x)/x^2 over the sampled range
    bool f_prime_zero_ok = false;  // f'(0) = 0
    double amplitude = 0.0;

    bool all_ok() const { return h2_ok && h3_ok && quadratic_bound_ok; }
};

// bbm: no params; dai: gamma; dgh_reduced: Gamma_hat; rch: beta, gamma, Gamma.
ModelSpec build_preset(const std::string& name,
                       const std::map<std::string, double>& params = {});

HypothesisReport validate_hypotheses(const ModelSpec& spec, double amplitude);

// du/dt = -f'(u) u_x - d/dx (1-d^2/dx^2)^{-1} ( g(u) + f''(u) u_x^2 / 2 ),
// with spectral u_x and nonlinear products formed on a factor-2 zero-padded
// grid (covers the quartic terms of rch).
GridFunction rhs(const ModelSpec& spec, const HelmholtzOperator& op,
                 const GridFunction& u);

// Removes the linear advection term of the DGH equation by the change of
// frame u(t,x) = v(t, x + alpha t); returns the reduced model with
// Gamma_hat = Gamma - alpha and the frame speed alpha.
std::pair<ModelSpec, double> galilean_reduce_dgh(double alpha, double Gamma);

}  // namespace rodwave

#endif
