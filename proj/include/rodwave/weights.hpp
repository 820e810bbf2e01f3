#ifndef RODWAVE_WEIGHTS_HPP
#define RODWAVE_WEIGHTS_HPP

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "rodwave/grid.hpp"

namespace rodwave {

/** A positive weight phi with its moderating function v and the constants
    of the admissibility class: |phi'| <= A |phi| a.e. and
    phi(x+y) <= c0 v(x) phi(y). */
struct Weight {
    std::string name;
    std::function<double(double)> phi;
    std::function<double(double)> phi_prime;
    std::function<double(double)> v;
    double log_derivative_bound = 0.0;  // A
    double c0 = 1.0;
    double inf_v = 1.0;
    double kernel_v_l1 = 0.0;  // |e^{-|.|} v|_1
};

// Catalog entries:
//   exp_half          : phi = e^{|x|/2}
//   exp_a (a in (0,1)): phi = e^{a|x|}
//   poly_b (b >= 0)   : phi = (1+|x|)^b
//   paper_envelope_d  : phi = e^{|x|/2} (1+|x|)^{1/2} ln(e+|x|)^d, d > 1/2
//     (ln(e+|x|) >= 1 replaces ln(1+|x|), which vanishes at 0 and so is
//      not a positive weight there; same asymptotics)
// All entries are self-moderating: v = phi, c0 = 1.
Weight catalog(const std::string& name,
               std::optional<double> param = std::nullopt);

// phi_N = min(phi, N); same A and v, moderateness constant max(c0, 1/inf v).
Weight truncate(const Weight& w, double cap);

struct SubmultiplicativeReport {
    bool ok = false;
    double worst_ratio = 0.0;  // max v(x+y) / (v(x) v(y)) over the lattice
    double witness_x = 0.0;
    double witness_y = 0.0;
};

// Deterministic 201x201 lattice on [-40, 40]^2.
SubmultiplicativeReport check_submultiplicative(
    const std::function<double(double)>& v);

// Empirical c0: max phi(x+y) / (v(x) phi(y)) over the same lattice.
double estimate_moderate_constant(const std::function<double(double)>& phi,
                                  const std::function<double(double)>& v);

struct AdmissibilityFailure {
    std::string check;
    double witness_x = 0.0;
    double witness_y = 0.0;
};

struct AdmissibilityReport {
    std::string name;
    bool admissible = false;
    bool log_derivative_ok = false;
    bool submultiplicative_ok = false;
    bool inf_v_positive = false;
    bool kernel_integrable = false;
    double a_bound = 0.0;
    double c0 = 0.0;
    double inf_v = 0.0;
    double kernel_v_l1 = 0.0;
    double kernel_v_l2 = 0.0;
    double kernel_v_linf = 0.0;
    std::vector<AdmissibilityFailure> failures;

    std::string to_json() const;
};

// Sampled verification of the full admissibility definition: log-derivative
// bound on a 1e-3-spaced sample (one-sided quotients near the |x| kink),
// sub-multiplicativity of v, inf v > 0, and a decaying, range-stable
// quadrature of e^{-|x|} v(x).
AdmissibilityReport check_admissible(const Weight& w);

struct YoungReport {
    double lhs = 0.0;  // |(f * g) phi|_p
    double rhs = 0.0;  // c0 |f v|_1 |g phi|_p
    bool ok = false;
};

// Discrete periodic convolution with dx scaling.
YoungReport young_check(const GridFunction& f, const GridFunction& g,
                        const Weight& w, double p);

}  // namespace rodwave

#endif
