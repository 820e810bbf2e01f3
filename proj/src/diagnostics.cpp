#include "rodwave/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace rodwave {

namespace {

// Relative gate below which sigma is treated as the FFT roundoff floor:
// e^{|y|} would otherwise amplify that floor into the exponential moments.
constexpr double kNoiseGate = 1e-18;

// Sigma with its spectral derivative, shared by the epsilon quadratures.
// Gated cells carry zero in both fields.
struct SigmaPair {
    GridFunction sigma;
    GridFunction sigma_x;
};

SigmaPair sigma_pair(const Trajectory& traj, double t) {
    SigmaPair out;
    out.sigma = sigma_field(traj, t);
    out.sigma_x = spectral_derivative(out.sigma);
    const double gate = kNoiseGate * max_abs(out.sigma);
    for (int j = 0; j < out.sigma.size(); ++j)
        if (std::abs(out.sigma.values[j]) <= gate) {
            out.sigma.values[j] = 0.0;
            out.sigma_x.values[j] = 0.0;
        }
    return out;
}

// The gated sigma must have died out before the boundary or the moments
// e^{|y|} sigma are meaningless.
void check_boundary_decay(const GridFunction& sigma) {
    const int n = sigma.size();
    for (int j : {0, 1, n - 2, n - 1}) {
        if (sigma.values[j] != 0.0) {
            std::ostringstream msg;
            msg << "lambda/epsilon: exponential moment contaminated by the "
                   "boundary (sigma "
                << sigma.values[j] << " at y = " << sigma.grid.node(j) << ")";
            throw std::runtime_error(msg.str());
        }
    }
}

}  // namespace

GridFunction h_field(const ModelSpec& spec, const GridFunction& u) {
    return h_field(spec, u, spectral_derivative(u));
}

GridFunction h_field(const ModelSpec& spec, const GridFunction& u,
                     const GridFunction& ux) {
    GridFunction out(u.grid);
    for (int j = 0; j < u.size(); ++j)
        out.values[j] = spec.g(u.values[j]) +
                        0.5 * spec.f_second(u.values[j]) * ux.values[j] *
                            ux.values[j];
    require_finite(out, "h_field");
    return out;
}

GridFunction transport_field(const ModelSpec& spec, const GridFunction& u,
                             const GridFunction& ux) {
    GridFunction out(u.grid);
    for (int j = 0; j < u.size(); ++j)
        out.values[j] = spec.f_prime(u.values[j]) * ux.values[j];
    require_finite(out, "transport_field");
    return out;
}

GridFunction F_field(const ModelSpec& spec, const HelmholtzOperator& op,
                     const GridFunction& u) {
    return grad_helmholtz_inverse(op, h_field(spec, u));
}

double energy(const GridFunction& u) {
    const GridFunction ux = spectral_derivative(u);
    GridFunction density(u.grid);
    for (int j = 0; j < u.size(); ++j)
        density.values[j] =
            u.values[j] * u.values[j] + ux.values[j] * ux.values[j];
    return integrate(density);
}

GridFunction sigma_field(const Trajectory& traj, double t) {
    const Checkpoint& cp = traj.at(t);
    if (cp.t == 0.0) return h_field(traj.spec, cp.u, cp.ux);
    GridFunction out = cp.h_accum;
    for (double& v : out.values) v /= cp.t;
    return out;
}

std::pair<double, double> lambda_pm(const Trajectory& traj, double t) {
    const GridFunction sigma = sigma_pair(traj, t).sigma;
    check_boundary_decay(sigma);
    const Grid& g = sigma.grid;
    double plus = 0.0, minus = 0.0;
    for (int j = 0; j < g.point_count; ++j) {
        const double y = g.node(j);
        plus += std::exp(y) * sigma.values[j];
        minus += std::exp(-y) * sigma.values[j];
    }
    return {0.5 * g.spacing * plus, 0.5 * g.spacing * minus};
}

std::pair<GridFunction, GridFunction> epsilon_pm(const Trajectory& traj,
                                                 double t) {
    const SigmaPair s = sigma_pair(traj, t);
    check_boundary_decay(s.sigma);
    const Grid& g = s.sigma.grid;
    const int n = g.point_count;
    const double dx = g.spacing;

    // eps_plus = (P + e^{2x} Q)/2 with P(x) = int_x^L e^y sigma,
    // Q(x) = int_x^L e^{-y} sigma, accumulated inward from the decayed
    // right boundary by trapezoids with the O(dx^2) endpoint correction.
    std::vector<double> phi(n), phi_d(n), psi(n), psi_d(n);
    for (int j = 0; j < n; ++j) {
        const double y = g.node(j);
        const double e = std::exp(y);
        phi[j] = e * s.sigma.values[j];
        phi_d[j] = e * (s.sigma.values[j] + s.sigma_x.values[j]);
        psi[j] = s.sigma.values[j] / e;
        psi_d[j] = (s.sigma_x.values[j] - s.sigma.values[j]) / e;
    }

    GridFunction eps_plus(g), eps_minus(g);
    double p_acc = 0.0, q_acc = 0.0;
    for (int j = n - 1; j >= 0; --j) {
        if (j < n - 1) {
            p_acc += 0.5 * dx * (phi[j] + phi[j + 1]);
            q_acc += 0.5 * dx * (psi[j] + psi[j + 1]);
        }
        const double p = p_acc + dx * dx / 12.0 * phi_d[j];
        const double q = q_acc + dx * dx / 12.0 * psi_d[j];
        eps_plus.values[j] =
            0.5 * (p + std::exp(2.0 * g.node(j)) * q);
    }
    p_acc = q_acc = 0.0;
    for (int j = 0; j < n; ++j) {
        if (j > 0) {
            p_acc += 0.5 * dx * (psi[j] + psi[j - 1]);
            q_acc += 0.5 * dx * (phi[j] + phi[j - 1]);
        }
        const double p = p_acc - dx * dx / 12.0 * psi_d[j];
        const double q = q_acc - dx * dx / 12.0 * phi_d[j];
        eps_minus.values[j] =
            0.5 * (p + std::exp(-2.0 * g.node(j)) * q);
    }
    // floor quadrature roundoff: both fields are nonnegative in exact
    // arithmetic, so tiny negatives are noise
    const double floor_p = 1e-9 * max_abs(eps_plus);
    const double floor_m = 1e-9 * max_abs(eps_minus);
    for (int j = 0; j < n; ++j) {
        if (eps_plus.values[j] < 0.0 && eps_plus.values[j] > -floor_p)
            eps_plus.values[j] = 0.0;
        if (eps_minus.values[j] < 0.0 && eps_minus.values[j] > -floor_m)
            eps_minus.values[j] = 0.0;
    }
    require_finite(eps_plus, "epsilon_pm");
    require_finite(eps_minus, "epsilon_pm");
    return {std::move(eps_plus), std::move(eps_minus)};
}

ProfileReport profile_decompose(const Trajectory& traj, double t,
                                double support_radius) {
    if (!(t > 0.0))
        throw std::invalid_argument("profile_decompose: t must be positive");
    const Checkpoint& cp = traj.at(t);
    const GridFunction& u0 = traj.initial_datum();
    const Grid& g = cp.u.grid;

    ProfileReport report;
    report.t = cp.t;
    std::tie(report.lambda_plus, report.lambda_minus) = lambda_pm(traj, t);
    std::tie(report.epsilon_plus, report.epsilon_minus) = epsilon_pm(traj, t);

    report.r_field = cp.r_accum;
    for (double& v : report.r_field.values) v = -v;

    report.identity_residual = GridFunction(g);
    for (int j = 0; j < g.point_count; ++j) {
        const double x = g.node(j);
        const double tail =
            x >= 0.0 ? cp.t * std::exp(-x) *
                           (report.lambda_plus - report.epsilon_plus.values[j])
                     : -cp.t * std::exp(x) *
                           (report.lambda_minus -
                            report.epsilon_minus.values[j]);
        report.identity_residual.values[j] =
            cp.u.values[j] - u0.values[j] - report.r_field.values[j] - tail;
    }
    report.residual_max = max_abs(report.identity_residual);

    // u e^x/t against the moment profile, in the magnitude-weighted L2
    // sense (weight e^{-x}, so the fit is not drowned by the e^x-amplified
    // roundoff floor of u deep in the tail).
    report.tail_fit.window_lo = support_radius + 5.0;
    report.tail_fit.window_hi = g.half_length - 10.0;
    double num = 0.0, den = 0.0;
    for (int j = 0; j < g.point_count; ++j) {
        const double x = g.node(j);
        if (x < report.tail_fit.window_lo || x > report.tail_fit.window_hi)
            continue;
        const double model =
            cp.t * std::exp(-x) *
            (report.lambda_plus - report.epsilon_plus.values[j]);
        num += (cp.u.values[j] - model) * (cp.u.values[j] - model);
        den += model * model;
    }
    report.tail_fit.relative_error =
        den > 0.0 ? std::sqrt(num / den) : std::sqrt(num);
    return report;
}

DecayEnvelope decay_envelope(const GridFunction& u, const GridFunction& ux,
                             double d) {
    if (!(d > 0.5))
        throw std::invalid_argument("decay_envelope: requires d > 1/2");
    DecayEnvelope env;
    env.d = d;
    env.envelope_values = GridFunction(u.grid);
    for (int j = 0; j < u.size(); ++j) {
        const double mag = std::abs(u.values[j]) + std::abs(ux.values[j]);
        if (mag < 1e-250) continue;
        const double ax = std::abs(u.grid.node(j));
        env.envelope_values.values[j] =
            std::exp(0.5 * ax) * std::sqrt(1.0 + ax) *
            std::pow(std::log1p(ax), d) * mag;
        env.sup_value = std::max(env.sup_value, env.envelope_values.values[j]);
    }
    require_finite(env.envelope_values, "decay_envelope");
    return env;
}

std::vector<WeightedSeriesEntry> weighted_persistence(const Trajectory& traj,
                                                      const Weight& w,
                                                      double p) {
    auto weighted_norm = [&](const GridFunction& u, const GridFunction& ux,
                             bool half) {
        GridFunction wu(u.grid), wux(u.grid);
        for (int j = 0; j < u.size(); ++j) {
            double phi = w.phi(u.grid.node(j));
            if (half) phi = std::sqrt(phi);
            wu.values[j] = phi * u.values[j];
            wux.values[j] = phi * ux.values[j];
        }
        const double pp = half ? 2.0 : p;
        return lp_norm(wu, pp) + lp_norm(wux, pp);
    };

    std::vector<WeightedSeriesEntry> series;
    double base = 0.0;
    double kappa = 0.0;
    for (const Checkpoint& cp : traj.checkpoints) {
        WeightedSeriesEntry entry;
        entry.t = cp.t;
        entry.norm = weighted_norm(cp.u, cp.ux, false);
        entry.half_l2 = weighted_norm(cp.u, cp.ux, true);
        if (series.empty()) {
            base = entry.norm;
            if (!std::isfinite(base))
                throw std::runtime_error(
                    "weighted_persistence: weighted datum norm not finite");
        }
        entry.ratio = base > 0.0 ? entry.norm / base : 1.0;
        kappa = std::max(kappa, entry.ratio);
        entry.kappa_hat = kappa;
        series.push_back(entry);
    }
    return series;
}

BoundConstantM bound_constant_M(const Trajectory& traj) {
    if (traj.checkpoints.empty())
        throw std::invalid_argument("bound_constant_M: empty trajectory");
    BoundConstantM m;
    for (const Checkpoint& cp : traj.checkpoints) {
        m.sup_u = std::max(m.sup_u, max_abs(cp.u));
        m.sup_ux = std::max(m.sup_ux, max_abs(cp.ux));
        for (double v : cp.u.values) {
            m.sup_f_u = std::max(m.sup_f_u, std::abs(traj.spec.f(v)));
            m.sup_fp_u = std::max(m.sup_fp_u, std::abs(traj.spec.f_prime(v)));
            m.sup_fpp_u =
                std::max(m.sup_fpp_u, std::abs(traj.spec.f_second(v)));
        }
    }
    return m;
}

}  // namespace rodwave
