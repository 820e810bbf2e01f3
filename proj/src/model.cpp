#include "rodwave/model.hpp"

#include <cmath>
#include <stdexcept>

namespace rodwave {

namespace {

double require_param(const std::map<std::string, double>& params,
                     const std::string& preset, const std::string& key) {
    auto it = params.find(key);
    if (it == params.end())
        throw std::invalid_argument("build_preset(" + preset +
                                    "): missing parameter " + key);
    return it->second;
}

}  // namespace

ModelSpec build_preset(const std::string& name,
                       const std::map<std::string, double>& params) {
    ModelSpec spec;
    spec.name = name;
    spec.parameters = params;
    if (name == "bbm") {
        spec.f = [](double) { return 0.0; };
        spec.f_prime = [](double) { return 0.0; };
        spec.f_second = [](double) { return 0.0; };
        spec.g = [](double u) { return 0.5 * u * u; };
        spec.g_quadratic_constant = 0.5;
        spec.f_prime_vanishes_at_zero = true;
    } else if (name == "dai") {
        const double gamma = require_param(params, name, "gamma");
        spec.f = [gamma](double u) { return 0.5 * gamma * u * u; };
        spec.f_prime = [gamma](double u) { return gamma * u; };
        spec.f_second = [gamma](double) { return gamma; };
        spec.g = [gamma](double u) { return 0.5 * (3.0 - gamma) * u * u; };
        spec.g_quadratic_constant = 0.5 * (3.0 - gamma);
        spec.f_prime_vanishes_at_zero = true;
    } else if (name == "dgh_reduced") {
        const double gh = require_param(params, name, "Gamma_hat");
        spec.f = [gh](double u) { return u * u + gh * u; };
        spec.f_prime = [gh](double u) { return 2.0 * u + gh; };
        spec.f_second = [](double) { return 2.0; };
        spec.g = [](double u) { return u * u; };
        spec.g_quadratic_constant = 1.0;
        spec.f_prime_vanishes_at_zero = gh == 0.0;
    } else if (name == "rch") {
        const double beta = require_param(params, name, "beta");
        const double gamma = require_param(params, name, "gamma");
        const double Gamma = require_param(params, name, "Gamma");
        spec.f = [Gamma](double u) { return 0.5 * u * u + Gamma * u; };
        spec.f_prime = [Gamma](double u) { return u + Gamma; };
        spec.f_second = [](double) { return 1.0; };
        spec.g = [beta, gamma](double u) {
            return (1.0 + beta / 3.0 * u + gamma / 4.0 * u * u) * u * u;
        };
        spec.f_prime_vanishes_at_zero = Gamma == 0.0;
    } else {
        throw std::invalid_argument("build_preset: unknown preset " + name);
    }
    return spec;
}

HypothesisReport validate_hypotheses(const ModelSpec& spec, double amplitude) {
    if (!(amplitude > 0.0))
        throw std::invalid_argument("validate_hypotheses: amplitude <= 0");
    constexpr int kSamples = 2049;
    constexpr double kZeroBand = 1e-12;

    HypothesisReport report;
    report.amplitude = amplitude;
    report.h2_ok = std::abs(spec.f(0.0)) <= kZeroBand;
    if (!report.h2_ok) report.h2_witness = Witness{0.0, spec.f(0.0)};
    report.h3_ok = true;
    report.quadratic_bound_ok = true;
    report.f_prime_zero_ok = std::abs(spec.f_prime(0.0)) <= kZeroBand;

    double c_max = 0.0;
    for (int i = 0; i < kSamples; ++i) {
        const double x = -amplitude + 2.0 * amplitude * i / (kSamples - 1);
        const double fpp = spec.f_second(x);
        if (report.h2_ok && fpp < -kZeroBand) {
            report.h2_ok = false;
            report.h2_witness = Witness{x, fpp};
        }
        const double gx = spec.g(x);
        if (report.h3_ok &&
            (gx < -kZeroBand || (std::abs(x) > kZeroBand && gx <= 0.0))) {
            report.h3_ok = false;
            report.h3_witness = Witness{x, gx};
        }
        if (std::abs(x) > kZeroBand) {
            const double ratio = gx / (x * x);
            if (!std::isfinite(ratio) || ratio < 0.0)
                report.quadratic_bound_ok = false;
            else
                c_max = std::max(c_max, ratio);
        }
    }
    report.estimated_c = c_max;
    if (!report.h3_ok) report.quadratic_bound_ok = false;
    return report;
}

GridFunction rhs(const ModelSpec& spec, const HelmholtzOperator& op,
                 const GridFunction& u) {
    if (!(u.grid == op.grid))
        throw std::invalid_argument("rhs: grid mismatch");
    const int n = u.size();
    const int n_fine = 2 * n;

    auto u_hat = spectral::forward(u.values);
    auto ux_hat = u_hat;
    for (int m = 0; m < n / 2; ++m)
        ux_hat[m] *= spectral::Complex(0.0, spectral::wavenumber(u.grid, m));
    ux_hat[n / 2] = 0.0;

    const auto fine_u = spectral::inverse_padded(u_hat, n, n_fine);
    const auto fine_ux = spectral::inverse_padded(ux_hat, n, n_fine);

    std::vector<double> fine_transport(n_fine), fine_h(n_fine);
    for (int j = 0; j < n_fine; ++j) {
        const double uj = fine_u[j];
        const double uxj = fine_ux[j];
        fine_transport[j] = spec.f_prime(uj) * uxj;
        fine_h[j] = spec.g(uj) + 0.5 * spec.f_second(uj) * uxj * uxj;
    }

    auto transport_hat = spectral::forward_truncated(fine_transport, n);
    auto h_hat = spectral::forward_truncated(fine_h, n);
    for (int m = 0; m <= n / 2; ++m)
        transport_hat[m] = -transport_hat[m] - op.derivative_symbol[m] * h_hat[m];

    GridFunction out(u.grid, spectral::inverse(std::move(transport_hat), n));
    require_finite(out, "rhs");
    return out;
}

std::pair<ModelSpec, double> galilean_reduce_dgh(double alpha, double Gamma) {
    auto spec = build_preset("dgh_reduced", {{"Gamma_hat", Gamma - alpha}});
    return {std::move(spec), alpha};
}

}  // namespace rodwave
