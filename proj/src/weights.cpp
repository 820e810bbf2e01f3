#include "rodwave/weights.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "json.hpp"

namespace rodwave {

namespace {

double sign(double x) { return x > 0.0 ? 1.0 : (x < 0.0 ? -1.0 : 0.0); }

// Simpson on [0, 120] doubled; step chosen so the kink at 0 is a node.
double even_kernel_l1(const std::function<double(double)>& v) {
    constexpr double hi = 120.0;
    constexpr int n = 1 << 18;
    const double h = hi / n;
    double acc = std::exp(-0.0) * v(0.0) + std::exp(-hi) * v(hi);
    for (int i = 1; i < n; ++i)
        acc += (i % 2 ? 4.0 : 2.0) * std::exp(-i * h) * v(i * h);
    return 2.0 * acc * h / 3.0;
}

}  // namespace

Weight catalog(const std::string& name, std::optional<double> param) {
    Weight w;
    w.name = name;
    if (name == "exp_half") {
        w.phi = [](double x) { return std::exp(0.5 * std::abs(x)); };
        w.phi_prime = [](double x) {
            return 0.5 * sign(x) * std::exp(0.5 * std::abs(x));
        };
        w.log_derivative_bound = 0.5;
        w.kernel_v_l1 = 4.0;
    } else if (name == "exp_a") {
        if (!param) throw std::invalid_argument("catalog(exp_a): needs a");
        const double a = *param;
        if (!(a > 0.0 && a < 1.0))
            throw std::invalid_argument(
                "catalog(exp_a): a outside (0,1) breaks kernel integrability");
        w.phi = [a](double x) { return std::exp(a * std::abs(x)); };
        w.phi_prime = [a](double x) {
            return a * sign(x) * std::exp(a * std::abs(x));
        };
        w.log_derivative_bound = a;
        w.kernel_v_l1 = 2.0 / (1.0 - a);
    } else if (name == "poly_b") {
        if (!param) throw std::invalid_argument("catalog(poly_b): needs b");
        const double b = *param;
        if (!(b >= 0.0))
            throw std::invalid_argument("catalog(poly_b): b must be >= 0");
        w.phi = [b](double x) { return std::pow(1.0 + std::abs(x), b); };
        w.phi_prime = [b](double x) {
            return b * sign(x) * std::pow(1.0 + std::abs(x), b - 1.0);
        };
        w.log_derivative_bound = b;
        w.kernel_v_l1 = even_kernel_l1(w.phi);
    } else if (name == "paper_envelope_d") {
        if (!param)
            throw std::invalid_argument("catalog(paper_envelope_d): needs d");
        const double d = *param;
        if (!(d > 0.5))
            throw std::invalid_argument(
                "catalog(paper_envelope_d): requires d > 1/2");
        // ln(e+|x|) >= 1 in place of ln(1+|x|), which vanishes at 0.
        w.phi = [d](double x) {
            const double ax = std::abs(x);
            return std::exp(0.5 * ax) * std::sqrt(1.0 + ax) *
                   std::pow(std::log(std::exp(1.0) + ax), d);
        };
        w.phi_prime = [d, phi = w.phi](double x) {
            const double ax = std::abs(x);
            const double e = std::exp(1.0);
            return sign(x) * phi(x) *
                   (0.5 + 0.5 / (1.0 + ax) +
                    d / ((e + ax) * std::log(e + ax)));
        };
        w.log_derivative_bound = 1.0 + d / std::exp(1.0);
        w.kernel_v_l1 = even_kernel_l1(w.phi);
    } else {
        throw std::invalid_argument("catalog: unknown weight " + name);
    }
    w.v = w.phi;
    w.c0 = 1.0;
    w.inf_v = 1.0;
    return w;
}

Weight truncate(const Weight& w, double cap) {
    if (!(cap > 0.0)) throw std::invalid_argument("truncate: cap must be > 0");
    Weight out = w;
    out.name = w.name + "_trunc";
    out.phi = [phi = w.phi, cap](double x) { return std::min(phi(x), cap); };
    out.phi_prime = [phi = w.phi, dphi = w.phi_prime, cap](double x) {
        return phi(x) < cap ? dphi(x) : 0.0;
    };
    out.c0 = std::max(w.c0, 1.0 / w.inf_v);
    return out;
}

SubmultiplicativeReport check_submultiplicative(
    const std::function<double(double)>& v) {
    SubmultiplicativeReport report;
    constexpr int n = 201;
    for (int i = 0; i < n; ++i) {
        const double x = -40.0 + 80.0 * i / (n - 1);
        for (int j = 0; j < n; ++j) {
            const double y = -40.0 + 80.0 * j / (n - 1);
            const double ratio = v(x + y) / (v(x) * v(y));
            if (ratio > report.worst_ratio) {
                report.worst_ratio = ratio;
                report.witness_x = x;
                report.witness_y = y;
            }
        }
    }
    report.ok = report.worst_ratio <= 1.0 + 1e-9;
    return report;
}

double estimate_moderate_constant(const std::function<double(double)>& phi,
                                  const std::function<double(double)>& v) {
    double worst = 0.0;
    constexpr int n = 201;
    for (int i = 0; i < n; ++i) {
        const double x = -40.0 + 80.0 * i / (n - 1);
        for (int j = 0; j < n; ++j) {
            const double y = -40.0 + 80.0 * j / (n - 1);
            worst = std::max(worst, phi(x + y) / (v(x) * phi(y)));
        }
    }
    return worst;
}

AdmissibilityReport check_admissible(const Weight& w) {
    AdmissibilityReport report;
    report.name = w.name;
    report.a_bound = w.log_derivative_bound;
    report.c0 = w.c0;

    constexpr double step = 1e-3;
    constexpr double range = 40.0;

    report.log_derivative_ok = true;
    for (long i = 0; i <= std::lround(2.0 * range / step); ++i) {
        const double x = -range + i * step;
        const double phi = w.phi(x);
        double dphi;
        double slack = 1e-9;
        if (std::abs(x) < step) {
            // one-sided quotient pointing away from the |x| kink; the
            // quotient carries an O(h) curvature term, hence the wider slack
            const double h = x >= 0.0 ? 1e-6 : -1e-6;
            dphi = (w.phi(x + h) - phi) / h;
            slack = 1e-5;
        } else {
            dphi = w.phi_prime(x);
        }
        if (std::abs(dphi) >
            w.log_derivative_bound * std::abs(phi) * (1.0 + slack) + 1e-9) {
            report.log_derivative_ok = false;
            report.failures.push_back({"log_derivative", x, 0.0});
            break;
        }
    }

    auto sub = check_submultiplicative(w.v);
    report.submultiplicative_ok = sub.ok;
    if (!sub.ok)
        report.failures.push_back(
            {"submultiplicative", sub.witness_x, sub.witness_y});

    double inf_v = w.v(0.0);
    for (long i = 0; i <= std::lround(2.0 * range / step); ++i)
        inf_v = std::min(inf_v, w.v(-range + i * step));
    report.inf_v = inf_v;
    report.inf_v_positive = inf_v > 0.0;
    if (!report.inf_v_positive)
        report.failures.push_back({"inf_v", 0.0, 0.0});

    // Integrability of e^{-|x|} v: the integrand must be decaying at the
    // far sample before quadrature ranges can stabilize.
    auto kernel = [&](double x) { return std::exp(-std::abs(x)) * w.v(x); };
    const double far = std::max(kernel(80.0), kernel(-80.0));
    const double near = std::max(kernel(40.0), kernel(-40.0));
    report.kernel_integrable = far < near || far < 1e-300;
    if (!report.kernel_integrable)
        report.failures.push_back({"kernel_integrable", 80.0, 0.0});

    report.kernel_v_l1 =
        w.kernel_v_l1 > 0.0 ? w.kernel_v_l1 : even_kernel_l1(w.v);
    double l2_sq = 0.0, linf = 0.0;
    for (long i = 0; i <= std::lround(2.0 * 80.0 / step); ++i) {
        const double x = -80.0 + i * step;
        const double m = kernel(x);
        l2_sq += m * m * step;
        linf = std::max(linf, m);
    }
    report.kernel_v_l2 = std::sqrt(l2_sq);
    report.kernel_v_linf = linf;

    report.admissible = report.log_derivative_ok &&
                        report.submultiplicative_ok &&
                        report.inf_v_positive && report.kernel_integrable;
    return report;
}

std::string AdmissibilityReport::to_json() const {
    nlohmann::json j;
    j["name"] = name;
    j["admissible"] = admissible;
    j["A"] = a_bound;
    j["c0"] = c0;
    j["inf_v"] = inf_v;
    j["kernel_v_l1"] = kernel_v_l1;
    j["kernel_v_l2"] = kernel_v_l2;
    j["kernel_v_linf"] = kernel_v_linf;
    j["failures"] = nlohmann::json::array();
    for (const auto& f : failures)
        j["failures"].push_back({{"check", f.check},
                                 {"witness_x", f.witness_x},
                                 {"witness_y", f.witness_y}});
    return j.dump(2);
}

YoungReport young_check(const GridFunction& f, const GridFunction& g,
                        const Weight& w, double p) {
    if (!(f.grid == g.grid))
        throw std::invalid_argument("young_check: grid mismatch");
    const int n = f.size();
    const double dx = f.grid.spacing;

    // node(i) - node(j) = (i - j) dx; the difference index needs the +n/2
    // shift because node(k) = -L + k dx
    GridFunction conv(f.grid);
    for (int i = 0; i < n; ++i) {
        double acc = 0.0;
        for (int j = 0; j < n; ++j)
            acc += f.values[(i - j + n / 2 + 2 * n) % n] * g.values[j];
        conv.values[i] = acc * dx;
    }

    GridFunction conv_phi(f.grid), f_v(f.grid), g_phi(f.grid);
    for (int i = 0; i < n; ++i) {
        const double x = f.grid.node(i);
        conv_phi.values[i] = conv.values[i] * w.phi(x);
        f_v.values[i] = f.values[i] * w.v(x);
        g_phi.values[i] = g.values[i] * w.phi(x);
    }

    YoungReport report;
    report.lhs = lp_norm(conv_phi, p);
    report.rhs = w.c0 * lp_norm(f_v, 1.0) * lp_norm(g_phi, p);
    report.ok = report.lhs <= report.rhs * (1.0 + 1e-6);
    return report;
}

}  // namespace rodwave
