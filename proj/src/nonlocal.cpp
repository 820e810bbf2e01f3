#include "rodwave/nonlocal.hpp"

#include <cmath>
#include <stdexcept>

namespace rodwave {

namespace {

void check_grid(const HelmholtzOperator& op, const GridFunction& h) {
    if (!(h.grid == op.grid))
        throw std::invalid_argument("HelmholtzOperator: grid mismatch");
}

}  // namespace

HelmholtzOperator::HelmholtzOperator(const Grid& g) : grid(g) {
    const int n = g.point_count;
    symbol.resize(n / 2 + 1);
    derivative_symbol.resize(n / 2 + 1);
    for (int m = 0; m <= n / 2; ++m) {
        const double k = spectral::wavenumber(g, m);
        symbol[m] = 1.0 / (1.0 + k * k);
        derivative_symbol[m] = spectral::Complex(0.0, k / (1.0 + k * k));
    }
    derivative_symbol[n / 2] = 0.0;
}

GridFunction helmholtz_inverse(const HelmholtzOperator& op,
                               const GridFunction& h) {
    check_grid(op, h);
    const int n = h.size();
    auto coeffs = spectral::forward(h.values);
    for (int m = 0; m <= n / 2; ++m) coeffs[m] *= op.symbol[m];
    GridFunction out(h.grid, spectral::inverse(std::move(coeffs), n));
    require_finite(out, "helmholtz_inverse");
    return out;
}

GridFunction grad_helmholtz_inverse(const HelmholtzOperator& op,
                                    const GridFunction& h) {
    check_grid(op, h);
    const int n = h.size();
    auto coeffs = spectral::forward(h.values);
    for (int m = 0; m <= n / 2; ++m) coeffs[m] *= op.derivative_symbol[m];
    GridFunction out(h.grid, spectral::inverse(std::move(coeffs), n));
    require_finite(out, "grad_helmholtz_inverse");
    return out;
}

GridFunction convolve_oracle(const Grid& g, const GridFunction& h) {
    if (!(h.grid == g))
        throw std::invalid_argument("convolve_oracle: grid mismatch");
    const int n = g.point_count;
    const double L = g.half_length;
    const double dx = g.spacing;

    // Periodized kernel cosh(L-|z|)/(2 sinh L), written exp-safe, tabulated
    // by wrapped node distance.
    std::vector<double> kernel(n);
    const double denom = 2.0 * (1.0 - std::exp(-2.0 * L));
    for (int d = 0; d < n; ++d) {
        const double z = std::min(d, n - d) * dx;
        kernel[d] = (std::exp(-z) + std::exp(z - 2.0 * L)) / denom;
    }

    GridFunction w(g);
    for (int i = 0; i < n; ++i) {
        double acc = 0.0;
        for (int j = 0; j < n; ++j) acc += kernel[(i - j + n) % n] * h.values[j];
        w.values[i] = acc * dx;
    }

    // The integrand G(x_i - y) h(y) has a derivative jump at y = x_i, so the
    // plain rectangle sum is only O(dx^2) accurate. The Euler-Maclaurin
    // corrections for a kink sitting on a node restore smooth-data accuracy:
    //   integral = sum - dx^2 h_i / 12 + dx^4 (3 h_i'' + h_i) / 720 + O(dx^6).
    for (int i = 0; i < n; ++i) {
        const double hi = h.values[i];
        const double hpp = (h.values[(i + 1) % n] - 2.0 * hi +
                            h.values[(i - 1 + n) % n]) /
                           (dx * dx);
        w.values[i] += -dx * dx * hi / 12.0 +
                       dx * dx * dx * dx * (3.0 * hpp + hi) / 720.0;
    }
    require_finite(w, "convolve_oracle");
    return w;
}

}  // namespace rodwave
