#ifndef RODWAVE_NONLOCAL_HPP
#define RODWAVE_NONLOCAL_HPP

#include <vector>

#include "rodwave/grid.hpp"
#include "rodwave/spectral.hpp"

namespace rodwave {

/** The inverse Helmholtz operator (1 - d^2/dx^2)^{-1} on the periodic grid,
    i.e. convolution with the periodized kernel cosh(L-|x|)/(2 sinh L), and
    its derivative. Discretized exactly through the Fourier symbols
    1/(1+k^2) and ik/(1+k^2). Immutable; safe for concurrent use. */
struct HelmholtzOperator {
    Grid grid;
    std::vector<double> symbol;                        // 1/(1+k^2)
    std::vector<spectral::Complex> derivative_symbol;  // ik/(1+k^2)

    explicit HelmholtzOperator(const Grid& g);
};

// w with (1 - d^2/dx^2) w = h, exact in the discrete Fourier sense.
GridFunction helmholtz_inverse(const HelmholtzOperator& op,
                               const GridFunction& h);

// d/dx of the above, through the derivative symbol. The kernel's sign
// discontinuity at 0 is never sampled pointwise.
GridFunction grad_helmholtz_inverse(const HelmholtzOperator& op,
                                    const GridFunction& h);

// Independent O(N^2) oracle: direct quadrature against the periodized
// kernel, with Euler-Maclaurin corrections for the kernel kink so it
// matches the spectral route on smooth data.
GridFunction convolve_oracle(const Grid& g, const GridFunction& h);

}  // namespace rodwave

#endif
