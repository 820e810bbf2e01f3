#ifndef RODWAVE_SPECTRAL_HPP
#define RODWAVE_SPECTRAL_HPP

#include <complex>
#include <vector>

#include "rodwave/grid.hpp"

// Thin FFTW wrapper with cached plans per transform size. Coefficients use
// the FFTW r2c half-complex layout (size n/2+1, unnormalized forward sums);
// inverse transforms divide by the coarse length so a forward/inverse pair
// is the identity.
namespace rodwave::spectral {

using Complex = std::complex<double>;

// k_m = pi*m/L for half-complex index m.
double wavenumber(const Grid& g, int m);

std::vector<Complex> forward(const std::vector<double>& x);
std::vector<double> inverse(std::vector<Complex> coeffs, int n);

// Evaluate the degree-n trigonometric interpolant on a finer grid of
// n_fine points (n_fine a multiple of n). Used for dealiased products.
std::vector<double> inverse_padded(const std::vector<Complex>& coeffs, int n,
                                   int n_fine);

// Forward transform of fine-grid samples truncated back to n coarse modes
// (Nyquist zeroed), with coefficients scaled as if computed on the coarse
// grid.
std::vector<Complex> forward_truncated(const std::vector<double>& fine, int n);

}  // namespace rodwave::spectral

#endif
