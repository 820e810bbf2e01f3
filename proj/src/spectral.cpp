#include "rodwave/spectral.hpp"

#include <fftw3.h>

#include <cstring>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <stdexcept>

namespace rodwave::spectral {

namespace {

// One set of plans + scratch per transform size. FFTW plan execution on the
// plan's own arrays is not thread safe, so each workspace carries a mutex.
struct Workspace {
    int n;
    double* real;
    fftw_complex* cplx;
    fftw_plan fwd;
    fftw_plan inv;
    std::mutex mutex;

    explicit Workspace(int n_) : n(n_) {
        real = fftw_alloc_real(n);
        cplx = fftw_alloc_complex(n / 2 + 1);
        fwd = fftw_plan_dft_r2c_1d(n, real, cplx, FFTW_ESTIMATE);
        inv = fftw_plan_dft_c2r_1d(n, cplx, real, FFTW_ESTIMATE);
    }
    ~Workspace() {
        fftw_destroy_plan(inv);
        fftw_destroy_plan(fwd);
        fftw_free(cplx);
        fftw_free(real);
    }
};

Workspace& workspace(int n) {
    static std::map<int, std::unique_ptr<Workspace>> cache;
    static std::mutex cache_mutex;
    std::lock_guard lock(cache_mutex);
    auto& slot = cache[n];
    if (!slot) slot = std::make_unique<Workspace>(n);
    return *slot;
}

}  // namespace

double wavenumber(const Grid& g, int m) {
    return std::numbers::pi * m / g.half_length;
}

std::vector<Complex> forward(const std::vector<double>& x) {
    const int n = static_cast<int>(x.size());
    auto& ws = workspace(n);
    std::lock_guard lock(ws.mutex);
    std::memcpy(ws.real, x.data(), n * sizeof(double));
    fftw_execute(ws.fwd);
    std::vector<Complex> out(n / 2 + 1);
    for (int m = 0; m <= n / 2; ++m)
        out[m] = Complex(ws.cplx[m][0], ws.cplx[m][1]);
    return out;
}

std::vector<double> inverse(std::vector<Complex> coeffs, int n) {
    if (static_cast<int>(coeffs.size()) != n / 2 + 1)
        throw std::invalid_argument("spectral::inverse: coefficient count");
    auto& ws = workspace(n);
    std::lock_guard lock(ws.mutex);
    for (int m = 0; m <= n / 2; ++m) {
        ws.cplx[m][0] = coeffs[m].real();
        ws.cplx[m][1] = coeffs[m].imag();
    }
    fftw_execute(ws.inv);
    std::vector<double> out(n);
    const double scale = 1.0 / n;
    for (int j = 0; j < n; ++j) out[j] = ws.real[j] * scale;
    return out;
}

std::vector<double> inverse_padded(const std::vector<Complex>& coeffs, int n,
                                   int n_fine) {
    if (n_fine % n != 0 || n_fine <= n)
        throw std::invalid_argument("spectral::inverse_padded: sizes");
    std::vector<Complex> fine(n_fine / 2 + 1, Complex(0.0, 0.0));
    for (int m = 0; m < n / 2; ++m) fine[m] = coeffs[m];
    // Nyquist mode is shared between +-k_{n/2}; halving it reproduces the
    // coarse samples exactly at coincident nodes.
    fine[n / 2] = 0.5 * coeffs[n / 2];
    auto vals = inverse(std::move(fine), n_fine);
    const double rescale = static_cast<double>(n_fine) / n;
    for (auto& v : vals) v *= rescale;
    return vals;
}

std::vector<Complex> forward_truncated(const std::vector<double>& fine, int n) {
    const int n_fine = static_cast<int>(fine.size());
    if (n_fine % n != 0 || n_fine < n)
        throw std::invalid_argument("spectral::forward_truncated: sizes");
    auto coeffs = forward(fine);
    std::vector<Complex> out(n / 2 + 1, Complex(0.0, 0.0));
    const double rescale = static_cast<double>(n) / n_fine;
    for (int m = 0; m < n / 2; ++m) out[m] = coeffs[m] * rescale;
    return out;
}

}  // namespace rodwave::spectral
