#include "rodwave/grid.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "rodwave/spectral.hpp"

namespace rodwave {

Grid make_grid(double half_length, int point_count) {
    if (!(half_length > 0.0))
        throw std::invalid_argument("make_grid: half length must be positive");
    if (point_count % 2 != 0)
        throw std::invalid_argument("make_grid: odd point count");
    if (point_count < 16)
        throw std::invalid_argument("make_grid: point count must be >= 16");
    return Grid{half_length, point_count, 2.0 * half_length / point_count};
}

GridFunction::GridFunction(const Grid& g, std::vector<double> v)
    : grid(g), values(std::move(v)) {
    if (static_cast<int>(values.size()) != g.point_count)
        throw std::invalid_argument("GridFunction: length mismatch");
}

void require_finite(const GridFunction& u, const char* where) {
    for (int j = 0; j < u.size(); ++j)
        if (!std::isfinite(u.values[j])) {
            std::ostringstream msg;
            msg << where << ": non-finite value at x = " << u.grid.node(j)
                << " (index " << j << ")";
            throw std::runtime_error(msg.str());
        }
}

GridFunction spectral_derivative(const GridFunction& u) {
    const int n = u.size();
    auto coeffs = spectral::forward(u.values);
    for (int m = 0; m < n / 2; ++m)
        coeffs[m] *= spectral::Complex(0.0, spectral::wavenumber(u.grid, m));
    coeffs[n / 2] = 0.0;  // Nyquist has no well-defined odd derivative
    GridFunction out(u.grid, spectral::inverse(std::move(coeffs), n));
    require_finite(out, "spectral_derivative");
    return out;
}

double integrate(const GridFunction& u) {
    double acc = 0.0;
    for (double v : u.values) acc += v;
    return acc * u.grid.spacing;
}

double max_abs(const GridFunction& u) {
    double m = 0.0;
    for (double v : u.values) m = std::max(m, std::abs(v));
    return m;
}

double lp_norm(const GridFunction& u, double p) {
    if (std::isinf(p)) return max_abs(u);
    if (!(p >= 1.0)) throw std::invalid_argument("lp_norm: p must be >= 1");
    const double peak = max_abs(u);
    if (peak == 0.0) return 0.0;
    double acc = 0.0;
    for (double v : u.values) acc += std::pow(std::abs(v) / peak, p);
    return peak * std::pow(acc * u.grid.spacing, 1.0 / p);
}

void write_csv(const GridFunction& u, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("write_csv: cannot open " + path);
    out << "x,value\n";
    char line[80];
    for (int j = 0; j < u.size(); ++j) {
        std::snprintf(line, sizeof line, "%.17g,%.17g\n", u.grid.node(j),
                      u.values[j]);
        out << line;
    }
}

GridFunction read_csv(const Grid& g, const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("read_csv: cannot open " + path);
    std::string line;
    if (!std::getline(in, line) || line.rfind("x,value", 0) != 0)
        throw std::runtime_error("read_csv: missing x,value header in " + path);
    GridFunction u(g);
    for (int j = 0; j < g.point_count; ++j) {
        if (!std::getline(in, line))
            throw std::runtime_error("read_csv: truncated file " + path);
        const auto comma = line.find(',');
        if (comma == std::string::npos)
            throw std::runtime_error("read_csv: malformed row in " + path);
        // strtod instead of stod: subnormal values must round-trip
        const char* begin = line.c_str() + comma + 1;
        char* end = nullptr;
        const double v = std::strtod(begin, &end);
        if (end == begin)
            throw std::runtime_error("read_csv: malformed row in " + path);
        u.values[j] = v;
    }
    require_finite(u, "read_csv");
    return u;
}

}  // namespace rodwave
