#ifndef RODWAVE_GRID_HPP
#define RODWAVE_GRID_HPP

#include <string>
#include <vector>

namespace rodwave {

/** Uniform periodic grid on [-L, L) with nodes x_j = -L + j*dx, dx = 2L/N. */
struct Grid {
    double half_length = 0.0;
    int point_count = 0;
    double spacing = 0.0;

    double node(int j) const { return -half_length + j * spacing; }
    bool operator==(const Grid&) const = default;
};

// Rejects odd N, N < 16, and nonpositive L.
Grid make_grid(double half_length, int point_count);

/** Sampled real field on a Grid. Values are kept finite by every public
    operation; a NaN/Inf result aborts with the offending location. */
struct GridFunction {
    Grid grid;
    std::vector<double> values;

    GridFunction() = default;
    explicit GridFunction(const Grid& g) : grid(g), values(g.point_count, 0.0) {}
    GridFunction(const Grid& g, std::vector<double> v);

    int size() const { return grid.point_count; }
    double& operator[](int i) { return values[i]; }
    double operator[](int i) const { return values[i]; }
};

template <typename F>
GridFunction sample(const Grid& g, F&& f) {
    GridFunction u(g);
    for (int j = 0; j < g.point_count; ++j) u.values[j] = f(g.node(j));
    return u;
}

// d/dx via the Fourier multiplier ik; exact for band-limited input.
GridFunction spectral_derivative(const GridFunction& u);

// Periodic rectangle rule, dx * sum(values).
double integrate(const GridFunction& u);

// Discrete L^p norm, p in [1, inf]. p = inf returns the grid maximum of |u|.
double lp_norm(const GridFunction& u, double p);

double max_abs(const GridFunction& u);

// Throws std::runtime_error naming `where` if any value is NaN/Inf.
void require_finite(const GridFunction& u, const char* where);

// CSV with mandatory "x,value" header, 17 significant digits.
void write_csv(const GridFunction& u, const std::string& path);
GridFunction read_csv(const Grid& g, const std::string& path);

}  // namespace rodwave

#endif
