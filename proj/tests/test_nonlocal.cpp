#include <cmath>

#include "doctest.h"
#include "oracles.hpp"
#include "rodwave/nonlocal.hpp"

using namespace rodwave;

TEST_CASE("symbol structure") {
    const Grid g = make_grid(30.0, 256);
    const HelmholtzOperator op(g);
    CHECK(op.symbol[0] == 1.0);
    for (double s : op.symbol) {
        CHECK(s > 0.0);
        CHECK(s <= 1.0);
    }
    for (const auto& d : op.derivative_symbol) CHECK(d.real() == 0.0);
}

TEST_CASE("helmholtz inverse on Fourier eigenfunctions") {
    const Grid g = make_grid(M_PI * 8, 1024);
    const HelmholtzOperator op(g);
    for (double k : {1.0, 2.0, 5.0}) {
        auto u = sample(g, [k](double x) { return std::cos(k * x); });
        auto w = helmholtz_inverse(op, u);
        auto dw = grad_helmholtz_inverse(op, u);
        double err = 0.0, derr = 0.0;
        for (int j = 0; j < g.point_count; ++j) {
            const double x = g.node(j);
            err = std::max(err,
                           std::abs(w.values[j] - std::cos(k * x) / (1 + k * k)));
            derr = std::max(
                derr, std::abs(dw.values[j] + k * std::sin(k * x) / (1 + k * k)));
        }
        CHECK(err <= 1e-12);
        CHECK(derr <= 1e-12);
    }
}

TEST_CASE("constants pass through") {
    const Grid g = make_grid(30.0, 256);
    const HelmholtzOperator op(g);
    auto c = sample(g, [](double) { return 2.5; });
    auto w = helmholtz_inverse(op, c);
    auto dw = grad_helmholtz_inverse(op, c);
    for (int j = 0; j < g.point_count; ++j) {
        CHECK(w.values[j] == doctest::Approx(2.5).epsilon(1e-14));
        CHECK(std::abs(dw.values[j]) <= 1e-13);
    }
}

TEST_CASE("closed form for the e^{-2|x|} source") {
    // ln 2 is a node of this grid so the derivative check is on-grid
    const Grid g = make_grid(64.0 * std::log(2.0), 1 << 19);
    const HelmholtzOperator op(g);
    auto h = sample(g, [](double x) { return std::exp(-2.0 * std::abs(x)); });
    auto w = helmholtz_inverse(op, h);
    double err = 0.0;
    for (int j = 0; j < g.point_count; ++j) {
        const double ax = std::abs(g.node(j));
        const double exact =
            -std::exp(-2.0 * ax) / 3.0 + 2.0 / 3.0 * std::exp(-ax);
        err = std::max(err, std::abs(w.values[j] - exact));
    }
    CHECK(err <= 1e-8);

    auto dw = grad_helmholtz_inverse(op, h);
    const int at = g.point_count / 2 + g.point_count / 128;
    REQUIRE(std::abs(g.node(at) - std::log(2.0)) <= 1e-13);
    CHECK(std::abs(dw.values[at] - (-1.0 / 6.0)) <= 1e-7);
}

TEST_CASE("oracle: kernel normalization and eigenfunction") {
    const Grid g = make_grid(M_PI * 8, 512);
    auto ones = sample(g, [](double) { return 1.0; });
    auto w = convolve_oracle(g, ones);
    for (int j = 0; j < g.point_count; ++j)
        CHECK(std::abs(w.values[j] - 1.0) <= 1e-10);

    auto c = sample(g, [](double x) { return std::cos(x); });
    auto wc = convolve_oracle(g, c);
    for (int j = 0; j < g.point_count; ++j)
        CHECK(std::abs(wc.values[j] - std::cos(g.node(j)) / 2.0) <= 1e-9);
}

TEST_CASE("cross-oracle agreement on 50 random smooth inputs") {
    const Grid g = make_grid(30.0, 2048);
    const HelmholtzOperator op(g);
    double worst = 0.0;
    for (unsigned seed = 1; seed <= 50; ++seed) {
        auto h = oracles::random_smooth(g, seed);
        auto w1 = helmholtz_inverse(op, h);
        auto w2 = convolve_oracle(g, h);
        double err = 0.0;
        for (int j = 0; j < g.point_count; ++j)
            err = std::max(err, std::abs(w1.values[j] - w2.values[j]));
        worst = std::max(worst, err / max_abs(w1));
    }
    CHECK(worst <= 1e-9);
}

TEST_CASE("agreement with the finite-difference solve") {
    const Grid g = make_grid(30.0, 4096);
    const HelmholtzOperator op(g);
    auto h = oracles::random_decaying(g, 21);
    auto w = helmholtz_inverse(op, h);

    // second-order FD at two resolutions, Richardson-extrapolated
    const Grid g2 = make_grid(30.0, 8192);
    auto h2 = oracles::random_decaying(g2, 21);
    auto coarse = oracles::fd_helmholtz(h.values, g.spacing);
    auto fine = oracles::fd_helmholtz(h2.values, g2.spacing);
    double err = 0.0;
    for (int j = 0; j < g.point_count; ++j) {
        const double extrap = (4.0 * fine[2 * j] - coarse[j]) / 3.0;
        err = std::max(err, std::abs(w.values[j] - extrap));
    }
    CHECK(err / max_abs(w) <= 1e-8);
}

TEST_CASE("round trip through 1 - d^2/dx^2") {
    const Grid g = make_grid(30.0, 1024);
    const HelmholtzOperator op(g);
    for (unsigned seed : {3u, 4u}) {
        auto h = oracles::random_smooth(g, seed);
        auto w = helmholtz_inverse(op, h);
        auto wxx = spectral_derivative(spectral_derivative(w));
        double err = 0.0;
        for (int j = 0; j < g.point_count; ++j)
            err = std::max(err,
                           std::abs(w.values[j] - wxx.values[j] - h.values[j]));
        CHECK(err / max_abs(h) <= 1e-11);
    }
}

TEST_CASE("self-adjointness") {
    const Grid g = make_grid(30.0, 1024);
    const HelmholtzOperator op(g);
    auto f = oracles::random_smooth(g, 5);
    auto h = oracles::random_smooth(g, 6);
    auto lf = helmholtz_inverse(op, f);
    auto lh = helmholtz_inverse(op, h);
    GridFunction a(g), b(g);
    for (int j = 0; j < g.point_count; ++j) {
        a.values[j] = f.values[j] * lh.values[j];
        b.values[j] = h.values[j] * lf.values[j];
    }
    const double ia = integrate(a), ib = integrate(b);
    CHECK(std::abs(ia - ib) <= 1e-10 * std::max(std::abs(ia), 1.0));
}

TEST_CASE("kernel positivity") {
    const Grid g = make_grid(30.0, 1024);
    const HelmholtzOperator op(g);
    auto h = oracles::random_smooth(g, 9);
    for (auto& v : h.values) v = v * v;
    auto w = helmholtz_inverse(op, h);
    for (double v : w.values) CHECK(v >= -1e-12 * max_abs(h));
}

TEST_CASE("smoothing bound on the derivative") {
    const Grid g = make_grid(30.0, 1024);
    const HelmholtzOperator op(g);
    for (unsigned seed : {12u, 13u, 14u}) {
        auto h = oracles::random_decaying(g, seed);
        auto dw = grad_helmholtz_inverse(op, h);
        GridFunction habs = h;
        for (auto& v : habs.values) v = std::abs(v);
        CHECK(max_abs(dw) <= 0.5 * integrate(habs) * (1.0 + 1e-12));
    }
}

TEST_CASE("grid mismatch is rejected") {
    const Grid g = make_grid(30.0, 256);
    const Grid other = make_grid(30.0, 512);
    const HelmholtzOperator op(g);
    GridFunction h(other);
    CHECK_THROWS_AS(helmholtz_inverse(op, h), std::invalid_argument);
}
