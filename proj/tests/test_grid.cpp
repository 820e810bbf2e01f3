#include <cmath>
#include <cstdio>
#include <filesystem>
#include <limits>

#include "doctest.h"
#include "oracles.hpp"
#include "rodwave/grid.hpp"

using namespace rodwave;

TEST_CASE("make_grid validates its arguments") {
    CHECK_THROWS_AS(make_grid(60.0, 15), std::invalid_argument);
    CHECK_THROWS_AS(make_grid(60.0, 4095), std::invalid_argument);
    CHECK_THROWS_AS(make_grid(60.0, 8), std::invalid_argument);
    CHECK_THROWS_AS(make_grid(0.0, 64), std::invalid_argument);
    CHECK_THROWS_AS(make_grid(-1.0, 64), std::invalid_argument);
}

TEST_CASE("grid nodes and spacing") {
    const Grid g = make_grid(60.0, 4096);
    CHECK(g.spacing == 120.0 / 4096);
    CHECK(g.spacing == 0.029296875);
    CHECK(g.node(0) == -60.0);
    CHECK(g.node(4095) == doctest::Approx(60.0 - g.spacing).epsilon(1e-15));

    const Grid gp = make_grid(M_PI, 16);
    CHECK(gp.node(0) == -M_PI);
}

TEST_CASE("spectral derivative of constants and eigenfunctions") {
    const Grid g = make_grid(M_PI, 256);
    auto ones = sample(g, [](double) { return 1.0; });
    auto d = spectral_derivative(ones);
    CHECK(max_abs(d) <= 1e-13);

    auto s = sample(g, [](double x) { return std::sin(x); });
    auto ds = spectral_derivative(s);
    double err = 0.0;
    for (int j = 0; j < g.point_count; ++j)
        err = std::max(err, std::abs(ds.values[j] - std::cos(g.node(j))));
    CHECK(err <= 1e-12);
}

TEST_CASE("spectral derivative matches the finite-difference oracle") {
    const Grid g = make_grid(60.0, 4096);
    auto u = sample(g, [](double x) { return std::exp(-x * x); });
    auto ds = spectral_derivative(u);
    auto fd = oracles::fd_derivative(u.values, g.spacing);
    double err = 0.0;
    for (int j = 0; j < g.point_count; ++j)
        err = std::max(err, std::abs(ds.values[j] - fd[j]));
    // fourth-order FD at dx = 0.0293
    CHECK(err <= 5.0 * std::pow(g.spacing, 4));
}

TEST_CASE("integrate: closed forms") {
    const Grid g = make_grid(M_PI, 256);
    auto z = GridFunction(g);
    CHECK(integrate(z) == 0.0);
    auto c = sample(g, [](double x) { return std::cos(x); });
    CHECK(std::abs(integrate(c)) <= 1e-12);

    // kernel normalization; the |x| kink needs a fine grid
    const Grid fine = make_grid(60.0, 1 << 22);
    auto p = sample(fine, [](double x) { return 0.5 * std::exp(-std::abs(x)); });
    CHECK(std::abs(integrate(p) - 1.0) <= 1e-10);

    const Grid mid = make_grid(60.0, 1 << 16);
    auto gauss = sample(mid, [](double x) { return std::exp(-x * x); });
    CHECK(std::abs(integrate(gauss) - std::sqrt(M_PI)) <= 1e-12);
}

TEST_CASE("integral of a derivative vanishes") {
    const Grid g = make_grid(30.0, 1024);
    for (unsigned seed : {1u, 2u, 3u}) {
        auto u = oracles::random_smooth(g, seed);
        CHECK(std::abs(integrate(spectral_derivative(u))) <= 1e-11);
    }
}

TEST_CASE("lp_norm: closed forms for e^{-|x|}") {
    const Grid g = make_grid(60.0, 1 << 22);
    auto u = sample(g, [](double x) { return std::exp(-std::abs(x)); });
    CHECK(lp_norm(u, std::numeric_limits<double>::infinity()) == 1.0);
    for (double p : {2.0, 4.0, 16.0, 64.0}) {
        const double closed = std::pow(2.0 / p, 1.0 / p);
        CHECK(std::abs(lp_norm(u, p) - closed) <= 1e-6);
    }
    // approach to the sup norm
    CHECK(std::abs(lp_norm(u, 64.0) - 1.0) <= 0.15);

    CHECK_THROWS_AS(lp_norm(u, 0.5), std::invalid_argument);
    CHECK(lp_norm(GridFunction(g), 2.0) == 0.0);
}

TEST_CASE("lp_norm is monotone under pointwise domination") {
    const Grid g = make_grid(30.0, 512);
    auto u = oracles::random_decaying(g, 7);
    auto w = u;
    for (auto& v : w.values) v *= 1.5;
    for (double p : {1.0, 2.0, 4.0, std::numeric_limits<double>::infinity()})
        CHECK(lp_norm(u, p) <= lp_norm(w, p));
}

TEST_CASE("require_finite aborts with the location") {
    const Grid g = make_grid(30.0, 64);
    GridFunction u(g);
    u.values[5] = std::nan("");
    CHECK_THROWS_AS(require_finite(u, "test"), std::runtime_error);
}

TEST_CASE("CSV round trip at 17 digits") {
    const Grid g = make_grid(30.0, 128);
    auto u = oracles::random_decaying(g, 11);
    const std::string path = "roundtrip_test.csv";
    write_csv(u, path);
    auto back = read_csv(g, path);
    for (int j = 0; j < g.point_count; ++j)
        CHECK(back.values[j] == u.values[j]);
    std::filesystem::remove(path);
}

TEST_CASE("CSV header is mandatory") {
    const Grid g = make_grid(30.0, 64);
    const std::string path = "bad_header_test.csv";
    {
        FILE* f = std::fopen(path.c_str(), "w");
        std::fprintf(f, "a,b\n0,0\n");
        std::fclose(f);
    }
    CHECK_THROWS_AS(read_csv(g, path), std::runtime_error);
    std::filesystem::remove(path);
}
