#include <cmath>

#include "doctest.h"
#include "oracles.hpp"
#include "rodwave/diagnostics.hpp"
#include "rodwave/evolve.hpp"

using namespace rodwave;

namespace {

GridFunction gaussian(const Grid& g, double a) {
    return sample(g, [a](double x) { return a * std::exp(-x * x); });
}

}  // namespace

TEST_CASE("zero datum stays zero") {
    const Grid g = make_grid(30.0, 256);
    EvolveOptions opts;
    opts.dt = 1e-3;
    opts.t_final = 0.1;
    opts.checkpoint_times = {0.05, 0.1};
    auto traj = evolve(build_preset("dai", {{"gamma", 1.0}}), GridFunction(g),
                       opts);
    CHECK(!traj.truncated);
    REQUIRE(traj.checkpoints.size() == 3);
    for (const auto& cp : traj.checkpoints) {
        CHECK(max_abs(cp.u) == 0.0);
        CHECK(max_abs(cp.ux) == 0.0);
        CHECK(max_abs(cp.h_accum) == 0.0);
        CHECK(max_abs(cp.r_accum) == 0.0);
        CHECK(cp.energy == 0.0);
        CHECK(cp.boundary_tail == 0.0);
    }
}

TEST_CASE("argument validation") {
    const Grid g = make_grid(30.0, 256);
    auto spec = build_preset("dai", {{"gamma", 1.0}});
    auto u0 = gaussian(g, 0.25);

    EvolveOptions opts;
    opts.dt = -1.0;
    CHECK_THROWS_AS(evolve(spec, u0, opts), std::invalid_argument);

    opts = EvolveOptions{};
    opts.checkpoint_times = {2.0};  // beyond t_final = 1
    CHECK_THROWS_AS(evolve(spec, u0, opts), std::invalid_argument);

    opts = EvolveOptions{};
    opts.dt = 1.0;  // far above the CFL limit for this grid
    opts.t_final = 1.0;
    CHECK_THROWS_AS(evolve(spec, u0, opts), std::runtime_error);
}

TEST_CASE("at() only serves checkpointed times") {
    const Grid g = make_grid(30.0, 256);
    EvolveOptions opts;
    opts.dt = 1e-3;
    opts.t_final = 0.1;
    auto traj = evolve(build_preset("bbm"), gaussian(g, 0.25), opts);
    CHECK(traj.at(0.0).t == 0.0);
    CHECK(traj.at(0.1).t == doctest::Approx(0.1));
    CHECK_THROWS_AS(traj.at(0.05), std::invalid_argument);
}

TEST_CASE("single step is fifth-order accurate") {
    const Grid g = make_grid(30.0, 512);
    const HelmholtzOperator op(g);
    auto spec = build_preset("dai", {{"gamma", 1.0}});
    auto u0 = gaussian(g, 0.5);

    // error(dt) = |S_dt - S_{dt/2} o S_{dt/2}| ~ C dt^5
    std::vector<double> dts = {0.05, 0.025, 0.0125};
    std::vector<double> errs;
    for (double dt : dts) {
        auto coarse = step_rk4(spec, op, u0, dt);
        auto fine = step_rk4(spec, op, step_rk4(spec, op, u0, 0.5 * dt),
                             0.5 * dt);
        double e = 0.0;
        for (int j = 0; j < g.point_count; ++j)
            e = std::max(e, std::abs(coarse.values[j] - fine.values[j]));
        errs.push_back(e);
    }
    const double slope01 = std::log2(errs[0] / errs[1]);
    const double slope12 = std::log2(errs[1] / errs[2]);
    CHECK(slope01 == doctest::Approx(5.0).epsilon(0.08));
    CHECK(slope12 == doctest::Approx(5.0).epsilon(0.08));
}

TEST_CASE("energy is conserved over a long run") {
    const Grid g = make_grid(60.0, 4096);
    EvolveOptions opts;
    opts.dt = 1e-3;
    opts.t_final = 5.0;
    opts.checkpoint_times = {1.0, 2.5, 5.0};
    auto u0 = gaussian(g, 0.25);
    auto traj = evolve(build_preset("dai", {{"gamma", 1.0}}), u0, opts);
    CHECK(!traj.truncated);

    const double closed = 0.0625 * std::sqrt(2.0 * M_PI);
    CHECK(std::abs(traj.at(0.0).energy - closed) <= 1e-10);
    for (const auto& cp : traj.checkpoints)
        CHECK(std::abs(cp.energy - traj.at(0.0).energy) <= 1e-8);
}

TEST_CASE("self-convergence under grid refinement") {
    EvolveOptions opts;
    opts.dt = 1e-3;
    opts.t_final = 2.0;
    auto spec = build_preset("bbm");

    const Grid coarse = make_grid(60.0, 1024);
    const Grid fine = make_grid(60.0, 4096);
    auto tc = evolve(spec, gaussian(coarse, 1.0), opts);
    auto tf = evolve(spec, gaussian(fine, 1.0), opts);
    const auto& uc = tc.at(2.0).u;
    const auto& uf = tf.at(2.0).u;
    double err = 0.0;
    for (int j = 0; j < coarse.point_count; ++j)
        err = std::max(err, std::abs(uc.values[j] - uf.values[4 * j]));
    CHECK(err <= 1e-7);
}

TEST_CASE("accumulators match a post-hoc quadrature of the checkpoints") {
    const Grid g = make_grid(60.0, 2048);
    EvolveOptions opts;
    opts.dt = 5e-3;
    opts.t_final = 0.5;
    for (int i = 1; i <= 10; ++i) opts.checkpoint_times.push_back(0.05 * i);
    auto spec = build_preset("dai", {{"gamma", 1.0}});
    auto traj = evolve(spec, gaussian(g, 0.25), opts);
    REQUIRE(traj.checkpoints.size() == 11);

    GridFunction h_quad(g), r_quad(g);
    for (std::size_t k = 1; k < traj.checkpoints.size(); ++k) {
        const auto& a = traj.checkpoints[k - 1];
        const auto& b = traj.checkpoints[k];
        auto ha = h_field(spec, a.u, a.ux);
        auto hb = h_field(spec, b.u, b.ux);
        auto ra = transport_field(spec, a.u, a.ux);
        auto rb = transport_field(spec, b.u, b.ux);
        const double w = 0.5 * (b.t - a.t);
        for (int j = 0; j < g.point_count; ++j) {
            h_quad.values[j] += w * (ha.values[j] + hb.values[j]);
            r_quad.values[j] += w * (ra.values[j] + rb.values[j]);
        }
    }
    const auto& last = traj.checkpoints.back();
    double herr = 0.0, rerr = 0.0;
    for (int j = 0; j < g.point_count; ++j) {
        herr = std::max(herr, std::abs(last.h_accum.values[j] -
                                       h_quad.values[j]));
        rerr = std::max(rerr, std::abs(last.r_accum.values[j] -
                                       r_quad.values[j]));
    }
    CHECK(herr <= 1e-2 * max_abs(last.h_accum));
    CHECK(rerr <= 1e-2 * std::max(max_abs(last.r_accum), 1e-6));
}

TEST_CASE("h accumulator is positive where the solution lives") {
    const Grid g = make_grid(60.0, 2048);
    EvolveOptions opts;
    opts.dt = 2e-3;
    opts.t_final = 1.0;
    auto traj =
        evolve(build_preset("dai", {{"gamma", 2.0}}), gaussian(g, 0.25), opts);
    const auto& cp = traj.at(1.0);
    double min_core = 1e300;
    for (int j = 0; j < g.point_count; ++j)
        if (std::abs(g.node(j)) <= 10.0)
            min_core = std::min(min_core, cp.h_accum.values[j]);
    CHECK(min_core > 0.0);
}

TEST_CASE("wave-breaking guard truncates the run") {
    const Grid g = make_grid(30.0, 256);
    EvolveOptions opts;
    opts.dt = 1e-3;
    opts.t_final = 1.0;
    opts.ux_blowup_threshold = 1e-6;
    auto traj =
        evolve(build_preset("dai", {{"gamma", 1.0}}), gaussian(g, 0.25), opts);
    CHECK(traj.truncated);
    CHECK(traj.breakdown_time == doctest::Approx(opts.dt));
    CHECK(traj.checkpoints.back().t == doctest::Approx(traj.breakdown_time));
}

TEST_CASE("boundary tail monitor") {
    const Grid g = make_grid(30.0, 512);
    EvolveOptions opts;
    opts.dt = 1e-3;
    opts.t_final = 0.1;
    auto traj = evolve(build_preset("bbm"), gaussian(g, 1.0), opts);
    for (const auto& cp : traj.checkpoints) CHECK(cp.boundary_tail <= 1e-12);
}
