#include "rodwave/evolve.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "rodwave/diagnostics.hpp"

namespace rodwave {

namespace {

double max_transport_speed(const ModelSpec& spec, const GridFunction& u) {
    double speed = 0.0;
    for (double v : u.values)
        speed = std::max(speed, std::abs(spec.f_prime(v)));
    return speed;
}

void check_cfl(const ModelSpec& spec, const GridFunction& u, double dt,
               double safety, double t) {
    const double limit =
        safety * u.grid.spacing / std::max(1.0, max_transport_speed(spec, u));
    if (dt > limit) {
        std::ostringstream msg;
        msg << "evolve: CFL violated at t = " << t << " (dt = " << dt
            << " > " << limit << ")";
        throw std::runtime_error(msg.str());
    }
}

double boundary_tail(const GridFunction& u) {
    const double peak = max_abs(u);
    if (peak == 0.0) return 0.0;
    const int n = u.size();
    const double edge = std::max(std::abs(u.values[0]),
                                 std::abs(u.values[n - 1]));
    return edge / peak;
}

}  // namespace

const Checkpoint& Trajectory::at(double t) const {
    for (const auto& cp : checkpoints)
        if (std::abs(cp.t - t) <= 1e-9 * std::max(1.0, std::abs(t))) return cp;
    throw std::invalid_argument("Trajectory: time not checkpointed");
}

GridFunction step_rk4(const ModelSpec& spec, const HelmholtzOperator& op,
                      const GridFunction& u, double dt) {
    const int n = u.size();
    const auto k1 = rhs(spec, op, u);
    GridFunction stage(u.grid);
    for (int j = 0; j < n; ++j)
        stage.values[j] = u.values[j] + 0.5 * dt * k1.values[j];
    const auto k2 = rhs(spec, op, stage);
    for (int j = 0; j < n; ++j)
        stage.values[j] = u.values[j] + 0.5 * dt * k2.values[j];
    const auto k3 = rhs(spec, op, stage);
    for (int j = 0; j < n; ++j)
        stage.values[j] = u.values[j] + dt * k3.values[j];
    const auto k4 = rhs(spec, op, stage);
    GridFunction out(u.grid);
    for (int j = 0; j < n; ++j)
        out.values[j] = u.values[j] +
                        dt / 6.0 *
                            (k1.values[j] + 2.0 * k2.values[j] +
                             2.0 * k3.values[j] + k4.values[j]);
    require_finite(out, "step_rk4");
    return out;
}

Trajectory evolve(const ModelSpec& spec, const GridFunction& u0,
                  const EvolveOptions& opts) {
    if (!(opts.dt > 0.0) || !(opts.t_final > 0.0))
        throw std::invalid_argument("evolve: dt and T_final must be positive");

    const double dt = opts.dt;
    const long n_steps = std::lround(opts.t_final / dt);

    // Snap requested checkpoints to step indices; t = 0 is always recorded.
    std::vector<long> marks;
    auto requested = opts.checkpoint_times;
    if (requested.empty()) requested = {opts.t_final};
    for (double t : requested) {
        if (t < 0.0 || t > opts.t_final + 0.5 * dt)
            throw std::invalid_argument("evolve: checkpoint outside [0, T]");
        marks.push_back(std::lround(t / dt));
    }
    marks.push_back(0);
    std::sort(marks.begin(), marks.end());
    marks.erase(std::unique(marks.begin(), marks.end()), marks.end());

    HelmholtzOperator op(u0.grid);
    Trajectory traj;
    traj.spec = spec;
    traj.grid = u0.grid;
    traj.dt = dt;

    GridFunction u = u0;
    GridFunction ux = spectral_derivative(u);
    GridFunction h_prev = h_field(spec, u, ux);
    GridFunction trans_prev = transport_field(spec, u, ux);
    GridFunction h_accum(u.grid);
    GridFunction r_accum(u.grid);

    auto record = [&](long step) {
        Checkpoint cp;
        cp.t = step * dt;
        cp.u = u;
        cp.ux = ux;
        cp.h_accum = h_accum;
        cp.r_accum = r_accum;
        cp.energy = energy(u);
        cp.boundary_tail = boundary_tail(u);
        traj.checkpoints.push_back(std::move(cp));
    };

    check_cfl(spec, u, dt, opts.cfl_safety, 0.0);
    std::size_t next_mark = 0;
    if (marks[next_mark] == 0) {
        record(0);
        ++next_mark;
    }

    for (long step = 1; step <= n_steps; ++step) {
        u = step_rk4(spec, op, u, dt);
        ux = spectral_derivative(u);

        const double slope = max_abs(ux);
        if (slope > opts.ux_blowup_threshold) {
            traj.truncated = true;
            traj.breakdown_time = step * dt;
            record(step);
            return traj;
        }
        check_cfl(spec, u, dt, opts.cfl_safety, step * dt);

        const auto h_now = h_field(spec, u, ux);
        const auto trans_now = transport_field(spec, u, ux);
        for (int j = 0; j < u.size(); ++j) {
            h_accum.values[j] +=
                0.5 * dt * (h_prev.values[j] + h_now.values[j]);
            r_accum.values[j] +=
                0.5 * dt * (trans_prev.values[j] + trans_now.values[j]);
        }
        h_prev = h_now;
        trans_prev = trans_now;

        if (next_mark < marks.size() && marks[next_mark] == step) {
            record(step);
            ++next_mark;
        }
    }
    return traj;
}

}  // namespace rodwave
