#ifndef RODWAVE_EVOLVE_HPP
#define RODWAVE_EVOLVE_HPP

#include <vector>

#include "rodwave/model.hpp"

namespace rodwave {

struct EvolveOptions {
    double dt = 1e-3;
    double t_final = 1.0;
    // Must start at 0 (inserted if absent); snapped to step multiples.
    std::vector<double> checkpoint_times;
    double cfl_safety = 0.5;          // dt <= cfl_safety * dx / max(1, |f'(u)|)
    double tail_guard_threshold = 1e-12;
    double ux_blowup_threshold = 1e6;  // wave-breaking proxy on |u_x|_inf
};

/** State captured at one checkpoint time. h_accum and r_accum carry the
    step-level trapezoidal time integrals of h_t and f'(u) u_x from t = 0. */
struct Checkpoint {
    double t = 0.0;
    GridFunction u;
    GridFunction ux;
    GridFunction h_accum;
    GridFunction r_accum;
    double energy = 0.0;
    double boundary_tail = 0.0;  // max boundary |u| relative to |u|_inf
};

struct Trajectory {
    ModelSpec spec;
    Grid grid;
    std::vector<Checkpoint> checkpoints;
    bool truncated = false;      // stopped early at the wave-breaking guard
    double breakdown_time = 0.0;
    double dt = 0.0;

    const Checkpoint& at(double t) const;  // throws if t not checkpointed
    const GridFunction& initial_datum() const { return checkpoints.front().u; }
};

// One classical RK4 step. Throws on CFL violation or non-finite fields.
GridFunction step_rk4(const ModelSpec& spec, const HelmholtzOperator& op,
                      const GridFunction& u, double dt);

Trajectory evolve(const ModelSpec& spec, const GridFunction& u0,
                  const EvolveOptions& opts);

}  // namespace rodwave

#endif
