#ifndef RODWAVE_EXPERIMENT_HPP
#define RODWAVE_EXPERIMENT_HPP

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "rodwave/diagnostics.hpp"

namespace rodwave {

inline constexpr const char* kVersion = "1.0.0";

struct WeightRef {
    std::string name;
    std::optional<double> param;
};

/** One experiment, parsed from a flat dotted-key config file. Unknown keys
    are errors. */
struct ExperimentConfig {
    std::string model_name;
    std::map<std::string, double> model_params;
    double grid_half_length = 60.0;
    int grid_points = 4096;
    std::string datum_kind;
    std::map<std::string, double> datum_params;
    std::string datum_csv_path;
    double dt = 1e-3;
    double t_final = 1.0;
    std::vector<double> checkpoints;
    std::string scenario;
    std::vector<WeightRef> weights;
    double envelope_d = 0.75;
    std::string output_dir;
    long seed = 0;
    bool force = false;  // run despite a failed hypothesis report
};

ExperimentConfig parse_config(const std::string& path);

// gaussian: a e^{-((x-x0)/w)^2}
// bump: a e^{-1/(1-(x/rho)^2)} on |x| < rho, 0 outside; rho >= L/2 rejected
// envelope_class: a e^{-s/2} (1+s)^{-1/2} ln(e+s)^{-d} with the smooth
//   s(x) = x tanh(x/0.3) standing in for |x| (C-infinity blend near 0)
// custom_csv: read from datum_csv_path
GridFunction make_datum(const ExperimentConfig& config, const Grid& g);

struct RunResult {
    int exit_code = 0;  // 0 pass, 1 scenario fail, 2 hypothesis, 3 numerical
    std::string reason;
};

// Writes run_manifest.json, series.ndjson, snapshot_t*.csv, verdict.json,
// plot.gp into config.output_dir.
RunResult run_experiment(const ExperimentConfig& config);

// Recomputes pass/fail for a finished run directory from its saved files.
RunResult recompute_verdict(const std::string& run_dir);

// Runs every config through a worker pool; jobs capped by RODWAVE_THREADS.
int run_sweep(const std::vector<std::string>& config_paths, int jobs);

}  // namespace rodwave

#endif
