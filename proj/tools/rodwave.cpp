#include <algorithm>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <regex>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "rodwave/experiment.hpp"

namespace {

std::vector<std::string> expand_glob(const std::string& pattern) {
    namespace fs = std::filesystem;
    const fs::path p(pattern);
    const fs::path parent =
        p.has_parent_path() ? p.parent_path() : fs::path(".");
    const std::string stem = p.filename().string();

    // Translate the shell glob into a regex: * -> .*, ? -> ., rest literal.
    std::string regex_text;
    for (char c : stem) {
        if (c == '*')
            regex_text += ".*";
        else if (c == '?')
            regex_text += '.';
        else if (std::string("\\^$.|+()[]{}").find(c) != std::string::npos)
            regex_text += std::string("\\") + c;
        else
            regex_text += c;
    }
    const std::regex re(regex_text);

    std::vector<std::string> out;
    if (!fs::is_directory(parent)) return out;
    for (const auto& entry : fs::directory_iterator(parent))
        if (entry.is_regular_file() &&
            std::regex_match(entry.path().filename().string(), re))
            out.push_back(entry.path().string());
    std::sort(out.begin(), out.end());
    return out;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"rodwave: nonlocal dispersive wave experiment runner"};
    app.require_subcommand(1);

    std::string config_path, output_dir, sweep_glob, run_dir;
    bool force = false;
    int jobs = 0;

    auto* run = app.add_subcommand("run", "run one experiment config");
    run->add_option("config", config_path, "config file")->required();
    run->add_flag("--force", force, "run despite a failed hypothesis check");
    run->add_option("--output-dir", output_dir,
                    "override the config's output directory");

    auto* sweep = app.add_subcommand("sweep", "run every config in a glob");
    sweep->add_option("glob", sweep_glob, "config file glob")->required();
    sweep->add_option("--jobs", jobs, "worker count (default: cpu count)");

    auto* verdict =
        app.add_subcommand("verdict", "recompute pass/fail for a run");
    verdict->add_option("run-dir", run_dir, "finished run directory")
        ->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (run->parsed()) {
            auto config = rodwave::parse_config(config_path);
            config.force = force;
            if (!output_dir.empty()) config.output_dir = output_dir;
            const auto result = rodwave::run_experiment(config);
            std::printf("%s: %s%s%s\n", config.scenario.c_str(),
                        result.exit_code == 0 ? "pass" : "fail",
                        result.reason.empty() ? "" : " ",
                        result.reason.c_str());
            return result.exit_code;
        }
        if (sweep->parsed()) {
            const auto configs = expand_glob(sweep_glob);
            if (configs.empty()) {
                std::fprintf(stderr, "sweep: no configs match %s\n",
                             sweep_glob.c_str());
                return 1;
            }
            return rodwave::run_sweep(configs, jobs);
        }
        const auto result = rodwave::recompute_verdict(run_dir);
        std::printf("%s\n", result.exit_code == 0 ? "pass" : "fail");
        return result.exit_code;
    } catch (const std::exception& err) {
        std::fprintf(stderr, "error: %s\n", err.what());
        return 1;
    }
}
