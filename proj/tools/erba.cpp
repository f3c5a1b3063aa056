// Experiment runner for kernel-based node-set reduction (RBA / ERBA).
//
//   erba run <config.json>        full reduction experiment
//   erba bench <config.json>      timing sweep over grid sizes
//   erba power-map <config.json>  power-function values on the eval grid

#include <cstdio>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "erba/experiment.hpp"

namespace {

// 0 success, 2 config error, 3 solver failure, 4 partial benchmark failures
constexpr int kExitConfigError = 2;
constexpr int kExitSolverFailure = 3;
constexpr int kExitPartialBench = 4;

struct Overrides {
    std::optional<std::string> engine;
    std::optional<std::string> criterion;
    std::optional<std::uint64_t> seed;
    std::optional<double> tau;
    std::optional<std::string> output_dir;
    bool parallel_folds = false;
};

void apply(const Overrides& o, erba::ExperimentConfig& cfg) {
    if (o.engine) cfg.reduction.engine = erba::engine_from_string(*o.engine);
    if (o.criterion) cfg.reduction.criterion = erba::criterion_from_string(*o.criterion);
    if (o.seed) cfg.reduction.seed = *o.seed;
    if (o.tau) {
        cfg.tau_auto = false;
        cfg.tau_value = *o.tau;
    }
    if (o.output_dir) cfg.output_dir = *o.output_dir;
    if (o.parallel_folds) cfg.reduction.parallel_folds = true;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"kernel interpolation node-set reduction (RBA / ERBA) experiments"};
    app.require_subcommand(1);

    std::string config_path;
    Overrides overrides;

    auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("config", config_path, "JSON experiment config")
            ->required()
            ->check(CLI::ExistingFile);
        cmd->add_option("--engine", overrides.engine, "override engine (fast|naive)");
        cmd->add_option("--criterion", overrides.criterion,
                        "override criterion (residual|power)");
        cmd->add_option("--seed", overrides.seed, "override RNG seed");
        cmd->add_option("--tau", overrides.tau, "override tolerance with an explicit value");
        cmd->add_option("--output-dir", overrides.output_dir, "override output directory");
        cmd->add_flag("--parallel-folds", overrides.parallel_folds,
                      "score folds in parallel within each step");
    };

    CLI::App* cmd_run = app.add_subcommand("run", "run a reduction experiment");
    add_common(cmd_run);
    CLI::App* cmd_bench = app.add_subcommand("bench", "timing sweep over grid sizes");
    add_common(cmd_bench);
    CLI::App* cmd_power = app.add_subcommand("power-map", "write the power map CSV");
    add_common(cmd_power);

    CLI11_PARSE(app, argc, argv);

    try {
        erba::ExperimentConfig cfg = erba::load_config(config_path);
        apply(overrides, cfg);

        if (cmd_run->parsed()) {
            const erba::ExperimentReport report = erba::run_experiment(cfg);
            std::printf("%s/%s  n: %ld -> %ld  tau=%.6g  e_X=%.6g  e_Xs=%.6g  steps=%zu  "
                        "stop=%s  %.3fs\n",
                        erba::to_string(report.criterion).c_str(),
                        erba::to_string(report.engine).c_str(),
                        static_cast<long>(report.initial_size),
                        static_cast<long>(report.final_size), report.tau, report.e_x,
                        report.e_xs, report.trace.steps.size(),
                        erba::to_string(report.stop_reason).c_str(), report.total_seconds);
            std::printf("outputs in %s\n", cfg.output_dir.c_str());
            return 0;
        }
        if (cmd_bench->parsed()) {
            const int failures = erba::run_benchmark(cfg, std::cout);
            std::printf("bench outputs in %s\n", cfg.output_dir.c_str());
            return failures > 0 ? kExitPartialBench : 0;
        }
        erba::write_power_map(cfg);
        std::printf("power map written to %s\n", cfg.output_dir.c_str());
        return 0;
    } catch (const erba::ConfigError& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return kExitConfigError;
    } catch (const erba::SingularSystemError& e) {
        std::fprintf(stderr, "solver failure: %s\n", e.what());
        return kExitSolverFailure;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
}
