#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "erba/config.hpp"
#include "erba/dataset.hpp"
#include "erba/reduction.hpp"

namespace erba {

struct ExperimentReport {
    Eigen::Index initial_size = 0;
    Eigen::Index final_size = 0;
    double e_x = 0.0;    // full-set RMSE on the evaluation grid
    double e_xs = 0.0;   // reduced-set RMSE on the evaluation grid
    double tau = 0.0;
    bool tau_auto = true;
    Criterion criterion = Criterion::residual;
    Engine engine = Engine::fast;
    std::uint64_t seed = 0;
    int rho = 0;
    bool parallel_folds = false;
    StopReason stop_reason = StopReason::tolerance_exceeded;
    std::vector<double> applied_regularizations;  // distinct shifts, ascending
    double total_seconds = 0.0;
    std::vector<double> step_seconds;
    ReductionTrace trace;
};

// One row of the trace CSV (columns step,n_s,ell,j_star,r_s,removed_count,seconds).
struct TraceRow {
    long step = 0;
    long n_s = 0;
    long ell = 0;
    long j_star = -1;
    double r_s = 0.0;
    long removed_count = 0;
    double seconds = 0.0;

    bool operator==(const TraceRow&) const = default;
};

std::vector<TraceRow> trace_rows(const ReductionTrace& trace);
void write_trace_csv(const std::string& path, const ReductionTrace& trace);
std::vector<TraceRow> read_trace_csv(const std::string& path);

// Builds the dataset named by the config (grid / halton / file) together
// with its function values.
SampledData build_dataset(const ExperimentConfig& cfg);

// Full pipeline: fit, derive tau, reduce, refit; writes trace.csv,
// summary.json, nodes.csv and (optionally) nodes.svg into output_dir.
// Partial outputs are removed if any stage fails.
ExperimentReport run_experiment(const ExperimentConfig& cfg);

std::string summary_json(const ExperimentReport& report);

// Timing sweep over bench.n_sides for every (criterion, engine) pair;
// writes bench.csv and bench_summary.json (per-series log-log slopes).
// Returns the number of failed cells.
int run_benchmark(const ExperimentConfig& cfg, std::ostream& log);

struct BenchCell {
    int n_side = 0;
    Eigen::Index n_points = 0;
    Criterion criterion = Criterion::residual;
    Engine engine = Engine::fast;
    double median_seconds = 0.0;
    bool ok = false;
};

// Least-squares slope of log(seconds) against log(n_points).
double loglog_slope(const std::vector<BenchCell>& cells, Criterion c, Engine e);

// Power-function values of the full dataset on the evaluation grid,
// written as CSV (coordinates, then the power value).
void write_power_map(const ExperimentConfig& cfg);

}  // namespace erba
