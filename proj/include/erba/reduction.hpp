#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "erba/era.hpp"

namespace erba {

enum class Criterion { residual, power };
enum class Engine { fast, naive };
enum class StopReason { tolerance_exceeded, min_nodes_reached, degenerate_fold, step_limit };

Criterion criterion_from_string(const std::string& name);
Engine engine_from_string(const std::string& name);
std::string to_string(Criterion c);
std::string to_string(Engine e);
std::string to_string(StopReason r);

struct ReductionConfig {
    Criterion criterion = Criterion::residual;
    Engine engine = Engine::fast;
    int rho = 1;
    double tau = 0.0;           // must be > 0
    std::uint64_t seed = 0;
    Eigen::Index min_nodes = 0; // 0 selects the default floor 2*rho + 1
    bool parallel_folds = false;
    long max_steps = 0;         // 0 = unlimited; used by timing sweeps

    Eigen::Index effective_min_nodes() const {
        return min_nodes > 0 ? min_nodes : 2 * static_cast<Eigen::Index>(rho) + 1;
    }
};

// Disjoint test folds covering {0, ..., n-1}, sizes rho or rho + 1.
struct FoldPlan {
    std::vector<FoldIndexSet> folds;
    Eigen::Index total = 0;
};

// Shuffles 0..n-1 with the generator, cuts floor(n/rho) consecutive chunks
// of size rho and hands the q = n mod rho leftover indices one each to the
// first q folds.
FoldPlan partition(Eigen::Index n, int rho, std::mt19937_64& rng);

// Fold scores w_j = |e_j|_2 / sqrt(rho_j) (residual) or |P_j|_2 / sqrt(rho_j)
// (power). The fast engine requires model.gram_inverse() to have been
// materialized. Fold scoring may run in parallel; each fold is computed
// independently, so scores do not depend on scheduling.
std::vector<double> score_folds(const KernelModel& model, const FoldPlan& plan,
                                Criterion criterion, Engine engine,
                                bool parallel = false);

struct ReductionState {
    SampledData data;                 // current nodes and values
    std::vector<Eigen::Index> live;   // indices into the original node set
    KernelModel model;                // fitted on `data`
};

ReductionState make_reduction_state(const SampledData& initial, const RadialKernel& kernel);

struct StepOutcome {
    enum class Kind { removed, stopped };
    Kind kind = Kind::stopped;
    StopReason reason = StopReason::tolerance_exceeded;  // meaningful when stopped
    int ell = 0;
    int j_star = -1;
    double score = std::numeric_limits<double>::quiet_NaN();
    std::vector<double> fold_scores;
    std::vector<Eigen::Index> removed_original;  // original ids of the removed fold
};

// One iteration: partition, score, pick the argmin fold (ties -> lowest
// index); if its score is within tau remove it and refit the state on the
// reduced set, otherwise stop. A degenerate fold block stops the scheme.
StepOutcome step(ReductionState& state, const RadialKernel& kernel,
                 const ReductionConfig& config, std::mt19937_64& rng);

struct StepRecord {
    int step = 0;
    Eigen::Index n_before = 0;
    int ell = 0;
    int j_star = -1;
    double score = std::numeric_limits<double>::quiet_NaN();
    std::vector<double> fold_scores;
    std::vector<Eigen::Index> removed;  // original ids; empty on the stopping step
    double refit_delta = 0.0;           // shift applied by the refit after removal
    double seconds = 0.0;
};

struct ReductionTrace {
    std::vector<StepRecord> steps;
    std::vector<Eigen::Index> final_indices;
    StopReason stop_reason = StopReason::tolerance_exceeded;
    double initial_fit_delta = 0.0;
    double total_seconds = 0.0;
};

// Runs the iterative scheme to termination. Deterministic for fixed inputs
// and seed, independent of fold-scoring parallelism.
ReductionTrace run(const SampledData& initial, const RadialKernel& kernel,
                   const ReductionConfig& config);

// Inputs for the default tolerance rules.
struct ToleranceBaseline {
    double e_x = std::numeric_limits<double>::quiet_NaN();  // full-set RMSE on the eval grid
    Eigen::VectorXd power_on_eval;                          // power values on the eval grid
    Eigen::Index eval_side = 0;                             // grid side m
};

// residual: 2 * e_x;  power: 2 * |P|_2 / m  (m the evaluation grid side).
double default_tolerance(Criterion criterion, const ToleranceBaseline& baseline);

}  // namespace erba
