#include "erba/reduction.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>

namespace erba {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

}  // namespace

Criterion criterion_from_string(const std::string& name) {
    if (name == "residual") return Criterion::residual;
    if (name == "power") return Criterion::power;
    throw ConfigError("unknown criterion '" + name + "'");
}

Engine engine_from_string(const std::string& name) {
    if (name == "fast") return Engine::fast;
    if (name == "naive") return Engine::naive;
    throw ConfigError("unknown engine '" + name + "'");
}

std::string to_string(Criterion c) {
    return c == Criterion::residual ? "residual" : "power";
}

std::string to_string(Engine e) { return e == Engine::fast ? "fast" : "naive"; }

std::string to_string(StopReason r) {
    switch (r) {
        case StopReason::tolerance_exceeded: return "tolerance_exceeded";
        case StopReason::min_nodes_reached: return "min_nodes_reached";
        case StopReason::degenerate_fold: return "degenerate_fold";
        case StopReason::step_limit: return "step_limit";
    }
    return "unknown";
}

FoldPlan partition(Eigen::Index n, int rho, std::mt19937_64& rng) {
    if (rho < 1) throw std::invalid_argument("partition: rho must be >= 1");
    if (n < rho) throw std::invalid_argument("partition: fewer nodes than rho");

    std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), Eigen::Index{0});
    std::shuffle(order.begin(), order.end(), rng);

    const Eigen::Index ell = n / rho;
    const Eigen::Index q = n % rho;
    FoldPlan plan;
    plan.total = n;
    plan.folds.resize(static_cast<std::size_t>(ell));
    for (Eigen::Index j = 0; j < ell; ++j) {
        auto& fold = plan.folds[static_cast<std::size_t>(j)].indices;
        fold.assign(order.begin() + j * rho, order.begin() + (j + 1) * rho);
        if (j < q) fold.push_back(order[static_cast<std::size_t>(ell * rho + j)]);
    }
    return plan;
}

std::vector<double> score_folds(const KernelModel& model, const FoldPlan& plan,
                                Criterion criterion, Engine engine, bool parallel) {
    if (plan.total != model.size())
        throw std::invalid_argument("score_folds: plan does not match model size");
    if (engine == Engine::fast && !model.has_gram_inverse())
        throw std::logic_error("score_folds: fast engine requires a materialized gram inverse");

    const int ell = static_cast<int>(plan.folds.size());
    std::vector<double> scores(static_cast<std::size_t>(ell), 0.0);
    std::vector<std::exception_ptr> errors(static_cast<std::size_t>(ell));

#pragma omp parallel for schedule(dynamic) if (parallel)
    for (int j = 0; j < ell; ++j) {
        try {
            const FoldIndexSet& fold = plan.folds[static_cast<std::size_t>(j)];
            Eigen::VectorXd v;
            if (criterion == Criterion::residual) {
                v = engine == Engine::fast
                        ? fold_residual_fast(model.cached_inverse(), model.coefficients(), fold)
                        : fold_residual_naive(model.gram(), model.data().values, fold);
            } else {
                v = engine == Engine::fast
                        ? fold_power_fast(model.gram(), model.cached_inverse(), fold)
                        : fold_power_naive(model.gram(), fold);
            }
            scores[static_cast<std::size_t>(j)] =
                v.norm() / std::sqrt(static_cast<double>(fold.size()));
        } catch (...) {
            errors[static_cast<std::size_t>(j)] = std::current_exception();
        }
    }

    for (int j = 0; j < ell; ++j) {
        if (!errors[static_cast<std::size_t>(j)]) continue;
        try {
            std::rethrow_exception(errors[static_cast<std::size_t>(j)]);
        } catch (const DegenerateFoldError&) {
            throw DegenerateFoldError(j);  // attach the fold id
        }
    }
    return scores;
}

ReductionState make_reduction_state(const SampledData& initial, const RadialKernel& kernel) {
    std::vector<Eigen::Index> live(static_cast<std::size_t>(initial.size()));
    std::iota(live.begin(), live.end(), Eigen::Index{0});
    KernelModel model = KernelModel::fit(kernel, initial);
    return ReductionState{initial, std::move(live), std::move(model)};
}

StepOutcome step(ReductionState& state, const RadialKernel& kernel,
                 const ReductionConfig& config, std::mt19937_64& rng) {
    const Eigen::Index n_s = state.data.size();
    if (n_s < config.effective_min_nodes())
        throw std::logic_error("step: node set below the minimum floor");

    if (config.engine == Engine::fast) state.model.gram_inverse();

    const FoldPlan plan = partition(n_s, config.rho, rng);
    StepOutcome out;
    out.ell = static_cast<int>(plan.folds.size());

    try {
        out.fold_scores =
            score_folds(state.model, plan, config.criterion, config.engine, config.parallel_folds);
    } catch (const DegenerateFoldError& err) {
        out.kind = StepOutcome::Kind::stopped;
        out.reason = StopReason::degenerate_fold;
        out.j_star = static_cast<int>(err.fold);
        return out;
    }

    const auto best = std::min_element(out.fold_scores.begin(), out.fold_scores.end());
    out.j_star = static_cast<int>(best - out.fold_scores.begin());
    out.score = *best;

    if (!(out.score <= config.tau)) {
        out.kind = StepOutcome::Kind::stopped;
        out.reason = StopReason::tolerance_exceeded;
        return out;
    }

    out.kind = StepOutcome::Kind::removed;
    const auto& removed_local = plan.folds[static_cast<std::size_t>(out.j_star)].indices;
    out.removed_original.reserve(removed_local.size());
    for (Eigen::Index pos : removed_local)
        out.removed_original.push_back(state.live[static_cast<std::size_t>(pos)]);

    std::vector<bool> drop(static_cast<std::size_t>(n_s), false);
    for (Eigen::Index pos : removed_local) drop[static_cast<std::size_t>(pos)] = true;
    std::vector<Eigen::Index> keep;
    keep.reserve(static_cast<std::size_t>(n_s) - removed_local.size());
    for (Eigen::Index i = 0; i < n_s; ++i)
        if (!drop[static_cast<std::size_t>(i)]) keep.push_back(i);

    std::vector<Eigen::Index> live_next;
    live_next.reserve(keep.size());
    for (Eigen::Index pos : keep) live_next.push_back(state.live[static_cast<std::size_t>(pos)]);

    state.data = subset(state.data, keep);
    state.live = std::move(live_next);
    state.model = KernelModel::fit(kernel, state.data);
    return out;
}

ReductionTrace run(const SampledData& initial, const RadialKernel& kernel,
                   const ReductionConfig& config) {
    if (config.rho < 1) throw std::invalid_argument("run: rho must be >= 1");
    if (!(config.tau > 0.0)) throw std::invalid_argument("run: tau must be positive");
    const Eigen::Index floor = config.effective_min_nodes();
    if (floor <= config.rho)
        throw std::invalid_argument("run: min_nodes must exceed rho");
    if (initial.size() <= floor)
        throw std::invalid_argument("run: initial node count must exceed min_nodes");

    const auto t_start = Clock::now();
    std::mt19937_64 rng(config.seed);
    ReductionState state = make_reduction_state(initial, kernel);

    ReductionTrace trace;
    trace.initial_fit_delta = state.model.regularization();

    int s = 0;
    for (;;) {
        if (state.data.size() < floor) {
            trace.stop_reason = StopReason::min_nodes_reached;
            break;
        }
        const auto t0 = Clock::now();
        const Eigen::Index n_before = state.data.size();
        StepOutcome out = step(state, kernel, config, rng);

        StepRecord rec;
        rec.step = s;
        rec.n_before = n_before;
        rec.ell = out.ell;
        rec.j_star = out.j_star;
        rec.score = out.score;
        rec.fold_scores = std::move(out.fold_scores);
        if (out.kind == StepOutcome::Kind::removed) {
            rec.removed = std::move(out.removed_original);
            rec.refit_delta = state.model.regularization();
        }
        rec.seconds = seconds_since(t0);
        trace.steps.push_back(std::move(rec));

        if (out.kind == StepOutcome::Kind::stopped) {
            trace.stop_reason = out.reason;
            break;
        }
        ++s;
        if (config.max_steps > 0 && s >= config.max_steps) {
            trace.stop_reason = StopReason::step_limit;
            break;
        }
    }

    trace.final_indices = state.live;
    trace.total_seconds = seconds_since(t_start);
    return trace;
}

double default_tolerance(Criterion criterion, const ToleranceBaseline& baseline) {
    if (criterion == Criterion::residual) {
        if (!std::isfinite(baseline.e_x))
            throw std::invalid_argument("default_tolerance: missing full-set RMSE");
        return 2.0 * baseline.e_x;
    }
    if (baseline.power_on_eval.size() == 0 || baseline.eval_side <= 0)
        throw std::invalid_argument("default_tolerance: missing power vector or grid side");
    return 2.0 * baseline.power_on_eval.norm() / static_cast<double>(baseline.eval_side);
}

}  // namespace erba
