#include "erba/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <set>
#include <sstream>

#include "erba/svg.hpp"
#include "json.hpp"

namespace erba {

namespace fs = std::filesystem;

namespace {

std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

// Deletes everything it registered unless release() is called.
class OutputGuard {
public:
    ~OutputGuard() {
        if (armed_)
            for (const auto& p : paths_) {
                std::error_code ec;
                fs::remove(p, ec);
            }
    }
    void track(const std::string& p) { paths_.push_back(p); }
    void release() { armed_ = false; }

private:
    std::vector<std::string> paths_;
    bool armed_ = true;
};

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    return cells;
}

}  // namespace

std::vector<TraceRow> trace_rows(const ReductionTrace& trace) {
    std::vector<TraceRow> rows;
    rows.reserve(trace.steps.size());
    for (const auto& s : trace.steps) {
        TraceRow r;
        r.step = s.step;
        r.n_s = s.n_before;
        r.ell = s.ell;
        r.j_star = s.j_star;
        r.r_s = s.score;
        r.removed_count = static_cast<long>(s.removed.size());
        r.seconds = s.seconds;
        rows.push_back(r);
    }
    return rows;
}

void write_trace_csv(const std::string& path, const ReductionTrace& trace) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write '" + path + "'");
    out << "step,n_s,ell,j_star,r_s,removed_count,seconds\n";
    for (const auto& r : trace_rows(trace))
        out << r.step << ',' << r.n_s << ',' << r.ell << ',' << r.j_star << ',' << fmt17(r.r_s)
            << ',' << r.removed_count << ',' << fmt17(r.seconds) << '\n';
}

std::vector<TraceRow> read_trace_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open '" + path + "'");
    std::string line;
    if (!std::getline(in, line) || line != "step,n_s,ell,j_star,r_s,removed_count,seconds")
        throw std::runtime_error("'" + path + "': unexpected trace header");
    std::vector<TraceRow> rows;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const auto cells = split_csv_line(line);
        if (cells.size() != 7) throw std::runtime_error("'" + path + "': malformed row");
        TraceRow r;
        r.step = std::stol(cells[0]);
        r.n_s = std::stol(cells[1]);
        r.ell = std::stol(cells[2]);
        r.j_star = std::stol(cells[3]);
        r.r_s = std::stod(cells[4]);
        r.removed_count = std::stol(cells[5]);
        r.seconds = std::stod(cells[6]);
        rows.push_back(r);
    }
    return rows;
}

SampledData build_dataset(const ExperimentConfig& cfg) {
    const auto& d = cfg.dataset;
    if (cfg.dataset.kind == ExperimentConfig::DatasetKind::file)
        return load_sampled_csv(d.path, d.dim, cfg.test_function == "from-file");

    SampledData data;
    data.nodes = d.kind == ExperimentConfig::DatasetKind::grid
                     ? build_grid(d.n_side, d.lo, d.hi, d.dim)
                     : build_halton(d.count, d.lo, d.hi, d.dim);
    data.values = sample_field(builtin_function(cfg.test_function), data.nodes);
    return data;
}

namespace {

std::vector<double> distinct_deltas(const ReductionTrace& trace) {
    std::set<double> seen{trace.initial_fit_delta};
    for (const auto& s : trace.steps)
        if (!s.removed.empty()) seen.insert(s.refit_delta);
    return {seen.begin(), seen.end()};
}

}  // namespace

ExperimentReport run_experiment(const ExperimentConfig& cfg) {
    fs::create_directories(cfg.output_dir);
    OutputGuard guard;

    const SampledData data = build_dataset(cfg);
    const bool has_truth = cfg.test_function != "from-file";

    const Eigen::MatrixXd eval_points =
        build_grid(cfg.eval.m_side, cfg.eval.lo, cfg.eval.hi, cfg.dataset.dim);
    Eigen::VectorXd truth;
    if (has_truth) truth = sample_field(builtin_function(cfg.test_function), eval_points);

    KernelModel full = KernelModel::fit(cfg.kernel, data);
    const double e_x = has_truth ? rmse(full.evaluate(eval_points), truth)
                                 : std::numeric_limits<double>::quiet_NaN();

    ReductionConfig rcfg = cfg.reduction;
    if (cfg.tau_auto) {
        ToleranceBaseline baseline;
        if (rcfg.criterion == Criterion::residual) {
            if (!has_truth)
                throw ConfigError("the automatic residual tolerance needs a builtin test "
                                  "function; set an explicit tau for file data");
            baseline.e_x = e_x;
        } else {
            baseline.power_on_eval = power_direct(cfg.kernel, data.nodes, eval_points);
            baseline.eval_side = cfg.eval.m_side;
        }
        rcfg.tau = default_tolerance(rcfg.criterion, baseline);
    } else {
        rcfg.tau = cfg.tau_value;
    }

    ExperimentReport report;
    report.trace = run(data, cfg.kernel, rcfg);

    const SampledData reduced = subset(data, report.trace.final_indices);
    KernelModel reduced_model = KernelModel::fit(cfg.kernel, reduced);
    report.e_xs = has_truth ? rmse(reduced_model.evaluate(eval_points), truth)
                            : std::numeric_limits<double>::quiet_NaN();

    report.initial_size = data.size();
    report.final_size = reduced.size();
    report.e_x = e_x;
    report.tau = rcfg.tau;
    report.tau_auto = cfg.tau_auto;
    report.criterion = rcfg.criterion;
    report.engine = rcfg.engine;
    report.seed = rcfg.seed;
    report.rho = rcfg.rho;
    report.parallel_folds = rcfg.parallel_folds;
    report.stop_reason = report.trace.stop_reason;
    report.applied_regularizations = distinct_deltas(report.trace);
    report.total_seconds = report.trace.total_seconds;
    for (const auto& s : report.trace.steps) report.step_seconds.push_back(s.seconds);

    const fs::path dir(cfg.output_dir);
    const std::string trace_path = (dir / "trace.csv").string();
    guard.track(trace_path);
    write_trace_csv(trace_path, report.trace);

    const std::string summary_path = (dir / "summary.json").string();
    guard.track(summary_path);
    {
        std::ofstream out(summary_path);
        if (!out) throw std::runtime_error("cannot write '" + summary_path + "'");
        out << summary_json(report) << '\n';
    }

    std::vector<bool> retained(static_cast<std::size_t>(data.size()), false);
    for (Eigen::Index idx : report.trace.final_indices)
        retained[static_cast<std::size_t>(idx)] = true;

    const std::string nodes_path = (dir / "nodes.csv").string();
    guard.track(nodes_path);
    {
        std::ofstream out(nodes_path);
        if (!out) throw std::runtime_error("cannot write '" + nodes_path + "'");
        for (int k = 0; k < cfg.dataset.dim; ++k) out << 'x' << (k + 1) << ',';
        out << "retained\n";
        for (Eigen::Index i = 0; i < data.size(); ++i) {
            for (int k = 0; k < cfg.dataset.dim; ++k) out << fmt17(data.nodes(i, k)) << ',';
            out << (retained[static_cast<std::size_t>(i)] ? 1 : 0) << '\n';
        }
    }

    if (cfg.emit_plot && cfg.dataset.dim <= 2) {
        const std::string svg_path = (dir / "nodes.svg").string();
        guard.track(svg_path);
        write_node_svg(svg_path, data.nodes, retained, cfg.dataset.lo, cfg.dataset.hi);
    }

    guard.release();
    return report;
}

std::string summary_json(const ExperimentReport& report) {
    nlohmann::ordered_json j;
    j["config_version"] = 1;
    j["initial_size"] = report.initial_size;
    j["final_size"] = report.final_size;
    j["e_x"] = report.e_x;
    j["e_xs"] = report.e_xs;
    j["tau"] = report.tau;
    j["tau_rule"] = report.tau_auto ? "auto" : "explicit";
    j["criterion"] = to_string(report.criterion);
    j["engine"] = to_string(report.engine);
    j["seed"] = report.seed;
    j["rho"] = report.rho;
    j["parallel_folds"] = report.parallel_folds;
    j["steps"] = report.trace.steps.size();
    j["stop_reason"] = to_string(report.stop_reason);
    j["applied_regularizations"] = report.applied_regularizations;
    j["total_seconds"] = report.total_seconds;
    j["step_seconds"] = report.step_seconds;
    return j.dump(2);
}

double loglog_slope(const std::vector<BenchCell>& cells, Criterion c, Engine e) {
    std::vector<double> xs, ys;
    for (const auto& cell : cells) {
        if (cell.criterion != c || cell.engine != e || !cell.ok) continue;
        if (!(cell.median_seconds > 0.0)) continue;
        xs.push_back(std::log(static_cast<double>(cell.n_points)));
        ys.push_back(std::log(cell.median_seconds));
    }
    if (xs.size() < 2) return std::numeric_limits<double>::quiet_NaN();
    const double n = static_cast<double>(xs.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sx += xs[i];
        sy += ys[i];
        sxx += xs[i] * xs[i];
        sxy += xs[i] * ys[i];
    }
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

int run_benchmark(const ExperimentConfig& cfg, std::ostream& log) {
    if (cfg.bench.n_sides.empty())
        throw ConfigError("bench requires a nonempty n_sides sweep");
    if (cfg.test_function == "from-file")
        throw ConfigError("bench sweeps grid datasets and needs a builtin test function");
    fs::create_directories(cfg.output_dir);

    const ScalarField field = builtin_function(cfg.test_function);

    std::vector<BenchCell> cells;
    int failures = 0;
    for (int n_side : cfg.bench.n_sides) {
        SampledData data;
        data.nodes = build_grid(n_side, cfg.dataset.lo, cfg.dataset.hi, cfg.dataset.dim);
        data.values = sample_field(field, data.nodes);

        for (Criterion criterion : {Criterion::residual, Criterion::power}) {
            double tau = cfg.bench.tau_value;
            if (cfg.bench.tau_auto) {
                // tau derivation is setup work and stays outside the timings
                const Eigen::MatrixXd eval_points =
                    build_grid(cfg.eval.m_side, cfg.eval.lo, cfg.eval.hi, cfg.dataset.dim);
                const Eigen::VectorXd truth = sample_field(field, eval_points);
                KernelModel full = KernelModel::fit(cfg.kernel, data);
                ToleranceBaseline baseline;
                if (criterion == Criterion::residual) {
                    baseline.e_x = rmse(full.evaluate(eval_points), truth);
                } else {
                    baseline.power_on_eval = power_direct(cfg.kernel, data.nodes, eval_points);
                    baseline.eval_side = cfg.eval.m_side;
                }
                tau = default_tolerance(criterion, baseline);
            }

            for (Engine engine : {Engine::fast, Engine::naive}) {
                BenchCell cell;
                cell.n_side = n_side;
                cell.n_points = data.size();
                cell.criterion = criterion;
                cell.engine = engine;

                ReductionConfig rcfg = cfg.reduction;
                rcfg.criterion = criterion;
                rcfg.engine = engine;
                rcfg.tau = tau;
                rcfg.max_steps = cfg.bench.max_steps;

                std::vector<double> times;
                try {
                    for (int rep = 0; rep < cfg.bench.repeats; ++rep) {
                        const ReductionTrace trace = run(data, cfg.kernel, rcfg);
                        times.push_back(trace.total_seconds);
                    }
                    std::sort(times.begin(), times.end());
                    const std::size_t mid = times.size() / 2;
                    cell.median_seconds = times.size() % 2 == 1
                                              ? times[mid]
                                              : 0.5 * (times[mid - 1] + times[mid]);
                    cell.ok = true;
                } catch (const std::exception& e) {
                    ++failures;
                    log << "bench cell n_side=" << n_side << " " << to_string(criterion) << "/"
                        << to_string(engine) << " failed: " << e.what() << '\n';
                }

                log << "bench n_side=" << n_side << " n_points=" << cell.n_points << " "
                    << to_string(criterion) << "/" << to_string(engine) << " -> "
                    << (cell.ok ? fmt17(cell.median_seconds) + "s" : std::string("failed"))
                    << '\n';
                cells.push_back(cell);
            }
        }
    }

    const fs::path dir(cfg.output_dir);
    {
        std::ofstream out(dir / "bench.csv");
        if (!out) throw std::runtime_error("cannot write bench.csv");
        out << "n_side,n_points,criterion,engine,median_seconds\n";
        for (const auto& cell : cells) {
            out << cell.n_side << ',' << cell.n_points << ',' << to_string(cell.criterion) << ','
                << to_string(cell.engine) << ','
                << (cell.ok ? fmt17(cell.median_seconds) : std::string("nan")) << '\n';
        }
    }
    {
        nlohmann::ordered_json j;
        j["repeats"] = cfg.bench.repeats;
        j["max_steps"] = cfg.bench.max_steps;
        j["failed_cells"] = failures;
        nlohmann::ordered_json series = nlohmann::ordered_json::array();
        for (Criterion c : {Criterion::residual, Criterion::power})
            for (Engine e : {Engine::fast, Engine::naive}) {
                nlohmann::ordered_json s;
                s["criterion"] = to_string(c);
                s["engine"] = to_string(e);
                const double slope = loglog_slope(cells, c, e);
                if (std::isnan(slope)) s["slope"] = nullptr;
                else s["slope"] = slope;
                series.push_back(s);
            }
        j["series"] = series;
        for (Criterion c : {Criterion::residual, Criterion::power}) {
            const double gap = loglog_slope(cells, c, Engine::naive) -
                               loglog_slope(cells, c, Engine::fast);
            j[std::string("slope_gap_") + to_string(c)] =
                std::isnan(gap) ? nlohmann::ordered_json(nullptr) : nlohmann::ordered_json(gap);
        }
        std::ofstream out(dir / "bench_summary.json");
        if (!out) throw std::runtime_error("cannot write bench_summary.json");
        out << j.dump(2) << '\n';
    }
    return failures;
}

void write_power_map(const ExperimentConfig& cfg) {
    fs::create_directories(cfg.output_dir);
    const SampledData data = build_dataset(cfg);
    const Eigen::MatrixXd eval_points =
        build_grid(cfg.eval.m_side, cfg.eval.lo, cfg.eval.hi, cfg.dataset.dim);
    const Eigen::VectorXd power = power_direct(cfg.kernel, data.nodes, eval_points);

    const fs::path path = fs::path(cfg.output_dir) / "power_map.csv";
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
    for (int k = 0; k < cfg.dataset.dim; ++k) out << 'x' << (k + 1) << ',';
    out << "power\n";
    for (Eigen::Index i = 0; i < eval_points.rows(); ++i) {
        for (int k = 0; k < cfg.dataset.dim; ++k) out << fmt17(eval_points(i, k)) << ',';
        out << fmt17(power(i)) << '\n';
    }
}

}  // namespace erba
