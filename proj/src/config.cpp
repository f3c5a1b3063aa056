#include "erba/config.hpp"

#include <fstream>
#include <set>

#include "erba/dataset.hpp"
#include "json.hpp"

namespace erba {

namespace {

using nlohmann::json;

void reject_unknown_keys(const json& section, const std::string& name,
                         const std::set<std::string>& known) {
    for (const auto& [key, value] : section.items()) {
        (void)value;
        if (!known.count(key))
            throw ConfigError("unknown key '" + key + "' in section '" + name + "'");
    }
}

const json& require(const json& obj, const std::string& section, const std::string& key) {
    auto it = obj.find(key);
    if (it == obj.end())
        throw ConfigError("missing key '" + key + "' in section '" + section + "'");
    return *it;
}

double as_number(const json& v, const std::string& what) {
    if (!v.is_number()) throw ConfigError(what + " must be a number");
    return v.get<double>();
}

long as_integer(const json& v, const std::string& what) {
    if (!v.is_number_integer()) throw ConfigError(what + " must be an integer");
    return v.get<long>();
}

std::string as_string(const json& v, const std::string& what) {
    if (!v.is_string()) throw ConfigError(what + " must be a string");
    return v.get<std::string>();
}

std::pair<double, double> parse_domain(const json& v, const std::string& section) {
    if (!v.is_array() || v.size() != 2)
        throw ConfigError("'domain' in section '" + section + "' must be [lo, hi]");
    const double lo = as_number(v[0], "domain lo");
    const double hi = as_number(v[1], "domain hi");
    if (!(hi > lo)) throw ConfigError("'domain' in section '" + section + "' is empty");
    return {lo, hi};
}

// "auto" or a positive number
std::pair<bool, double> parse_tau(const json& v, const std::string& section) {
    if (v.is_string()) {
        if (v.get<std::string>() != "auto")
            throw ConfigError("'tau' in section '" + section + "' must be \"auto\" or a number");
        return {true, 0.0};
    }
    const double value = as_number(v, "tau");
    if (!(value > 0.0)) throw ConfigError("'tau' must be positive");
    return {false, value};
}

}  // namespace

ExperimentConfig parse_config(const std::string& json_text) {
    json root = json::parse(json_text, nullptr, true, true);  // allow comments
    if (!root.is_object()) throw ConfigError("config root must be an object");
    reject_unknown_keys(root, "(root)",
                        {"config_version", "kernel", "dataset", "test_function", "eval_grid",
                         "reduction", "bench", "output"});

    ExperimentConfig cfg;

    cfg.config_version = static_cast<int>(as_integer(require(root, "(root)", "config_version"),
                                                     "config_version"));
    if (cfg.config_version != 1)
        throw ConfigError("unsupported config_version " + std::to_string(cfg.config_version));

    {
        const json& k = require(root, "(root)", "kernel");
        reject_unknown_keys(k, "kernel", {"family", "eps"});
        cfg.kernel.family =
            kernel_family_from_string(as_string(require(k, "kernel", "family"), "kernel family"));
        cfg.kernel.eps = as_number(require(k, "kernel", "eps"), "kernel eps");
        if (!(cfg.kernel.eps > 0.0)) throw ConfigError("kernel eps must be positive");
    }

    {
        const json& d = require(root, "(root)", "dataset");
        reject_unknown_keys(d, "dataset", {"kind", "n_side", "count", "path", "dim", "domain"});
        const std::string kind = as_string(require(d, "dataset", "kind"), "dataset kind");
        if (kind == "grid") cfg.dataset.kind = ExperimentConfig::DatasetKind::grid;
        else if (kind == "halton") cfg.dataset.kind = ExperimentConfig::DatasetKind::halton;
        else if (kind == "file") cfg.dataset.kind = ExperimentConfig::DatasetKind::file;
        else throw ConfigError("unknown dataset kind '" + kind + "'");

        cfg.dataset.dim = static_cast<int>(as_integer(require(d, "dataset", "dim"), "dataset dim"));
        if (cfg.dataset.dim < 1) throw ConfigError("dataset dim must be >= 1");
        if (d.contains("domain")) {
            auto [lo, hi] = parse_domain(d["domain"], "dataset");
            cfg.dataset.lo = lo;
            cfg.dataset.hi = hi;
        }
        switch (cfg.dataset.kind) {
            case ExperimentConfig::DatasetKind::grid:
                cfg.dataset.n_side =
                    static_cast<int>(as_integer(require(d, "dataset", "n_side"), "n_side"));
                if (cfg.dataset.n_side < 2) throw ConfigError("dataset n_side must be >= 2");
                break;
            case ExperimentConfig::DatasetKind::halton:
                cfg.dataset.count = as_integer(require(d, "dataset", "count"), "count");
                if (cfg.dataset.count < 1) throw ConfigError("dataset count must be >= 1");
                break;
            case ExperimentConfig::DatasetKind::file:
                cfg.dataset.path = as_string(require(d, "dataset", "path"), "dataset path");
                break;
        }
    }

    cfg.test_function =
        as_string(require(root, "(root)", "test_function"), "test_function");
    if (cfg.test_function == "from-file") {
        if (cfg.dataset.kind != ExperimentConfig::DatasetKind::file)
            throw ConfigError("test_function \"from-file\" requires a file dataset");
    } else {
        builtin_function(cfg.test_function);  // resolve now so typos fail fast
    }

    {
        const json& e = require(root, "(root)", "eval_grid");
        reject_unknown_keys(e, "eval_grid", {"m_side", "domain"});
        cfg.eval.m_side = static_cast<int>(as_integer(require(e, "eval_grid", "m_side"), "m_side"));
        if (cfg.eval.m_side < 2) throw ConfigError("eval_grid m_side must be >= 2");
        if (e.contains("domain")) {
            auto [lo, hi] = parse_domain(e["domain"], "eval_grid");
            cfg.eval.lo = lo;
            cfg.eval.hi = hi;
        } else {
            cfg.eval.lo = cfg.dataset.lo;
            cfg.eval.hi = cfg.dataset.hi;
        }
    }

    {
        const json& r = require(root, "(root)", "reduction");
        reject_unknown_keys(r, "reduction",
                            {"criterion", "engine", "rho", "tau", "seed", "min_nodes",
                             "parallel_folds", "max_steps"});
        cfg.reduction.criterion = criterion_from_string(
            as_string(require(r, "reduction", "criterion"), "criterion"));
        if (r.contains("engine"))
            cfg.reduction.engine = engine_from_string(as_string(r["engine"], "engine"));
        cfg.reduction.rho = static_cast<int>(as_integer(require(r, "reduction", "rho"), "rho"));
        if (cfg.reduction.rho < 1) throw ConfigError("rho must be >= 1");
        std::tie(cfg.tau_auto, cfg.tau_value) = parse_tau(require(r, "reduction", "tau"), "reduction");
        if (r.contains("seed")) cfg.reduction.seed =
            static_cast<std::uint64_t>(as_integer(r["seed"], "seed"));
        if (r.contains("min_nodes")) {
            cfg.reduction.min_nodes = as_integer(r["min_nodes"], "min_nodes");
            if (cfg.reduction.min_nodes < 0) throw ConfigError("min_nodes must be >= 0");
        }
        if (cfg.reduction.effective_min_nodes() <= cfg.reduction.rho)
            throw ConfigError("min_nodes must exceed rho");
        if (r.contains("parallel_folds")) {
            if (!r["parallel_folds"].is_boolean())
                throw ConfigError("parallel_folds must be a boolean");
            cfg.reduction.parallel_folds = r["parallel_folds"].get<bool>();
        }
        if (r.contains("max_steps")) {
            cfg.reduction.max_steps = as_integer(r["max_steps"], "max_steps");
            if (cfg.reduction.max_steps < 0) throw ConfigError("max_steps must be >= 0");
        }
    }

    if (root.contains("bench")) {
        const json& b = root["bench"];
        reject_unknown_keys(b, "bench", {"n_sides", "repeats", "max_steps", "tau"});
        const json& sides = require(b, "bench", "n_sides");
        if (!sides.is_array() || sides.empty())
            throw ConfigError("bench n_sides must be a nonempty array");
        for (const auto& s : sides) {
            const int n_side = static_cast<int>(as_integer(s, "bench n_side"));
            if (n_side < 2) throw ConfigError("bench n_side must be >= 2");
            cfg.bench.n_sides.push_back(n_side);
        }
        if (b.contains("repeats")) {
            cfg.bench.repeats = static_cast<int>(as_integer(b["repeats"], "repeats"));
            if (cfg.bench.repeats < 1) throw ConfigError("bench repeats must be >= 1");
        }
        if (b.contains("max_steps")) {
            cfg.bench.max_steps = as_integer(b["max_steps"], "bench max_steps");
            if (cfg.bench.max_steps < 0) throw ConfigError("bench max_steps must be >= 0");
        }
        if (b.contains("tau"))
            std::tie(cfg.bench.tau_auto, cfg.bench.tau_value) = parse_tau(b["tau"], "bench");
    }

    {
        const json& o = require(root, "(root)", "output");
        reject_unknown_keys(o, "output", {"dir", "emit_plot"});
        cfg.output_dir = as_string(require(o, "output", "dir"), "output dir");
        if (o.contains("emit_plot")) {
            if (!o["emit_plot"].is_boolean()) throw ConfigError("emit_plot must be a boolean");
            cfg.emit_plot = o["emit_plot"].get<bool>();
        }
    }

    return cfg;
}

ExperimentConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    try {
        return parse_config(text);
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError("config '" + path + "': " + e.what());
    }
}

}  // namespace erba
