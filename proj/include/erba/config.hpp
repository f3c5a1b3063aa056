#pragma once

#include <string>
#include <vector>

#include "erba/kernels.hpp"
#include "erba/reduction.hpp"

namespace erba {

// Experiment configuration, loaded from a versioned JSON file of flat
// sections (see README for the schema).
struct ExperimentConfig {
    int config_version = 1;

    RadialKernel kernel;

    enum class DatasetKind { grid, halton, file };
    struct Dataset {
        DatasetKind kind = DatasetKind::grid;
        int n_side = 25;          // grid
        Eigen::Index count = 0;   // halton
        std::string path;         // file
        int dim = 2;
        double lo = -1.0;
        double hi = 1.0;
    } dataset;

    std::string test_function = "paper-runge-2d";  // or "from-file"

    struct EvalGrid {
        int m_side = 60;
        double lo = -1.0;
        double hi = 1.0;
    } eval;

    ReductionConfig reduction;
    bool tau_auto = true;    // "tau": "auto" | number
    double tau_value = 0.0;

    struct Bench {
        std::vector<int> n_sides;
        int repeats = 1;
        long max_steps = 0;    // 0 = run reductions to termination
        bool tau_auto = true;
        double tau_value = 0.0;
    } bench;

    std::string output_dir = "out";
    bool emit_plot = false;
};

ExperimentConfig load_config(const std::string& path);
ExperimentConfig parse_config(const std::string& json_text);

}  // namespace erba
