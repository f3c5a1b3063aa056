#pragma once

#include <Eigen/Dense>
#include <functional>
#include <string>

#include "erba/interpolation.hpp"

namespace erba {

// Tensor grid of n_side^dim equispaced points on [lo, hi]^dim including the
// endpoints, in row-major order (last coordinate fastest).
Eigen::MatrixXd build_grid(int n_side, double lo, double hi, int dim);

// Halton low-discrepancy points (prime bases per coordinate, index starts
// at 1) mapped to [lo, hi]^dim.
Eigen::MatrixXd build_halton(Eigen::Index count, double lo, double hi, int dim);

using ScalarField = std::function<double(Eigen::Ref<const Eigen::VectorXd>)>;

// Named test functions: "paper-runge-2d", "franke-2d", "constant-one",
// "linear-sum". Throws ConfigError on an unknown id.
ScalarField builtin_function(const std::string& id);

Eigen::VectorXd sample_field(const ScalarField& f, const Eigen::MatrixXd& points);

// CSV loader for file datasets: `dim` coordinate columns, plus one value
// column when with_values is set. Lines starting with '#' are skipped.
SampledData load_sampled_csv(const std::string& path, int dim, bool with_values);

}  // namespace erba
