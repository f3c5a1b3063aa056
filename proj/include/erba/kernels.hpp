#pragma once

#include <Eigen/Dense>
#include <string>

#include "erba/errors.hpp"

namespace erba {

// Strictly positive definite radial families, all normalized so that
// phi(0) = 1 and phi is non-increasing on r >= 0.
enum class KernelFamily {
    matern_c0,             // exp(-eps r)
    matern_c2,             // exp(-eps r) (1 + eps r)
    gaussian,              // exp(-(eps r)^2)
    inverse_multiquadric,  // 1 / sqrt(1 + (eps r)^2)
};

KernelFamily kernel_family_from_string(const std::string& name);
std::string to_string(KernelFamily family);

struct RadialKernel {
    KernelFamily family = KernelFamily::matern_c0;
    double eps = 1.0;  // shape parameter, must be > 0
};

// Profile value phi_eps(r). Throws std::domain_error for r < 0.
double phi(const RadialKernel& kernel, double r);

// A(i,j) = phi(|x_i - x_j|) for the rows of X (one point per row).
// Symmetric with unit diagonal. Throws DistinctNodesError when two rows
// coincide exactly. Assembly is parallelized by rows; the result does not
// depend on the number of threads.
Eigen::MatrixXd gram_matrix(const RadialKernel& kernel, const Eigen::MatrixXd& X);

// K(i,j) = phi(|x_i - y_j|); cross_matrix(k, X, X) == gram_matrix(k, X).
Eigen::MatrixXd cross_matrix(const RadialKernel& kernel, const Eigen::MatrixXd& X,
                             const Eigen::MatrixXd& Y);

}  // namespace erba
