#pragma once

#include <Eigen/Dense>
#include <vector>

#include "erba/interpolation.hpp"

namespace erba {

// Ordered indices of a test fold inside the current node set.
struct FoldIndexSet {
    std::vector<Eigen::Index> indices;

    Eigen::Index size() const { return static_cast<Eigen::Index>(indices.size()); }
};

// Checks: indices distinct, inside [0, n), and 1 <= size < n.
void validate_fold(const FoldIndexSet& fold, Eigen::Index n);

// Ascending indices of [0, n) not contained in the fold.
std::vector<Eigen::Index> fold_complement(const FoldIndexSet& fold, Eigen::Index n);

// diag(R * S) as row sums of R .* S^T, without forming R * S.
Eigen::VectorXd hadamard_diag(const Eigen::MatrixXd& R, const Eigen::MatrixXd& S);

// Leave-fold-out residual f_p - S(fold nodes), where S is the interpolant
// refitted on the complement. Reference route, used as the oracle for the
// block identity below.
Eigen::VectorXd fold_residual_naive(const RadialKernel& kernel, const SampledData& data,
                                    const FoldIndexSet& fold);
// Same residual, slicing a precomputed Gram matrix of the full node set
// instead of re-evaluating the kernel (the classical per-fold refit).
Eigen::VectorXd fold_residual_naive(const Eigen::MatrixXd& gram,
                                    const Eigen::VectorXd& values,
                                    const FoldIndexSet& fold);

// Block identity: the residual is the solution of (A^{-1})_{p,p} e = c_p.
// For a single index this is the classical leave-one-out formula
// e = c_p / (A^{-1})_{p,p}.
Eigen::VectorXd fold_residual_fast(const Eigen::MatrixXd& gram_inverse,
                                   const Eigen::VectorXd& coefficients,
                                   const FoldIndexSet& fold);

// Power function of the training complement evaluated at the fold nodes.
// Reference route through the complement factorization.
Eigen::VectorXd fold_power_naive(const RadialKernel& kernel, const Eigen::MatrixXd& X,
                                 const FoldIndexSet& fold);
Eigen::VectorXd fold_power_naive(const Eigen::MatrixXd& gram, const FoldIndexSet& fold);

// Same values from the full Gram matrix and its inverse only:
//   B = (A^{-1}_{p,p})^{-1} A^{-1}_{p,:},  P = sqrt(max(0, diag(B A_{:,p}))).
// Since fold nodes belong to the node set, the kernel block k(V) is exactly
// the column block A_{:,p}.
Eigen::VectorXd fold_power_fast(const Eigen::MatrixXd& gram,
                                const Eigen::MatrixXd& gram_inverse,
                                const FoldIndexSet& fold);

}  // namespace erba
