#pragma once

#include <Eigen/Dense>
#include <optional>
#include <vector>

#include "erba/kernels.hpp"

namespace erba {

// An interpolation problem instance: nodes (one point per row) and the
// sampled function values.
struct SampledData {
    Eigen::MatrixXd nodes;
    Eigen::VectorXd values;

    Eigen::Index size() const { return nodes.rows(); }
    Eigen::Index dim() const { return nodes.cols(); }
};

// Row subset of a data set, in the order given.
SampledData subset(const SampledData& data, const std::vector<Eigen::Index>& rows);

// SPD factorization with a diagonal-shift fallback ladder. `delta` is the
// shift that was actually applied (0 when the plain factorization succeeds),
// and `gram` the matrix that was factorized.
struct SpdFactorization {
    Eigen::LLT<Eigen::MatrixXd> llt;
    Eigen::MatrixXd gram;
    double delta = 0.0;
};

SpdFactorization spd_factorize(Eigen::MatrixXd gram);

// A fitted kernel interpolant. Holds the node set, the (possibly shifted)
// Gram matrix, its factorization, the coefficient vector, and on demand the
// explicit inverse needed by the block identities. After gram_inverse() has
// been materialized the model is safe to share read-only across threads.
class KernelModel {
public:
    static KernelModel fit(const RadialKernel& kernel, SampledData data);

    // cross_matrix(kernel, points, nodes) * coefficients
    Eigen::VectorXd evaluate(const Eigen::MatrixXd& points) const;

    // Materializes and caches the symmetrized inverse of gram().
    const Eigen::MatrixXd& gram_inverse();

    const RadialKernel& kernel() const { return kernel_; }
    const SampledData& data() const { return data_; }
    const Eigen::MatrixXd& gram() const { return gram_; }
    const Eigen::VectorXd& coefficients() const { return coeffs_; }
    const Eigen::LLT<Eigen::MatrixXd>& factorization() const { return llt_; }
    double regularization() const { return delta_; }
    Eigen::Index size() const { return data_.nodes.rows(); }

    bool has_gram_inverse() const { return inverse_.has_value(); }
    const Eigen::MatrixXd& cached_inverse() const;
    // Conditioning-dependent bound on |gram * inverse - I|_max, recorded
    // when the inverse is materialized.
    double inverse_residual_bound() const;

private:
    KernelModel() = default;

    RadialKernel kernel_;
    SampledData data_;
    Eigen::MatrixXd gram_;
    Eigen::LLT<Eigen::MatrixXd> llt_;
    Eigen::VectorXd coeffs_;
    double delta_ = 0.0;
    std::optional<Eigen::MatrixXd> inverse_;
    double inverse_residual_bound_ = 0.0;
};

inline KernelModel fit(const RadialKernel& kernel, SampledData data) {
    return KernelModel::fit(kernel, std::move(data));
}

// Power function of the node set X evaluated pointwise:
//   P(x) = sqrt(max(0, phi(0) - k(x)^T A^{-1} k(x))),
// computed through the factorization of the Gram matrix of X.
Eigen::VectorXd power_direct(const RadialKernel& kernel, const Eigen::MatrixXd& X,
                             const Eigen::MatrixXd& points);

// sqrt(mean squared difference)
double rmse(const Eigen::VectorXd& predicted, const Eigen::VectorXd& truth);

}  // namespace erba
