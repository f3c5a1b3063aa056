#include "erba/interpolation.hpp"

#include <array>
#include <cmath>
#include <limits>

namespace erba {

SampledData subset(const SampledData& data, const std::vector<Eigen::Index>& rows) {
    SampledData out;
    out.nodes = data.nodes(rows, Eigen::all);
    out.values = data.values(rows);
    return out;
}

SpdFactorization spd_factorize(Eigen::MatrixXd gram) {
    // Shifts are applied to the pristine diagonal, not accumulated.
    static constexpr std::array<double, 4> ladder{0.0, 1e-12, 1e-10, 1e-8};
    SpdFactorization out;
    const Eigen::VectorXd diag0 = gram.diagonal();
    std::vector<double> tried;
    for (double delta : ladder) {
        gram.diagonal() = diag0.array() + delta;
        out.llt.compute(gram);
        if (out.llt.info() == Eigen::Success) {
            out.gram = std::move(gram);
            out.delta = delta;
            return out;
        }
        tried.push_back(delta);
    }
    throw SingularSystemError(std::move(tried));
}

KernelModel KernelModel::fit(const RadialKernel& kernel, SampledData data) {
    if (data.nodes.rows() < 1)
        throw std::invalid_argument("fit: empty node set");
    if (data.values.size() != data.nodes.rows())
        throw std::invalid_argument("fit: values length does not match node count");

    KernelModel model;
    model.kernel_ = kernel;
    auto fac = spd_factorize(gram_matrix(kernel, data.nodes));
    model.gram_ = std::move(fac.gram);
    model.llt_ = std::move(fac.llt);
    model.delta_ = fac.delta;
    model.coeffs_ = model.llt_.solve(data.values);
    model.data_ = std::move(data);
    return model;
}

Eigen::VectorXd KernelModel::evaluate(const Eigen::MatrixXd& points) const {
    if (points.cols() != data_.nodes.cols())
        throw std::invalid_argument("evaluate: point dimension mismatch");
    if (points.rows() == 0) return Eigen::VectorXd(0);
    return cross_matrix(kernel_, points, data_.nodes) * coeffs_;
}

const Eigen::MatrixXd& KernelModel::gram_inverse() {
    if (!inverse_) {
        const Eigen::Index n = gram_.rows();
        Eigen::MatrixXd inv = llt_.solve(Eigen::MatrixXd::Identity(n, n));
        inverse_ = ((inv + inv.transpose()) * 0.5).eval();
        inverse_residual_bound_ = static_cast<double>(n) *
                                  std::numeric_limits<double>::epsilon() /
                                  std::max(llt_.rcond(), std::numeric_limits<double>::min());
    }
    return *inverse_;
}

const Eigen::MatrixXd& KernelModel::cached_inverse() const {
    if (!inverse_) throw std::logic_error("gram inverse has not been materialized");
    return *inverse_;
}

double KernelModel::inverse_residual_bound() const {
    if (!inverse_) throw std::logic_error("gram inverse has not been materialized");
    return inverse_residual_bound_;
}

Eigen::VectorXd power_direct(const RadialKernel& kernel, const Eigen::MatrixXd& X,
                             const Eigen::MatrixXd& points) {
    if (X.rows() < 1) throw std::invalid_argument("power_direct: empty node set");
    if (points.cols() != X.cols())
        throw std::invalid_argument("power_direct: point dimension mismatch");
    if (points.rows() == 0) return Eigen::VectorXd(0);

    const auto fac = spd_factorize(gram_matrix(kernel, X));
    const double phi0 = phi(kernel, 0.0);
    const Eigen::MatrixXd K = cross_matrix(kernel, X, points);  // n x m
    const Eigen::Index m = points.rows();
    Eigen::VectorXd out(m);

    // Columns are independent solves; order of threads cannot change values.
#pragma omp parallel for schedule(static)
    for (Eigen::Index j = 0; j < m; ++j) {
        const Eigen::VectorXd y = fac.llt.solve(K.col(j));
        const double radicand = phi0 - K.col(j).dot(y);
        out(j) = std::sqrt(std::max(0.0, radicand));
    }
    return out;
}

double rmse(const Eigen::VectorXd& predicted, const Eigen::VectorXd& truth) {
    if (predicted.size() != truth.size())
        throw std::invalid_argument("rmse: length mismatch");
    if (predicted.size() == 0) throw std::invalid_argument("rmse: empty vectors");
    return std::sqrt((predicted - truth).squaredNorm() /
                     static_cast<double>(predicted.size()));
}

}  // namespace erba
