#include "erba/kernels.hpp"

#include <atomic>
#include <cmath>

namespace erba {

KernelFamily kernel_family_from_string(const std::string& name) {
    if (name == "matern-c0") return KernelFamily::matern_c0;
    if (name == "matern-c2") return KernelFamily::matern_c2;
    if (name == "gaussian") return KernelFamily::gaussian;
    if (name == "inverse-multiquadric") return KernelFamily::inverse_multiquadric;
    throw ConfigError("unknown kernel family '" + name + "'");
}

std::string to_string(KernelFamily family) {
    switch (family) {
        case KernelFamily::matern_c0: return "matern-c0";
        case KernelFamily::matern_c2: return "matern-c2";
        case KernelFamily::gaussian: return "gaussian";
        case KernelFamily::inverse_multiquadric: return "inverse-multiquadric";
    }
    return "unknown";
}

static void check_kernel(const RadialKernel& kernel) {
    if (!(kernel.eps > 0.0))
        throw std::invalid_argument("shape parameter eps must be positive");
}

double phi(const RadialKernel& kernel, double r) {
    check_kernel(kernel);
    if (r < 0.0) throw std::domain_error("phi: negative radius");
    const double s = kernel.eps * r;
    switch (kernel.family) {
        case KernelFamily::matern_c0: return std::exp(-s);
        case KernelFamily::matern_c2: return std::exp(-s) * (1.0 + s);
        case KernelFamily::gaussian: return std::exp(-s * s);
        case KernelFamily::inverse_multiquadric: return 1.0 / std::sqrt(1.0 + s * s);
    }
    throw std::logic_error("phi: unhandled kernel family");
}

Eigen::MatrixXd gram_matrix(const RadialKernel& kernel, const Eigen::MatrixXd& X) {
    check_kernel(kernel);
    const Eigen::Index n = X.rows();
    if (n < 1) throw std::invalid_argument("gram_matrix: empty node set");

    Eigen::MatrixXd A(n, n);
    const double diag = phi(kernel, 0.0);
    std::atomic<bool> duplicate{false};

#pragma omp parallel for schedule(dynamic, 8)
    for (Eigen::Index i = 0; i < n; ++i) {
        A(i, i) = diag;
        for (Eigen::Index j = i + 1; j < n; ++j) {
            const double r = (X.row(i) - X.row(j)).norm();
            if (r == 0.0) duplicate.store(true, std::memory_order_relaxed);
            const double v = phi(kernel, r);
            A(i, j) = v;
            A(j, i) = v;
        }
    }

    if (duplicate.load()) {
        for (Eigen::Index i = 0; i < n; ++i)
            for (Eigen::Index j = i + 1; j < n; ++j)
                if ((X.row(i) - X.row(j)).norm() == 0.0) throw DistinctNodesError(i, j);
    }
    return A;
}

Eigen::MatrixXd cross_matrix(const RadialKernel& kernel, const Eigen::MatrixXd& X,
                             const Eigen::MatrixXd& Y) {
    check_kernel(kernel);
    if (X.cols() != Y.cols())
        throw std::invalid_argument("cross_matrix: dimension mismatch");
    const Eigen::Index n = X.rows();
    const Eigen::Index m = Y.rows();
    if (n < 1 || m < 1) throw std::invalid_argument("cross_matrix: empty point set");

    Eigen::MatrixXd K(n, m);
#pragma omp parallel for schedule(static)
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < m; ++j)
            K(i, j) = phi(kernel, (X.row(i) - Y.row(j)).norm());
    return K;
}

}  // namespace erba
