#include "erba/era.hpp"

#include <algorithm>
#include <cmath>

namespace erba {

void validate_fold(const FoldIndexSet& fold, Eigen::Index n) {
    const Eigen::Index rho = fold.size();
    if (rho < 1) throw std::invalid_argument("fold is empty");
    if (rho >= n) throw std::invalid_argument("fold must leave a nonempty complement");
    std::vector<bool> seen(static_cast<std::size_t>(n), false);
    for (Eigen::Index idx : fold.indices) {
        if (idx < 0 || idx >= n) throw std::invalid_argument("fold index out of range");
        if (seen[static_cast<std::size_t>(idx)])
            throw std::invalid_argument("fold contains a repeated index");
        seen[static_cast<std::size_t>(idx)] = true;
    }
}

std::vector<Eigen::Index> fold_complement(const FoldIndexSet& fold, Eigen::Index n) {
    std::vector<bool> in_fold(static_cast<std::size_t>(n), false);
    for (Eigen::Index idx : fold.indices) in_fold[static_cast<std::size_t>(idx)] = true;
    std::vector<Eigen::Index> out;
    out.reserve(static_cast<std::size_t>(n - fold.size()));
    for (Eigen::Index i = 0; i < n; ++i)
        if (!in_fold[static_cast<std::size_t>(i)]) out.push_back(i);
    return out;
}

Eigen::VectorXd hadamard_diag(const Eigen::MatrixXd& R, const Eigen::MatrixXd& S) {
    if (R.cols() != S.rows() || R.rows() != S.cols())
        throw std::invalid_argument("hadamard_diag: shapes not conformable");
    return (R.array() * S.transpose().array()).rowwise().sum();
}

Eigen::VectorXd fold_residual_naive(const RadialKernel& kernel, const SampledData& data,
                                    const FoldIndexSet& fold) {
    const Eigen::Index n = data.size();
    validate_fold(fold, n);
    const auto training = fold_complement(fold, n);
    const KernelModel model = KernelModel::fit(kernel, subset(data, training));
    const Eigen::MatrixXd fold_nodes = data.nodes(fold.indices, Eigen::all);
    return data.values(fold.indices) - model.evaluate(fold_nodes);
}

Eigen::VectorXd fold_residual_naive(const Eigen::MatrixXd& gram,
                                    const Eigen::VectorXd& values,
                                    const FoldIndexSet& fold) {
    const Eigen::Index n = gram.rows();
    if (gram.cols() != n) throw std::invalid_argument("gram must be square");
    if (values.size() != n) throw std::invalid_argument("values length mismatch");
    validate_fold(fold, n);
    const auto training = fold_complement(fold, n);

    const auto fac = spd_factorize(gram(training, training));
    const Eigen::VectorXd c = fac.llt.solve(values(training));
    // kernel cross block between fold nodes and training nodes
    const Eigen::MatrixXd K = gram(fold.indices, training);
    return values(fold.indices) - K * c;
}

Eigen::VectorXd fold_residual_fast(const Eigen::MatrixXd& gram_inverse,
                                   const Eigen::VectorXd& coefficients,
                                   const FoldIndexSet& fold) {
    const Eigen::Index n = gram_inverse.rows();
    if (gram_inverse.cols() != n) throw std::invalid_argument("gram_inverse must be square");
    if (coefficients.size() != n) throw std::invalid_argument("coefficients length mismatch");
    validate_fold(fold, n);

    const Eigen::MatrixXd block = gram_inverse(fold.indices, fold.indices);
    const Eigen::VectorXd cp = coefficients(fold.indices);
    const Eigen::PartialPivLU<Eigen::MatrixXd> lu(block);
    Eigen::VectorXd e = lu.solve(cp);
    if (!e.allFinite()) throw DegenerateFoldError();
    return e;
}

Eigen::VectorXd fold_power_naive(const RadialKernel& kernel, const Eigen::MatrixXd& X,
                                 const FoldIndexSet& fold) {
    validate_fold(fold, X.rows());
    const auto training = fold_complement(fold, X.rows());
    return power_direct(kernel, X(training, Eigen::all), X(fold.indices, Eigen::all));
}

Eigen::VectorXd fold_power_naive(const Eigen::MatrixXd& gram, const FoldIndexSet& fold) {
    const Eigen::Index n = gram.rows();
    if (gram.cols() != n) throw std::invalid_argument("gram must be square");
    validate_fold(fold, n);
    const auto training = fold_complement(fold, n);

    const auto fac = spd_factorize(gram(training, training));
    const Eigen::MatrixXd K = gram(training, fold.indices);  // (n-rho) x rho
    const Eigen::MatrixXd Y = fac.llt.solve(K);
    const Eigen::Index rho = fold.size();
    Eigen::VectorXd out(rho);
    for (Eigen::Index j = 0; j < rho; ++j) {
        const double radicand = gram(fold.indices[j], fold.indices[j]) - K.col(j).dot(Y.col(j));
        out(j) = std::sqrt(std::max(0.0, radicand));
    }
    return out;
}

Eigen::VectorXd fold_power_fast(const Eigen::MatrixXd& gram,
                                const Eigen::MatrixXd& gram_inverse,
                                const FoldIndexSet& fold) {
    const Eigen::Index n = gram.rows();
    if (gram.cols() != n || gram_inverse.rows() != n || gram_inverse.cols() != n)
        throw std::invalid_argument("gram and gram_inverse must be square of equal size");
    validate_fold(fold, n);

    const Eigen::MatrixXd block = gram_inverse(fold.indices, fold.indices);
    const Eigen::MatrixXd rows = gram_inverse(fold.indices, Eigen::all);  // rho x n
    const Eigen::PartialPivLU<Eigen::MatrixXd> lu(block);
    const Eigen::MatrixXd B = lu.solve(rows);
    const Eigen::VectorXd radicand = hadamard_diag(B, gram(Eigen::all, fold.indices));
    if (!radicand.allFinite()) throw DegenerateFoldError();
    return radicand.cwiseMax(0.0).cwiseSqrt();
}

}  // namespace erba
