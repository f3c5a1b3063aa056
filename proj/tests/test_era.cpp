#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <Eigen/Dense>
#include <cmath>
#include <random>

#include "erba/era.hpp"

using namespace erba;

namespace {

const RadialKernel kMatern{KernelFamily::matern_c0, 1.0};

// Jittered unit-spacing lattice: distinct nodes, Gram conditioning stays
// small for every family at eps = 1.
Eigen::MatrixXd lattice_points(std::mt19937_64& rng, Eigen::Index n, int dim) {
    std::uniform_real_distribution<double> jitter(-0.3, 0.3);
    Eigen::MatrixXd X(n, dim);
    if (dim == 1) {
        for (Eigen::Index i = 0; i < n; ++i) X(i, 0) = static_cast<double>(i) + jitter(rng);
    } else {
        const Eigen::Index side =
            static_cast<Eigen::Index>(std::ceil(std::sqrt(static_cast<double>(n))));
        std::vector<Eigen::Index> cells(static_cast<std::size_t>(side * side));
        std::iota(cells.begin(), cells.end(), Eigen::Index{0});
        std::shuffle(cells.begin(), cells.end(), rng);
        for (Eigen::Index i = 0; i < n; ++i) {
            X(i, 0) = static_cast<double>(cells[static_cast<std::size_t>(i)] / side) + jitter(rng);
            X(i, 1) = static_cast<double>(cells[static_cast<std::size_t>(i)] % side) + jitter(rng);
        }
    }
    return X;
}

Eigen::VectorXd random_values(std::mt19937_64& rng, Eigen::Index n) {
    std::normal_distribution<double> g(0.0, 1.0);
    Eigen::VectorXd f(n);
    for (Eigen::Index i = 0; i < n; ++i) f(i) = g(rng);
    return f;
}

FoldIndexSet random_fold(std::mt19937_64& rng, Eigen::Index n, Eigen::Index rho) {
    std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), Eigen::Index{0});
    std::shuffle(order.begin(), order.end(), rng);
    return FoldIndexSet{{order.begin(), order.begin() + rho}};
}

}  // namespace

TEST_CASE("fold validation") {
    CHECK_THROWS_AS(validate_fold(FoldIndexSet{{}}, 4), std::invalid_argument);
    CHECK_THROWS_AS(validate_fold(FoldIndexSet{{0, 1, 2, 3}}, 4), std::invalid_argument);
    CHECK_THROWS_AS(validate_fold(FoldIndexSet{{1, 1}}, 4), std::invalid_argument);
    CHECK_THROWS_AS(validate_fold(FoldIndexSet{{4}}, 4), std::invalid_argument);
    CHECK_NOTHROW(validate_fold(FoldIndexSet{{3, 0}}, 4));
    CHECK(fold_complement(FoldIndexSet{{3, 0}}, 5) == std::vector<Eigen::Index>{1, 2, 4});
}

TEST_CASE("hadamard_diag") {
    const Eigen::MatrixXd I = Eigen::MatrixXd::Identity(3, 3);
    CHECK(hadamard_diag(I, I).isApprox(Eigen::VectorXd::Ones(3)));

    std::mt19937_64 rng(1);
    Eigen::MatrixXd R = Eigen::MatrixXd::Random(2, 3);
    CHECK(hadamard_diag(R, R.transpose())
              .isApprox(R.rowwise().squaredNorm()));

    Eigen::MatrixXd S = Eigen::MatrixXd::Random(3, 2);
    const Eigen::VectorXd expect = (R * S).diagonal();
    CHECK(hadamard_diag(R, S).isApprox(expect));

    CHECK_THROWS_AS(hadamard_diag(R, R), std::invalid_argument);
}

TEST_CASE("fold_residual_naive on exact cases") {
    std::mt19937_64 rng(2);
    SampledData data;
    data.nodes = lattice_points(rng, 7, 1);

    SUBCASE("zero values give zero residuals") {
        data.values = Eigen::VectorXd::Zero(7);
        const Eigen::VectorXd e = fold_residual_naive(kMatern, data, FoldIndexSet{{1, 4}});
        CHECK(e.cwiseAbs().maxCoeff() == doctest::Approx(0.0));
    }

    SUBCASE("a kernel translate of a training node is reproduced exactly") {
        // f = kappa(., x_0) and node 0 stays in the training set
        data.values.resize(7);
        for (Eigen::Index i = 0; i < 7; ++i)
            data.values(i) = phi(kMatern, (data.nodes.row(i) - data.nodes.row(0)).norm());
        const Eigen::VectorXd e = fold_residual_naive(kMatern, data, FoldIndexSet{{2, 5}});
        CHECK(e.cwiseAbs().maxCoeff() <= 1e-10);
    }
}

TEST_CASE("the two naive residual routes agree") {
    std::mt19937_64 rng(3);
    SampledData data;
    data.nodes = lattice_points(rng, 9, 2);
    data.values = random_values(rng, 9);
    const FoldIndexSet fold = random_fold(rng, 9, 3);

    const Eigen::VectorXd from_kernel = fold_residual_naive(kMatern, data, fold);
    const Eigen::MatrixXd A = gram_matrix(kMatern, data.nodes);
    const Eigen::VectorXd from_gram = fold_residual_naive(A, data.values, fold);
    CHECK((from_kernel - from_gram).cwiseAbs().maxCoeff() <= 1e-10);
}

TEST_CASE("fold_residual_fast reduces to the leave-one-out formula for rho = 1") {
    std::mt19937_64 rng(4);
    SampledData data;
    data.nodes = lattice_points(rng, 8, 2);
    data.values = random_values(rng, 8);
    KernelModel model = KernelModel::fit(kMatern, data);
    const Eigen::MatrixXd& Ainv = model.gram_inverse();

    for (Eigen::Index p = 0; p < 8; ++p) {
        const Eigen::VectorXd e = fold_residual_fast(Ainv, model.coefficients(), FoldIndexSet{{p}});
        // bitwise: both routes perform the same single division
        CHECK(e(0) == model.coefficients()(p) / Ainv(p, p));
    }
}

TEST_CASE("fold_residual_fast equals zero for zero data") {
    std::mt19937_64 rng(5);
    SampledData data;
    data.nodes = lattice_points(rng, 6, 1);
    data.values = Eigen::VectorXd::Zero(6);
    KernelModel model = KernelModel::fit(kMatern, data);
    const Eigen::VectorXd e =
        fold_residual_fast(model.gram_inverse(), model.coefficients(), FoldIndexSet{{0, 3}});
    CHECK(e.cwiseAbs().maxCoeff() == doctest::Approx(0.0));
}

TEST_CASE("fast residual agrees with the naive oracle") {
    std::mt19937_64 rng(6);
    for (int trial = 0; trial < 25; ++trial) {
        const Eigen::Index n = 5 + static_cast<Eigen::Index>(rng() % 46);
        const int dim = 1 + static_cast<int>(rng() % 2);
        const Eigen::Index rho = std::min<Eigen::Index>(
            n - 1, std::vector<Eigen::Index>{1, 2, 3, 5}[rng() % 4]);
        const KernelFamily family =
            (rng() % 2) ? KernelFamily::matern_c0 : KernelFamily::gaussian;
        const RadialKernel kernel{family, 1.0};

        SampledData data;
        data.nodes = lattice_points(rng, n, dim);
        data.values = random_values(rng, n);
        const FoldIndexSet fold = random_fold(rng, n, rho);

        KernelModel model = KernelModel::fit(kernel, data);
        const Eigen::VectorXd fast =
            fold_residual_fast(model.gram_inverse(), model.coefficients(), fold);
        const Eigen::VectorXd naive = fold_residual_naive(kernel, data, fold);
        const double rel = (fast - naive).norm() / std::max(naive.norm(), 1e-300);
        CHECK(rel <= 1e-6);
    }
}

TEST_CASE("fold_power_naive on exact cases") {
    // two nodes at distance r, fold = one of them: sqrt(1 - phi(r)^2)
    Eigen::MatrixXd X(2, 1);
    X << 0.0, 1.3;
    const double expect = std::sqrt(1.0 - std::pow(std::exp(-1.3), 2));
    CHECK(fold_power_naive(kMatern, X, FoldIndexSet{{1}})(0) == doctest::Approx(expect));

    const Eigen::MatrixXd A = gram_matrix(kMatern, X);
    CHECK(fold_power_naive(A, FoldIndexSet{{1}})(0) == doctest::Approx(expect));
}

TEST_CASE("fold_power_fast on a synthetic identity Gram") {
    // orthonormal limit: A = A^-1 = I makes every power value exactly 1
    const Eigen::MatrixXd I = Eigen::MatrixXd::Identity(6, 6);
    const Eigen::VectorXd P = fold_power_fast(I, I, FoldIndexSet{{1, 4}});
    CHECK(P.isApprox(Eigen::VectorXd::Ones(2)));
}

TEST_CASE("fold_power_fast matches the two-node closed form") {
    Eigen::MatrixXd X(2, 1);
    X << 0.0, 0.9;
    SampledData data{X, Eigen::VectorXd::Zero(2)};
    KernelModel model = KernelModel::fit(kMatern, data);
    const double expect = std::sqrt(1.0 - std::pow(std::exp(-0.9), 2));
    const Eigen::VectorXd P =
        fold_power_fast(model.gram(), model.gram_inverse(), FoldIndexSet{{0}});
    CHECK(P(0) == doctest::Approx(expect));
}

TEST_CASE("fast power agrees with the naive oracle and stays in [0, 1]") {
    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 25; ++trial) {
        const Eigen::Index n = 5 + static_cast<Eigen::Index>(rng() % 46);
        const int dim = 1 + static_cast<int>(rng() % 2);
        const Eigen::Index rho = std::min<Eigen::Index>(
            n - 1, std::vector<Eigen::Index>{1, 2, 3, 5}[rng() % 4]);
        const KernelFamily family =
            (rng() % 2) ? KernelFamily::matern_c0 : KernelFamily::gaussian;
        const RadialKernel kernel{family, 1.0};

        SampledData data;
        data.nodes = lattice_points(rng, n, dim);
        data.values = random_values(rng, n);
        const FoldIndexSet fold = random_fold(rng, n, rho);

        KernelModel model = KernelModel::fit(kernel, data);
        const Eigen::VectorXd fast =
            fold_power_fast(model.gram(), model.gram_inverse(), fold);
        const Eigen::VectorXd naive = fold_power_naive(kernel, data.nodes, fold);
        CHECK((fast - naive).cwiseAbs().maxCoeff() <= 1e-6);
        CHECK(fast.minCoeff() >= 0.0);
        CHECK(fast.maxCoeff() <= 1.0);
    }
}

TEST_CASE("a 12-node 2-D instance matches the oracle tightly") {
    std::mt19937_64 rng(8);
    SampledData data;
    data.nodes = lattice_points(rng, 12, 2);
    data.values = random_values(rng, 12);
    const FoldIndexSet fold = random_fold(rng, 12, 3);

    KernelModel model = KernelModel::fit(kMatern, data);
    const Eigen::VectorXd fast_e =
        fold_residual_fast(model.gram_inverse(), model.coefficients(), fold);
    const Eigen::VectorXd naive_e = fold_residual_naive(kMatern, data, fold);
    CHECK((fast_e - naive_e).norm() / naive_e.norm() <= 1e-8);

    const Eigen::VectorXd fast_p = fold_power_fast(model.gram(), model.gram_inverse(), fold);
    const Eigen::VectorXd naive_p = fold_power_naive(kMatern, data.nodes, fold);
    CHECK((fast_p - naive_p).cwiseAbs().maxCoeff() <= 1e-7);
}
