#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <Eigen/Dense>
#include <cmath>
#include <random>

#include "erba/interpolation.hpp"

using namespace erba;

namespace {

const RadialKernel kMatern{KernelFamily::matern_c0, 1.0};

Eigen::MatrixXd random_points(std::mt19937_64& rng, Eigen::Index n, int dim,
                              double lo = 0.0, double hi = 1.0) {
    std::uniform_real_distribution<double> u(lo, hi);
    Eigen::MatrixXd X(n, dim);
    for (Eigen::Index i = 0; i < n; ++i)
        for (int k = 0; k < dim; ++k) X(i, k) = u(rng);
    return X;
}

Eigen::VectorXd random_values(std::mt19937_64& rng, Eigen::Index n) {
    std::normal_distribution<double> g(0.0, 1.0);
    Eigen::VectorXd f(n);
    for (Eigen::Index i = 0; i < n; ++i) f(i) = g(rng);
    return f;
}

}  // namespace

TEST_CASE("fit on a single node") {
    SampledData data;
    data.nodes = Eigen::MatrixXd::Constant(1, 2, 0.3);
    data.values = Eigen::VectorXd::Constant(1, 4.2);
    const KernelModel model = KernelModel::fit(kMatern, data);
    CHECK(model.coefficients()(0) == doctest::Approx(4.2));
    CHECK(model.regularization() == 0.0);
}

TEST_CASE("fit with zero values gives zero coefficients") {
    std::mt19937_64 rng(1);
    SampledData data;
    data.nodes = random_points(rng, 12, 2);
    data.values = Eigen::VectorXd::Zero(12);
    const KernelModel model = KernelModel::fit(kMatern, data);
    CHECK(model.coefficients().cwiseAbs().maxCoeff() == doctest::Approx(0.0));
    CHECK(model.evaluate(random_points(rng, 5, 2)).cwiseAbs().maxCoeff() ==
          doctest::Approx(0.0));
}

TEST_CASE("fit reproduces a kernel translate exactly") {
    SampledData data;
    data.nodes.resize(2, 1);
    data.nodes << 0.0, std::log(2.0);
    data.values.resize(2);
    data.values << 1.0, 0.5;  // kappa(., 0) restricted to the nodes
    const KernelModel model = KernelModel::fit(kMatern, data);
    CHECK(model.coefficients()(0) == doctest::Approx(1.0));
    CHECK(model.coefficients()(1) == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("fit input validation") {
    SampledData data;
    data.nodes = Eigen::MatrixXd::Random(3, 2);
    data.values = Eigen::VectorXd::Zero(2);
    CHECK_THROWS_AS(KernelModel::fit(kMatern, data), std::invalid_argument);
}

TEST_CASE("evaluate matches the naive double loop") {
    std::mt19937_64 rng(2);
    SampledData data;
    data.nodes = random_points(rng, 6, 2);
    data.values = random_values(rng, 6);
    const KernelModel model = KernelModel::fit(kMatern, data);

    const Eigen::MatrixXd pts = random_points(rng, 4, 2);
    const Eigen::VectorXd got = model.evaluate(pts);
    for (Eigen::Index j = 0; j < 4; ++j) {
        double expected = 0.0;
        for (Eigen::Index i = 0; i < 6; ++i)
            expected += model.coefficients()(i) *
                        phi(kMatern, (pts.row(j) - data.nodes.row(i)).norm());
        CHECK(got(j) == doctest::Approx(expected));
    }

    CHECK_THROWS_AS(model.evaluate(random_points(rng, 3, 3)), std::invalid_argument);
}

TEST_CASE("interpolation property on the nodes") {
    std::mt19937_64 rng(3);
    for (Eigen::Index n : {10, 60, 200}) {
        SampledData data;
        data.nodes = random_points(rng, n, 2);
        data.values = random_values(rng, n);
        const KernelModel model = KernelModel::fit(kMatern, data);
        const double err =
            (model.evaluate(data.nodes) - data.values).cwiseAbs().maxCoeff();
        CHECK(err <= 1e-6 * (1.0 + data.values.cwiseAbs().maxCoeff()));
    }
}

TEST_CASE("gram_inverse closed forms and residual") {
    SampledData one;
    one.nodes = Eigen::MatrixXd::Zero(1, 1);
    one.values = Eigen::VectorXd::Ones(1);
    KernelModel m1 = KernelModel::fit(kMatern, one);
    CHECK(m1.gram_inverse()(0, 0) == doctest::Approx(1.0));

    // [[1, 1/2], [1/2, 1]] has inverse (1/0.75) [[1, -1/2], [-1/2, 1]]
    SampledData two;
    two.nodes.resize(2, 1);
    two.nodes << 0.0, std::log(2.0);
    two.values = Eigen::VectorXd::Zero(2);
    KernelModel m2 = KernelModel::fit(kMatern, two);
    const Eigen::MatrixXd& inv = m2.gram_inverse();
    CHECK(inv(0, 0) == doctest::Approx(1.0 / 0.75));
    CHECK(inv(0, 1) == doctest::Approx(-0.5 / 0.75));
    CHECK(inv(1, 0) == doctest::Approx(-0.5 / 0.75));
    CHECK((inv - inv.transpose()).cwiseAbs().maxCoeff() == 0.0);

    std::mt19937_64 rng(4);
    SampledData data;
    data.nodes = random_points(rng, 8, 2);
    data.values = random_values(rng, 8);
    KernelModel m8 = KernelModel::fit(kMatern, data);
    const Eigen::MatrixXd residual =
        m8.gram() * m8.gram_inverse() - Eigen::MatrixXd::Identity(8, 8);
    CHECK(residual.cwiseAbs().maxCoeff() <= 1e-8);
    CHECK(m8.inverse_residual_bound() > 0.0);
}

TEST_CASE("power_direct on known cases") {
    // a point coinciding with a node
    SampledData data;
    data.nodes.resize(3, 2);
    data.nodes << 0.0, 0.0, 0.5, 0.1, 0.9, 0.7;
    Eigen::MatrixXd pt = data.nodes.row(1);
    CHECK(power_direct(kMatern, data.nodes, pt)(0) == doctest::Approx(0.0).epsilon(1e-7));

    // single node: P(p) = sqrt(1 - phi(r)^2)
    Eigen::MatrixXd x0(1, 1), p(1, 1);
    x0 << 0.0;
    p << 0.8;
    const double expect = std::sqrt(1.0 - std::pow(std::exp(-0.8), 2));
    CHECK(power_direct(kMatern, x0, p)(0) == doctest::Approx(expect));

    CHECK_THROWS_AS(power_direct(kMatern, Eigen::MatrixXd(0, 1), p),
                    std::invalid_argument);
}

TEST_CASE("power_direct matches the per-point loop with an independent inverse") {
    std::mt19937_64 rng(5);
    const Eigen::MatrixXd X = random_points(rng, 10, 2);
    const Eigen::MatrixXd pts = random_points(rng, 5, 2);
    const Eigen::VectorXd got = power_direct(kMatern, X, pts);

    const Eigen::MatrixXd A = gram_matrix(kMatern, X);
    const Eigen::MatrixXd Ainv = A.inverse();  // LU route, independent of the LLT path
    for (Eigen::Index j = 0; j < pts.rows(); ++j) {
        Eigen::VectorXd k(X.rows());
        for (Eigen::Index i = 0; i < X.rows(); ++i)
            k(i) = phi(kMatern, (pts.row(j) - X.row(i)).norm());
        const double rad = 1.0 - k.dot(Ainv * k);
        CHECK(got(j) == doctest::Approx(std::sqrt(std::max(0.0, rad))).epsilon(1e-9));
    }
}

TEST_CASE("power is nonnegative, bounded by one, and vanishes on the node set") {
    std::mt19937_64 rng(6);
    for (int trial = 0; trial < 20; ++trial) {
        const Eigen::Index n = 5 + static_cast<Eigen::Index>(rng() % 30);
        const Eigen::MatrixXd X = random_points(rng, n, 2);
        const Eigen::VectorXd on_nodes = power_direct(kMatern, X, X);
        CHECK(on_nodes.maxCoeff() <= 1e-6);
        const Eigen::VectorXd off = power_direct(kMatern, X, random_points(rng, 15, 2));
        CHECK(off.minCoeff() >= 0.0);
        CHECK(off.maxCoeff() <= 1.0);
    }
}

TEST_CASE("power grows when nodes are removed") {
    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 10; ++trial) {
        const Eigen::Index n = 10 + static_cast<Eigen::Index>(rng() % 40);
        const Eigen::MatrixXd X = random_points(rng, n, 2);
        const Eigen::Index keep = 3 + static_cast<Eigen::Index>(rng() % (n - 3));
        const Eigen::MatrixXd Y = X.topRows(keep);
        const Eigen::MatrixXd pts = random_points(rng, 12, 2);
        const Eigen::VectorXd with_x = power_direct(kMatern, X, pts);
        const Eigen::VectorXd with_y = power_direct(kMatern, Y, pts);
        CHECK((with_y - with_x).minCoeff() >= -1e-8);
    }
}

TEST_CASE("rmse") {
    Eigen::VectorXd a(2), b(2);
    a << 3.0, 4.0;
    b << 0.0, 0.0;
    CHECK(rmse(a, a) == 0.0);
    CHECK(rmse(a, b) == doctest::Approx(std::sqrt(12.5)));

    std::mt19937_64 rng(8);
    const Eigen::VectorXd p = random_values(rng, 7);
    const Eigen::VectorXd t = random_values(rng, 7);
    double acc = 0.0;
    for (Eigen::Index i = 0; i < 7; ++i) acc += (p(i) - t(i)) * (p(i) - t(i));
    CHECK(rmse(p, t) == doctest::Approx(std::sqrt(acc / 7.0)));

    Eigen::VectorXd short_vec(3);
    CHECK_THROWS_AS(rmse(a, short_vec), std::invalid_argument);
}

TEST_CASE("subset keeps rows in the requested order") {
    std::mt19937_64 rng(9);
    SampledData data;
    data.nodes = random_points(rng, 6, 2);
    data.values = random_values(rng, 6);
    const SampledData sub = subset(data, {4, 1, 3});
    CHECK(sub.size() == 3);
    CHECK(sub.nodes.row(0) == data.nodes.row(4));
    CHECK(sub.values(1) == data.values(1));
    CHECK(sub.values(2) == data.values(3));
}
