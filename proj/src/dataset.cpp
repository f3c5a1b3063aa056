#include "erba/dataset.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <vector>

namespace erba {

Eigen::MatrixXd build_grid(int n_side, double lo, double hi, int dim) {
    if (n_side < 2) throw std::invalid_argument("build_grid: n_side must be >= 2");
    if (dim < 1) throw std::invalid_argument("build_grid: dim must be >= 1");
    if (!(hi > lo)) throw std::invalid_argument("build_grid: degenerate box");

    Eigen::Index total = 1;
    for (int k = 0; k < dim; ++k) total *= n_side;

    const Eigen::VectorXd ticks = Eigen::VectorXd::LinSpaced(n_side, lo, hi);
    Eigen::MatrixXd points(total, dim);
    for (Eigen::Index r = 0; r < total; ++r) {
        Eigen::Index rem = r;
        for (int k = dim - 1; k >= 0; --k) {
            points(r, k) = ticks(rem % n_side);
            rem /= n_side;
        }
    }
    return points;
}

namespace {

double van_der_corput(std::uint64_t i, std::uint64_t base) {
    double f = 1.0, value = 0.0;
    while (i > 0) {
        f /= static_cast<double>(base);
        value += f * static_cast<double>(i % base);
        i /= base;
    }
    return value;
}

constexpr std::uint64_t kPrimes[] = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29};

}  // namespace

Eigen::MatrixXd build_halton(Eigen::Index count, double lo, double hi, int dim) {
    if (count < 1) throw std::invalid_argument("build_halton: count must be >= 1");
    if (dim < 1 || dim > 10)
        throw std::invalid_argument("build_halton: dim must be in [1, 10]");
    if (!(hi > lo)) throw std::invalid_argument("build_halton: degenerate box");

    Eigen::MatrixXd points(count, dim);
    for (Eigen::Index i = 0; i < count; ++i)
        for (int k = 0; k < dim; ++k)
            points(i, k) =
                lo + (hi - lo) * van_der_corput(static_cast<std::uint64_t>(i + 1), kPrimes[k]);
    return points;
}

ScalarField builtin_function(const std::string& id) {
    if (id == "paper-runge-2d") {
        return [](Eigen::Ref<const Eigen::VectorXd> x) {
            if (x.size() != 2)
                throw std::invalid_argument("paper-runge-2d expects 2-D points");
            const double dx = x(0) - 0.5;
            const double dy = x(1) + 0.2;
            return 1.0 / (1.0 + dx * dx + dy * dy);
        };
    }
    if (id == "franke-2d") {
        return [](Eigen::Ref<const Eigen::VectorXd> x) {
            if (x.size() != 2) throw std::invalid_argument("franke-2d expects 2-D points");
            const double u = x(0), v = x(1);
            const double a = 0.75 * std::exp(-(std::pow(9 * u - 2, 2) + std::pow(9 * v - 2, 2)) / 4.0);
            const double b = 0.75 * std::exp(-std::pow(9 * u + 1, 2) / 49.0 - (9 * v + 1) / 10.0);
            const double c = 0.5 * std::exp(-(std::pow(9 * u - 7, 2) + std::pow(9 * v - 3, 2)) / 4.0);
            const double d = 0.2 * std::exp(-std::pow(9 * u - 4, 2) - std::pow(9 * v - 7, 2));
            return a + b + c - d;
        };
    }
    if (id == "constant-one") {
        return [](Eigen::Ref<const Eigen::VectorXd>) { return 1.0; };
    }
    if (id == "linear-sum") {
        return [](Eigen::Ref<const Eigen::VectorXd> x) { return x.sum(); };
    }
    throw ConfigError("unknown test function '" + id + "'");
}

Eigen::VectorXd sample_field(const ScalarField& f, const Eigen::MatrixXd& points) {
    Eigen::VectorXd out(points.rows());
    for (Eigen::Index i = 0; i < points.rows(); ++i) out(i) = f(points.row(i).transpose());
    return out;
}

SampledData load_sampled_csv(const std::string& path, int dim, bool with_values) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open dataset file '" + path + "'");

    const int cols = dim + (with_values ? 1 : 0);
    std::vector<std::vector<double>> rows;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        std::vector<double> row;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) row.push_back(std::stod(cell));
        if (static_cast<int>(row.size()) != cols)
            throw ConfigError("dataset file '" + path + "': expected " + std::to_string(cols) +
                              " columns, got " + std::to_string(row.size()));
        rows.push_back(std::move(row));
    }
    if (rows.empty()) throw ConfigError("dataset file '" + path + "' is empty");

    SampledData data;
    data.nodes.resize(static_cast<Eigen::Index>(rows.size()), dim);
    data.values.resize(static_cast<Eigen::Index>(rows.size()));
    for (std::size_t i = 0; i < rows.size(); ++i) {
        for (int k = 0; k < dim; ++k) data.nodes(static_cast<Eigen::Index>(i), k) = rows[i][k];
        data.values(static_cast<Eigen::Index>(i)) =
            with_values ? rows[i][static_cast<std::size_t>(dim)] : 0.0;
    }
    return data;
}

}  // namespace erba
