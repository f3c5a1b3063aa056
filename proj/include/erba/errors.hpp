#pragma once

#include <cstddef>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace erba {

// Base class for every error thrown by this library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Two nodes at exactly zero distance; the kernel matrix would be singular.
class DistinctNodesError : public Error {
public:
    DistinctNodesError(std::ptrdiff_t i, std::ptrdiff_t j)
        : Error("duplicate nodes at indices " + std::to_string(i) + " and " +
                std::to_string(j)),
          first(i),
          second(j) {}

    std::ptrdiff_t first;
    std::ptrdiff_t second;
};

// SPD factorization failed at every level of the diagonal-shift ladder.
class SingularSystemError : public Error {
public:
    explicit SingularSystemError(std::vector<double> deltas)
        : Error(describe(deltas)), tried_deltas(std::move(deltas)) {}

    std::vector<double> tried_deltas;

private:
    static std::string describe(const std::vector<double>& deltas) {
        std::ostringstream os;
        os << "SPD factorization failed; tried diagonal shifts {";
        for (std::size_t i = 0; i < deltas.size(); ++i) {
            if (i) os << ", ";
            os << deltas[i];
        }
        os << "}";
        return os.str();
    }
};

// A rho x rho block of the inverse Gram matrix is numerically singular.
class DegenerateFoldError : public Error {
public:
    explicit DegenerateFoldError(std::ptrdiff_t fold_index = -1)
        : Error("numerically degenerate fold" +
                (fold_index >= 0 ? " " + std::to_string(fold_index) : std::string())),
          fold(fold_index) {}

    std::ptrdiff_t fold;
};

// Invalid or unreadable experiment configuration.
class ConfigError : public Error {
public:
    using Error::Error;
};

}  // namespace erba
