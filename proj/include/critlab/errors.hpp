#pragma once

#include <stdexcept>
#include <string>

namespace critlab {

// Error taxonomy shared by library and CLI. The CLI maps these onto its
// exit-code contract (see tools/critlab.cpp).

struct NotPrimitiveError : std::runtime_error {
    explicit NotPrimitiveError(const std::string& what) : std::runtime_error(what) {}
};

struct NotCriticalError : std::runtime_error {
    double lambda1;
    explicit NotCriticalError(double lam, const std::string& what)
        : std::runtime_error(what), lambda1(lam) {}
};

struct NonConvergenceError : std::runtime_error {
    explicit NonConvergenceError(const std::string& what) : std::runtime_error(what) {}
};

struct DimensionMismatchError : std::invalid_argument {
    explicit DimensionMismatchError(const std::string& what) : std::invalid_argument(what) {}
};

struct InvalidConfigError : std::invalid_argument {
    explicit InvalidConfigError(const std::string& what) : std::invalid_argument(what) {}
};

struct NumericOverflowError : std::runtime_error {
    explicit NumericOverflowError(const std::string& what) : std::runtime_error(what) {}
};

struct NegativeDriftError : std::runtime_error {
    explicit NegativeDriftError(const std::string& what) : std::runtime_error(what) {}
};

struct NoDivergentTrajectoriesError : std::runtime_error {
    explicit NoDivergentTrajectoriesError(const std::string& what) : std::runtime_error(what) {}
};

} // namespace critlab
