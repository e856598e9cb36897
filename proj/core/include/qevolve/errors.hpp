#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace qevolve {

struct ArgumentError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct MeshError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ModelError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct NumericError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Configuration parse failure; `key` names the offending entry.
struct ParseError : std::runtime_error {
    std::string key;
    ParseError(const std::string& k, const std::string& what)
        : std::runtime_error(what), key(k) {}
};

/// Iterative method ran out of iterations. Carries the residual it got stuck at
/// and, when available, the per-iteration residual history.
struct ConvergenceError : std::runtime_error {
    double residual = 0.0;
    std::vector<double> residual_history;
    ConvergenceError(const std::string& what, double res,
                     std::vector<double> history = {})
        : std::runtime_error(what), residual(res),
          residual_history(std::move(history)) {}
};

#define QEVOLVE_REQUIRE(cond, msg)                                             \
    do {                                                                       \
        if (!(cond))                                                           \
            throw ::qevolve::ArgumentError(msg);                               \
    } while (0)

} // namespace qevolve
