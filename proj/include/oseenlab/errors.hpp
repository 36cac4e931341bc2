#pragma once

#include <stdexcept>
#include <string>

namespace oseenlab {

/// Bad inputs: rejected preconditions, malformed configs, contract violations.
/// CLI maps this to exit code 1.
struct validation_error : std::runtime_error {
    explicit validation_error(const std::string& what) : std::runtime_error(what) {}
};

/// Runtime numerical failure: divergence, NaN, non-convergence.
/// CLI maps this to exit code 2.
struct numerical_error : std::runtime_error {
    explicit numerical_error(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace oseenlab
