#pragma once

#include <stdexcept>
#include <string>

namespace mfgs {

/// Bad user input (mesh parameters, config fields, solver preconditions).
/// `field()` names the offending quantity, e.g. "m0.amplitude".
class ValidationError : public std::runtime_error {
public:
    ValidationError(std::string field, const std::string& what)
        : std::runtime_error(field + ": " + what), field_(std::move(field)) {}

    const std::string& field() const { return field_; }

private:
    std::string field_;
};

/// A sparse factorization or iterative solve failed. For the Newton system
/// this signals a numerically singular linearization, which is scientific
/// signal (loss of stability), so it is never masked by regularization.
class LinearSolveError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Raised when an operation defined only at stable equilibria (sensitivity
/// analysis) is requested on a state whose certificate says stable = false.
class UnstableEquilibriumError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace mfgs
