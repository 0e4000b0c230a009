#pragma once

#include <stdexcept>
#include <string>

namespace stokes {

/// Raised for configurations or arguments that violate a documented precondition.
class InvalidConfig : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// A field was requested inside the crest-exclusion disc of a near-extreme wave.
class StagnationProximity : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

enum class SolverFailure { NonConvergence, SingularJacobian, TailNotResolved };

const char* to_string(SolverFailure kind);

class SolverError : public std::runtime_error {
public:
    SolverError(SolverFailure kind, const std::string& what, int iterations = 0,
                double residual = 0.0)
        : std::runtime_error(what), kind_(kind), iterations_(iterations), residual_(residual) {}

    SolverFailure kind() const noexcept { return kind_; }
    int iterations() const noexcept { return iterations_; }
    double residual() const noexcept { return residual_; }

private:
    SolverFailure kind_;
    int iterations_;
    double residual_;
};

}  // namespace stokes
