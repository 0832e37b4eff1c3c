#pragma once

#include <stdexcept>
#include <string>

namespace seqbayes {

// Argument outside the mathematical domain of an operation.
struct DomainError : std::domain_error {
    using std::domain_error::domain_error;
};

// Derivative requested exactly at a kink (classic penalty at pi = 1/2).
struct KinkError : DomainError {
    using DomainError::DomainError;
};

// Iterative root refinement ran out of iterations.
struct ConvergenceError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Invalid run configuration (bad combination of fields, broken invariant).
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Operation requested on a solution regime that does not support it.
struct NotApplicableError : std::logic_error {
    using std::logic_error::logic_error;
};

}  // namespace seqbayes
