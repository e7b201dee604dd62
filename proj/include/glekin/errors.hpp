#pragma once

#include <stdexcept>
#include <string>

namespace glekin {

// Bad user input: non-positive parameters, malformed config, out-of-domain argument.
class ValidationError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Numerical failure: confluent poles, resonant exponents, quadrature budget
// exhausted, covariance not positive semidefinite.
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Simulation self-check disagreed with the analytic pipeline beyond tolerance.
class SelfCheckError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace glekin
