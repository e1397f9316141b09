#pragma once

#include <stdexcept>
#include <string>

namespace fsm {

// Invalid model or operator input.
struct DomainError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Evaluation point too close to a pole of the scattering function.
struct PoleError : std::domain_error {
  using std::domain_error::domain_error;
};

// Boost or translation would move nonzero amplitude off the rapidity grid.
struct SupportError : std::out_of_range {
  using std::out_of_range::out_of_range;
};

// Quadrature or refinement did not reach its tolerance within budget.
struct ConvergenceError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Exponent of a Fourier integrand exceeds the double-precision budget.
struct OverflowError : std::overflow_error {
  using std::overflow_error::overflow_error;
};

}  // namespace fsm
