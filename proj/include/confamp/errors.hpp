#pragma once

#include <stdexcept>
#include <string>

namespace confamp {

// Invalid argument outside an operation's domain (bad half-integer, negative
// degree, λ below the supported range, ...).
class validation_error : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

// Evaluation requested on a coincident-point configuration (x = 0).
class diagonal_singularity : public std::domain_error {
public:
  diagonal_singularity() : std::domain_error("propagator evaluated on the diagonal (x = 0)") {}
  using std::domain_error::domain_error;
};

// A quadrature or series did not reach its tolerance.
class non_convergence : public std::runtime_error {
public:
  non_convergence(const std::string &what, double achieved)
      : std::runtime_error(what + " (achieved error estimate " + std::to_string(achieved) + ")"),
        achieved_error(achieved) {}

  double achieved_error;
};

} // namespace confamp
