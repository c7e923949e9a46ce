#pragma once

#include <stdexcept>
#include <string>

namespace chebdes {

// Invalid user-supplied parameters (model, design, config).
class parameter_error : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A basis function was evaluated at one of its poles.
class singularity_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// An iterative solver did not reach its tolerance; carries the last residual.
class iteration_error : public std::runtime_error {
 public:
  iteration_error(const std::string& what, double residual)
      : std::runtime_error(what), residual_(residual) {}
  double residual() const { return residual_; }

 private:
  double residual_;
};

// The function system failed to behave like a Chebyshev system (missing
// alternation points, degenerate collocation matrix, ...).
class chebyshev_violation_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A weight that must be positive came out significantly negative.
class negative_weight_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// c lies outside the range of the information matrix.
class estimability_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A matrix did not have the rank an operation requires.
class rank_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace chebdes
