#pragma once

#include <functional>
#include <optional>

#include "chebdes/linalg.hpp"

namespace chebdes {

// Regression functions of the form
//
//   f(t) = (1, t, ..., t^{s-1},
//           phi(t,b_1), phi'(t,b_1), ..., phi(t,b_k), phi'(t,b_k))
//
// where phi' differentiates with respect to the second argument. Built-in
// nonlinear families:
//
//   Rational:     phi(t,x) = 1/(t-x)
//   Exponential:  phi(t,x) = exp(t*x)
//   Logarithmic:  phi(t,x) = log(t-x)
enum class BasisKind { Rational, Exponential, Logarithmic, Custom };

// User-supplied family: dphi(t, x, j) returns the j-th derivative of
// phi(t, x) with respect to x (j = 0 means phi itself). dphi_dt, if given,
// returns d/dt of the same quantity and is only needed by the c-optimality
// certificate for singular designs; a finite difference is used otherwise.
struct CustomBasis {
  std::function<double(double t, double x, int j)> dphi;
  std::function<double(double t, double x, int j)> dphi_dt;
};

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
  bool unbounded = false;  // true: [lo, infinity)

  static Interval closed(double lo, double hi) { return {lo, hi, false}; }
  static Interval right_open(double lo) { return {lo, 0.0, true}; }

  bool contains(double t) const { return t >= lo && (unbounded || t <= hi); }
};

struct ModelSpec {
  BasisKind basis = BasisKind::Rational;
  int s = 0;  // number of polynomial terms 1, t, ..., t^{s-1}
  int k = 1;  // number of nonlinear terms
  Vector b;   // nonlinear parameters, ascending, size k
  std::optional<Vector> a;  // optional linear scalings for the nonlinear model
  Interval interval = Interval::right_open(0.0);
  std::optional<CustomBasis> custom;

  int m() const { return s + 2 * k; }

  // Throws parameter_error on an inconsistent specification (wrong b size,
  // poles inside the interval, unbounded basis on an infinite interval, ...).
  void validate() const;
};

// j-th derivative of phi(t, x) with respect to x.
double phi_deriv(const ModelSpec& model, double t, double x, int j);

// d/dt of phi_deriv(model, t, x, j); used by optimality certificates.
double phi_deriv_dt(const ModelSpec& model, double t, double x, int j);

// The regression vector f(t); throws std::domain_error for t outside the
// interval and singularity_error at a pole.
Vector eval_f(const ModelSpec& model, double t);

// d/dt of eval_f.
Vector eval_f_dt(const ModelSpec& model, double t);

// Collapsed-parameter system (all b_i at a common x):
//   (1, ..., t^{s-1}, phi(t,x), phi'(t,x), ..., phi^{(2k-1)}(t,x)).
Vector eval_fbar(const ModelSpec& model, double t, double x);
Vector eval_fbar_dt(const ModelSpec& model, double t, double x);

// Diagonal of K_a = diag(1,...,1, 1, 1/a_1, ..., 1, 1/a_k). Throws
// parameter_error when a is missing or contains a zero.
Vector ka_diag(const ModelSpec& model);

}  // namespace chebdes
