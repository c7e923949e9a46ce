#include "chebdes/model.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "chebdes/errors.hpp"

namespace chebdes {

namespace {

double factorial(int n) {
  double f = 1.0;
  for (int i = 2; i <= n; ++i) f *= i;
  return f;
}

void check_not_pole(const ModelSpec& model, double t, double x) {
  if ((model.basis == BasisKind::Rational || model.basis == BasisKind::Logarithmic) &&
      t == x)
    throw singularity_error("basis evaluated at its pole t = " + std::to_string(t));
}

}  // namespace

void ModelSpec::validate() const {
  if (s < 0) throw parameter_error("model: s must be nonnegative");
  if (k < 0) throw parameter_error("model: k must be nonnegative");
  if (s + 2 * k < 1) throw parameter_error("model: empty regression function");
  if (k == 0 && a)
    throw parameter_error("model: scalings a require nonlinear terms");
  if (static_cast<int>(b.size()) != k)
    throw parameter_error("model: b must have exactly k entries");
  for (int i = 1; i < k; ++i)
    if (!(b[i - 1] < b[i]))
      throw parameter_error("model: b entries must be strictly ascending");
  if (!interval.unbounded && !(interval.lo < interval.hi))
    throw parameter_error("model: interval must have positive length");
  if (a) {
    if (static_cast<int>(a->size()) != k)
      throw parameter_error("model: a must have exactly k entries");
    for (double ai : *a)
      if (ai == 0.0) throw parameter_error("model: a entries must be nonzero");
  }
  if (basis == BasisKind::Custom) {
    if (!custom || !custom->dphi)
      throw parameter_error("model: custom basis requires a dphi callable");
  } else if (custom) {
    throw parameter_error("model: custom callables given for a built-in basis");
  }
  if (basis == BasisKind::Rational || basis == BasisKind::Logarithmic) {
    for (double bi : b)
      if (interval.contains(bi))
        throw parameter_error("model: pole b = " + std::to_string(bi) +
                              " lies inside the design interval");
  }
  if (interval.unbounded) {
    if (s > 1)
      throw parameter_error(
          "model: polynomial terms beyond the constant are unbounded on an "
          "infinite interval");
    if (basis == BasisKind::Logarithmic)
      throw parameter_error("model: logarithmic basis is unbounded on an infinite interval");
    if (basis == BasisKind::Exponential)
      for (double bi : b)
        if (bi >= 0.0)
          throw parameter_error(
              "model: exponential rates must be negative on an infinite interval");
  }
}

double phi_deriv(const ModelSpec& model, double t, double x, int j) {
  switch (model.basis) {
    case BasisKind::Rational: {
      check_not_pole(model, t, x);
      // d^j/dx^j (t-x)^{-1} = j! (t-x)^{-(j+1)}
      return factorial(j) * std::pow(t - x, -(j + 1));
    }
    case BasisKind::Exponential:
      return std::pow(t, j) * std::exp(t * x);
    case BasisKind::Logarithmic: {
      check_not_pole(model, t, x);
      if (j == 0) {
        if (t - x <= 0.0)
          throw singularity_error("log basis evaluated at nonpositive argument");
        return std::log(t - x);
      }
      // d^j/dx^j log(t-x) = -(j-1)! (t-x)^{-j} for j >= 1
      return -factorial(j - 1) * std::pow(t - x, -j);
    }
    case BasisKind::Custom:
      return model.custom->dphi(t, x, j);
  }
  throw parameter_error("phi_deriv: unknown basis");
}

double phi_deriv_dt(const ModelSpec& model, double t, double x, int j) {
  switch (model.basis) {
    case BasisKind::Rational:
      check_not_pole(model, t, x);
      // d/dt [ j! (t-x)^{-(j+1)} ] = -(j+1)! (t-x)^{-(j+2)}
      return -factorial(j + 1) * std::pow(t - x, -(j + 2));
    case BasisKind::Exponential:
      return (j > 0 ? j * std::pow(t, j - 1) : 0.0) * std::exp(t * x) +
             x * std::pow(t, j) * std::exp(t * x);
    case BasisKind::Logarithmic: {
      check_not_pole(model, t, x);
      if (j == 0) return 1.0 / (t - x);
      return factorial(j) * std::pow(t - x, -(j + 1));
    }
    case BasisKind::Custom: {
      if (model.custom->dphi_dt) return model.custom->dphi_dt(t, x, j);
      const double h = 1e-6 * (1.0 + std::abs(t));
      return (model.custom->dphi(t + h, x, j) - model.custom->dphi(t - h, x, j)) /
             (2.0 * h);
    }
  }
  throw parameter_error("phi_deriv_dt: unknown basis");
}

Vector eval_f(const ModelSpec& model, double t) {
  if (!model.interval.contains(t))
    throw std::domain_error("eval_f: t = " + std::to_string(t) +
                            " outside the design interval");
  Vector f(model.m());
  for (int i = 0; i < model.s; ++i) f[i] = std::pow(t, i);
  for (int i = 0; i < model.k; ++i) {
    f[model.s + 2 * i] = phi_deriv(model, t, model.b[i], 0);
    f[model.s + 2 * i + 1] = phi_deriv(model, t, model.b[i], 1);
  }
  return f;
}

Vector eval_f_dt(const ModelSpec& model, double t) {
  if (!model.interval.contains(t))
    throw std::domain_error("eval_f_dt: t outside the design interval");
  Vector g(model.m());
  for (int i = 0; i < model.s; ++i) g[i] = (i > 0) ? i * std::pow(t, i - 1) : 0.0;
  for (int i = 0; i < model.k; ++i) {
    g[model.s + 2 * i] = phi_deriv_dt(model, t, model.b[i], 0);
    g[model.s + 2 * i + 1] = phi_deriv_dt(model, t, model.b[i], 1);
  }
  return g;
}

Vector eval_fbar(const ModelSpec& model, double t, double x) {
  if (!model.interval.contains(t))
    throw std::domain_error("eval_fbar: t outside the design interval");
  Vector f(model.m());
  for (int i = 0; i < model.s; ++i) f[i] = std::pow(t, i);
  for (int j = 0; j < 2 * model.k; ++j) f[model.s + j] = phi_deriv(model, t, x, j);
  return f;
}

Vector eval_fbar_dt(const ModelSpec& model, double t, double x) {
  if (!model.interval.contains(t))
    throw std::domain_error("eval_fbar_dt: t outside the design interval");
  Vector g(model.m());
  for (int i = 0; i < model.s; ++i) g[i] = (i > 0) ? i * std::pow(t, i - 1) : 0.0;
  for (int j = 0; j < 2 * model.k; ++j) g[model.s + j] = phi_deriv_dt(model, t, x, j);
  return g;
}

Vector ka_diag(const ModelSpec& model) {
  if (!model.a) throw parameter_error("ka_diag: model has no scaling vector a");
  Vector d(model.m(), 1.0);
  for (int i = 0; i < model.k; ++i) {
    const double ai = (*model.a)[i];
    if (ai == 0.0) throw parameter_error("ka_diag: zero entry in a");
    d[model.s + 2 * i + 1] = 1.0 / ai;
  }
  return d;
}

}  // namespace chebdes
