#include "chebdes/asympt.hpp"

#include <algorithm>
#include <cmath>

#include "chebdes/cheb.hpp"
#include "chebdes/errors.hpp"

namespace chebdes {

namespace {

void check_r(const Vector& r) {
  if (r.empty()) throw parameter_error("collapse: r must be nonempty");
  for (size_t i = 1; i < r.size(); ++i)
    if (!(r[i - 1] < r[i]))
      throw parameter_error("collapse: r must be strictly increasing");
}

double factorial_sq_2km1(int k) {
  if (k < 1) throw parameter_error("h_const: needs at least one nonlinear term");
  if (k > 8) throw parameter_error("h_const: k larger than 8 is not supported");
  long long f = 1;
  for (int j = 2; j <= 2 * k - 1; ++j) f *= j;
  const double fd = static_cast<double>(f);
  return fd * fd;
}

// Validates that x is an admissible collapsed location for the family by
// probing the family's own parameter rules with a single-term model.
void check_x(const ModelSpec& model, double x) {
  ModelSpec probe = model;
  probe.k = 1;
  probe.b = {x};
  probe.a.reset();
  probe.validate();
}

Vector psi(double z, int n) {
  Vector v(n);
  double p = 1.0;
  for (int i = 0; i < n; ++i) {
    v[i] = p;
    p *= z;
  }
  return v;
}

Vector psi_prime(double z, int n) {
  Vector v(n, 0.0);
  double p = 1.0;
  for (int i = 1; i < n; ++i) {
    v[i] = i * p;
    p *= z;
  }
  return v;
}

// Residual of the confluent Vandermonde inverse against its closed form:
// the even columns of the inverse reproduce polynomials with double zeros at
// the other nodes and unit slope at their own node; the odd columns the
// companion family with unit value. Checked at probe points plus the
// inverse identity itself.
double lv_identity_error(const Vector& r, double delta) {
  const int k = static_cast<int>(r.size());
  const int n = 2 * k;
  Vector d(k);
  for (int i = 0; i < k; ++i) d[i] = r[i] * delta;

  Matrix L(n, n);
  for (int i = 0; i < k; ++i) {
    const Vector p = psi(d[i], n);
    const Vector q = psi_prime(d[i], n);
    for (int j = 0; j < n; ++j) {
      L(2 * i, j) = p[j];
      L(2 * i + 1, j) = q[j];
    }
  }
  const Matrix V = inverse(L);

  double err = 0.0;
  const Matrix LV = L * V;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      err = std::max(err, std::abs(LV(i, j) - (i == j ? 1.0 : 0.0)));

  double span = (k > 1 ? d[k - 1] - d[0] : 0.0);
  if (span <= 0.0) span = std::abs(delta);
  std::vector<double> probes;
  for (int q = 0; q < 5; ++q)
    probes.push_back(d[0] - 0.5 * span + q * 0.5 * span);

  for (int i = 0; i < k; ++i) {
    double S = 0.0;
    for (int j = 0; j < k; ++j)
      if (j != i) S += 2.0 / (d[i] - d[j]);
    for (double z : probes) {
      double even = z - d[i];
      double odd = 1.0 + S * (d[i] - z);
      for (int j = 0; j < k; ++j) {
        if (j == i) continue;
        const double ratio = (z - d[j]) / (d[j] - d[i]);
        even *= ratio * ratio;
        odd *= ratio * ratio;
      }
      const Vector pz = psi(z, n);
      err = std::max(err, std::abs(dot(V.col(2 * i + 1), pz) - even));
      err = std::max(err, std::abs(dot(V.col(2 * i), pz) - odd));
    }
  }
  return err;
}

}  // namespace

void CollapseSpec::validate() const {
  check_r(r);
  if (!(delta > 0.0)) throw parameter_error("collapse: delta must be positive");
}

ModelSpec CollapseSpec::apply(const ModelSpec& base) const {
  validate();
  if (static_cast<int>(r.size()) != base.k)
    throw parameter_error("collapse: r length must match the number of nonlinear terms");
  ModelSpec out = base;
  out.b.resize(r.size());
  for (size_t i = 0; i < r.size(); ++i) out.b[i] = x + delta * r[i];
  out.validate();
  return out;
}

Vector gamma_tilde(const Vector& r, int s) {
  check_r(r);
  if (s < 0) throw parameter_error("gamma_tilde: s must be nonnegative");
  const int k = static_cast<int>(r.size());
  Vector g(s + 2 * k, 0.0);
  for (int i = 0; i < k; ++i) {
    double prod = 1.0;
    double sum = 0.0;
    for (int j = 0; j < k; ++j) {
      if (j == i) continue;
      const double diff = r[i] - r[j];
      prod /= diff * diff;
      sum += 2.0 / diff;
    }
    g[s + 2 * i + 1] = prod;
    g[s + 2 * i] = -prod * sum;
  }
  return g;
}

Vector gamma_bar(const Vector& r, int s) {
  const Vector gt = gamma_tilde(r, s);
  const int k = static_cast<int>(r.size());
  Vector g(s + 2 * k, 0.0);
  for (int i = 0; i < k; ++i) g[s + 2 * i] = gt[s + 2 * i];
  return g;
}

Design limiting_design(const ModelSpec& model, double x) {
  Vector c(model.m(), 0.0);
  c.back() = 1.0;
  return limiting_design(model, x, c);
}

Design limiting_design(const ModelSpec& model, double x, const Vector& c) {
  model.validate();
  check_x(model, x);
  const int m = model.m();
  if (static_cast<int>(c.size()) != m)
    throw parameter_error("limiting_design: c has the wrong length");

  const System sys = collapsed_system(model, x);
  const ChebyshevSolution sol = remez(sys, model.interval, {});
  Matrix F(m, m);
  for (int j = 0; j < m; ++j) {
    const Vector f = sys.eval(sol.points[j]);
    for (int i = 0; i < m; ++i) F(i, j) = f[i];
  }
  const Vector w = cheb_weights(F, c, WeightMode::General);

  Design d;
  for (int j = 0; j < m; ++j) {
    if (w[j] < 1e-12) continue;
    d.support.push_back(sol.points[j]);
    d.weights.push_back(w[j]);
  }
  double total = 0.0;
  for (double wj : d.weights) total += wj;
  for (double& wj : d.weights) wj /= total;
  d.validate(model.interval);
  return d;
}

double h_const(const ModelSpec& model, const Design& design, double x) {
  model.validate();
  design.validate(model.interval);
  check_x(model, x);
  const int m = model.m();
  const double fact2 = factorial_sq_2km1(model.k);

  Matrix M(m, m);
  for (int j = 0; j < design.size(); ++j) {
    const Vector f = eval_fbar(model, design.support[j], x);
    for (int r = 0; r < m; ++r)
      for (int s = 0; s <= r; ++s) M(r, s) += design.weights[j] * f[r] * f[s];
  }
  for (int r = 0; r < m; ++r)
    for (int s = r + 1; s < m; ++s) M(r, s) = M(s, r);

  const EigenSystem es = sym_eigen(SymMatrix(M));
  if (!(es.values[0] > 1e-12 * std::max(es.values[m - 1], 1e-300)))
    throw rank_error("h_const: collapsed information matrix is singular");
  const Matrix Minv = inverse(M);
  return fact2 * Minv(m - 1, m - 1);
}

std::vector<ExpansionRow> expansion_check(const ModelSpec& model, double x,
                                          const Vector& r, const Design& design,
                                          const std::vector<double>& delta_list) {
  model.validate();
  design.validate(model.interval);
  check_r(r);
  if (static_cast<int>(r.size()) != model.k)
    throw parameter_error("expansion_check: r length must match the number of nonlinear terms");
  if (design.size() < model.m())
    throw parameter_error("expansion_check: design needs at least m support points");
  if (delta_list.empty())
    throw parameter_error("expansion_check: delta list must be nonempty");

  const int m = model.m();
  const Vector gbar = gamma_bar(r, model.s);
  const double h = h_const(model, design, x);

  std::vector<ExpansionRow> rows;
  rows.reserve(delta_list.size());
  for (double delta : delta_list) {
    ExpansionRow row;
    row.delta = delta;
    try {
      CollapseSpec cs;
      cs.x = x;
      cs.r = r;
      cs.delta = delta;
      ModelSpec mb = cs.apply(model);
      mb.a.reset();
      const SymMatrix M = info_matrix(mb, design);
      const EigenSystem es = sym_eigen(M);
      if (!(es.values[0] > 1e-14 * std::max(es.values[m - 1], 1e-300)))
        throw rank_error("information matrix numerically singular at this delta");
      const Matrix Minv = inverse(M.mat());
      const double pow_delta = std::pow(delta, 4 * model.k - 2);
      double err = 0.0;
      for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j)
          err = std::max(err,
                         std::abs(pow_delta * Minv(i, j) - h * gbar[i] * gbar[j]));
      row.error = err;
      row.lv_error = lv_identity_error(r, delta);
      row.ok = true;
    } catch (const std::exception& e) {
      row.message = e.what();
    }
    rows.push_back(row);
  }
  return rows;
}

double design_distance(const Design& a, const Design& b) {
  if (a.size() != b.size())
    throw parameter_error("design_distance: designs must have the same number of points");
  double dist = 0.0;
  for (int j = 0; j < a.size(); ++j)
    dist = std::max(dist, std::abs(a.support[j] - b.support[j]) +
                              std::abs(a.weights[j] - b.weights[j]));
  return dist;
}

std::vector<ConvergenceRow> convergence_check_designs(
    const ModelSpec& model, double x, const Vector& r,
    const std::vector<double>& delta_list) {
  Vector c(model.m(), 0.0);
  c.back() = 1.0;
  return convergence_check_designs(model, x, r, delta_list, c);
}

std::vector<ConvergenceRow> convergence_check_designs(
    const ModelSpec& model, double x, const Vector& r,
    const std::vector<double>& delta_list, const Vector& c) {
  model.validate();
  check_r(r);
  if (static_cast<int>(r.size()) != model.k)
    throw parameter_error("convergence_check: r length must match the number of nonlinear terms");
  if (static_cast<int>(c.size()) != model.m())
    throw parameter_error("convergence_check: c has the wrong length");
  if (delta_list.empty())
    throw parameter_error("convergence_check: delta list must be nonempty");

  const Vector gt = gamma_tilde(r, model.s);
  double cg = 0.0, cn = 0.0, gn = 0.0;
  for (size_t i = 0; i < c.size(); ++i) {
    cg += c[i] * gt[i];
    cn += c[i] * c[i];
    gn += gt[i] * gt[i];
  }
  if (std::abs(cg) <= 1e-12 * std::sqrt(cn * gn))
    throw parameter_error(
        "convergence_check: c is orthogonal to the collapse direction "
        "(for a paired even coordinate this happens when the reciprocal "
        "gap sums cancel); the coordinate designs need not converge");

  const Design limit = limiting_design(model, x);

  std::vector<ConvergenceRow> rows;
  rows.reserve(delta_list.size());
  for (double delta : delta_list) {
    ConvergenceRow row;
    row.delta = delta;
    try {
      CollapseSpec cs;
      cs.x = x;
      cs.r = r;
      cs.delta = delta;
      const ModelSpec mb = cs.apply(model);
      row.dist_estar = design_distance(design_estar(mb), limit);
      row.dist_c = design_distance(design_c(mb, c), limit);
      row.ok = true;
    } catch (const std::exception& e) {
      row.message = e.what();
    }
    rows.push_back(row);
  }
  return rows;
}

std::vector<double> default_delta_list() { return {0.4, 0.2, 0.1, 0.05}; }

}  // namespace chebdes
