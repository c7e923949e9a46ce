#include "chebdes/optimal.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "chebdes/cheb.hpp"
#include "chebdes/errors.hpp"
#include "json.hpp"

namespace chebdes {

namespace {

System model_system(const ModelSpec& model) {
  return model.a ? scaled_system(model) : linearized_system(model);
}

InfoMode model_mode(const ModelSpec& model) {
  return model.a ? InfoMode::Nonlinear : InfoMode::Linearized;
}

std::vector<double> scan_grid(const Interval& iv, int grid_size) {
  const int npts = iv.unbounded ? grid_size : grid_size + 1;
  std::vector<double> tg(npts);
  for (int i = 0; i < npts; ++i) {
    const double u = static_cast<double>(i) / grid_size;
    tg[i] = iv.unbounded ? iv.lo + u / (1.0 - u) : iv.lo + u * (iv.hi - iv.lo);
  }
  return tg;
}

double to_u(const Interval& iv, double t) {
  if (iv.unbounded) {
    const double d = t - iv.lo;
    return d / (1.0 + d);
  }
  return (t - iv.lo) / (iv.hi - iv.lo);
}

double from_u(const Interval& iv, double u) {
  return iv.unbounded ? iv.lo + u / (1.0 - u) : iv.lo + u * (iv.hi - iv.lo);
}

int lambda_multiplicity(const Vector& eigenvalues) {
  const double tol = 1e-8 * std::max(1.0, eigenvalues[0]);
  int count = 0;
  for (double v : eigenvalues)
    if (v - eigenvalues[0] <= tol) ++count;
  return count;
}

bool boundary_point(const Interval& iv, double t) {
  const double eps = 1e-12 * (1.0 + std::abs(t));
  if (std::abs(t - iv.lo) <= eps) return true;
  return !iv.unbounded && std::abs(t - iv.hi) <= eps;
}

// LU solve with one step of iterative refinement; near-collapsed models give
// legitimately ill-conditioned information matrices.
Vector refined_solve(const Matrix& M, const Vector& c) {
  Vector x = solve(M, c);
  Vector res = c;
  const Vector Mx = M * x;
  for (size_t i = 0; i < res.size(); ++i) res[i] -= Mx[i];
  const Vector dx = solve(M, res);
  for (size_t i = 0; i < x.size(); ++i) x[i] += dx[i];
  return x;
}

// Verification tolerance, widened when the conditioning of M genuinely
// limits the achievable accuracy (bounded so a wrong design still fails).
double cond_tol(const Vector& eigenvalues) {
  const double kappa =
      eigenvalues.back() / std::max(eigenvalues.front(), 1e-300);
  return std::min(std::max(1e-6, 100.0 * 2.220446049250313e-16 * kappa), 1e-3);
}

}  // namespace

std::string verdict_name(Verdict v) {
  switch (v) {
    case Verdict::Optimal:
      return "optimal";
    case Verdict::NotOptimal:
      return "not-optimal";
    case Verdict::Inconclusive:
      return "inconclusive";
  }
  return "inconclusive";
}

std::string report_to_json(const VerificationReport& r) {
  nlohmann::json j;
  j["criterion"] = std::string(1, r.criterion);
  j["verdict"] = verdict_name(r.verdict);
  j["lambda_min"] = r.lambda_min;
  if (r.criterion == 'E') {
    j["lambda_2"] = r.lambda_2;
    j["lambda_cstar"] = r.lambda_cstar;
  }
  j["max_violation"] = r.max_violation;
  j["argmax_point"] = r.argmax_point;
  j["multiplicity"] = r.multiplicity;
  if (!r.note.empty()) j["note"] = r.note;
  return j.dump(2);
}

VerificationReport verify_E(const ModelSpec& model, const Design& design,
                            int grid_size) {
  model.validate();
  design.validate(model.interval);
  const System sys = model_system(model);
  const int m = sys.m;
  const SymMatrix M = info_matrix(model, design, model_mode(model));
  const EigenSystem es = sym_eigen(M);

  VerificationReport rep;
  rep.criterion = 'E';
  rep.lambda_min = es.values[0];
  rep.lambda_2 = m > 1 ? es.values[1] : es.values[0];
  if (!(rep.lambda_min > 1e-12 * std::max(es.values[m - 1], 1e-300)))
    throw rank_error("verify_E: information matrix is singular");
  rep.multiplicity = lambda_multiplicity(es.values);

  const ChebyshevSolution extremal = remez(sys, model.interval, {});
  const Vector Mc = M.mat() * extremal.coeffs;
  rep.lambda_cstar = dot(extremal.coeffs, Mc) / dot(extremal.coeffs, extremal.coeffs);

  const double tol = cond_tol(es.values);
  if (tol > 1e-6) rep.note = "tolerance widened for an ill-conditioned information matrix";
  if (rep.multiplicity > 1) {
    // With a constant basis function the matching diagonal entry is the same
    // for every design, so lambda_min can never exceed it; attaining it is a
    // proof of optimality that works even for a tied minimal eigenvalue.
    if (model.s >= 1 && rep.lambda_min >= 1.0 - 1e-9) {
      rep.verdict = Verdict::Optimal;
      rep.note = "minimal eigenvalue attains the constant-coordinate bound";
    } else {
      rep.verdict = Verdict::Inconclusive;
      rep.note = "minimal eigenvalue is not simple";
    }
    return rep;
  }

  const Vector z = es.vectors.col(0);
  double worst = -std::numeric_limits<double>::infinity();
  double arg = design.support[0];
  auto probe = [&](double t) {
    const double v = dot(z, sys.eval(t));
    const double slack = v * v / rep.lambda_min - 1.0;
    if (slack > worst) {
      worst = slack;
      arg = t;
    }
  };
  for (double t : scan_grid(model.interval, grid_size)) probe(t);
  for (double t : design.support) probe(t);
  rep.max_violation = worst;
  rep.argmax_point = arg;

  bool support_extremal = true;
  for (double t : design.support) {
    const double v = dot(z, sys.eval(t));
    if (std::abs(v * v / rep.lambda_min - 1.0) > tol) support_extremal = false;
  }
  const bool ratio_ok = rep.lambda_cstar <= rep.lambda_2 * (1.0 + tol);

  if (worst <= tol && support_extremal && ratio_ok) {
    rep.verdict = Verdict::Optimal;
  } else {
    rep.verdict = Verdict::NotOptimal;
    if (worst > tol)
      rep.note = "directional inequality violated";
    else if (!support_extremal)
      rep.note = "support carries mass at a non-extremal point";
    else
      rep.note = "extremal-vector eigenvalue exceeds the second-smallest";
  }
  return rep;
}

VerificationReport verify_c(const ModelSpec& model, const Design& design,
                            const Vector& c, int grid_size) {
  model.validate();
  design.validate(model.interval);
  const int m = model.m();
  if (static_cast<int>(c.size()) != m)
    throw parameter_error("verify_c: c has the wrong length");
  double csq = 0.0;
  for (double ci : c) csq += ci * ci;
  if (csq == 0.0) throw parameter_error("verify_c: c must be nonzero");

  const System sys = model_system(model);
  const SymMatrix M = info_matrix(model, design, model_mode(model));
  const EigenSystem es = sym_eigen(M);
  const bool nonsingular = es.values[0] > 1e-10 * es.values[m - 1];

  VerificationReport rep;
  rep.criterion = 'c';
  rep.lambda_min = es.values[0];
  rep.lambda_2 = m > 1 ? es.values[1] : es.values[0];
  rep.multiplicity = lambda_multiplicity(es.values);

  Vector x;
  if (nonsingular) {
    x = refined_solve(M.mat(), c);
  } else {
    x = pinv_sym(M).mat() * c;
    const Vector Mx = M.mat() * x;
    double res = 0.0;
    for (int i = 0; i < m; ++i) res += (Mx[i] - c[i]) * (Mx[i] - c[i]);
    if (std::sqrt(res) > 1e-8 * std::sqrt(csq))
      throw estimability_error("verify_c: c is outside the range of the information matrix");
  }
  const double value = dot(c, x);
  if (!(value > 0.0))
    throw estimability_error("verify_c: degenerate variance for the given c");

  const double tol = nonsingular ? cond_tol(es.values) : 1e-6;
  if (tol > 1e-6) rep.note = "tolerance widened for an ill-conditioned information matrix";
  const std::vector<double> tg = scan_grid(model.interval, grid_size);
  double worst = -std::numeric_limits<double>::infinity();
  double arg = design.support[0];
  auto probe = [&](double t) {
    const double v = dot(x, sys.eval(t));
    const double slack = v * v / value - 1.0;
    if (slack > worst) {
      worst = slack;
      arg = t;
    }
  };
  for (double t : tg) probe(t);
  for (double t : design.support) probe(t);
  rep.max_violation = worst;
  rep.argmax_point = arg;

  if (worst <= tol) {
    rep.verdict = Verdict::Optimal;
    return rep;
  }
  if (nonsingular) {
    rep.verdict = Verdict::NotOptimal;
    rep.note = "variance inequality violated";
    return rep;
  }

  // Singular case: the pseudo-inverse is only one generalized inverse, so a
  // failed scan is not a refutation. Search for a dual direction v with
  // v^T f = +-1 at the support (stationary at interior points) and |v^T f|
  // bounded by 1; its certified lower bound (c^T v)^2 must reach the
  // design's value.
  const int p = design.size();
  Matrix FT(m, p);
  for (int j = 0; j < p; ++j) {
    const Vector f = sys.eval(design.support[j]);
    for (int i = 0; i < m; ++i) FT(i, j) = f[i];
  }
  Matrix FtF(p, p);
  Vector Ftc(p, 0.0);
  for (int a = 0; a < p; ++a) {
    for (int b = 0; b < p; ++b)
      for (int i = 0; i < m; ++i) FtF(a, b) += FT(i, a) * FT(i, b);
    for (int i = 0; i < m; ++i) Ftc[a] += FT(i, a) * c[i];
  }
  const Vector theta = pinv_sym(SymMatrix(FtF)).mat() * Ftc;

  std::vector<Vector> rows;
  Vector rhs;
  for (int j = 0; j < p; ++j) {
    rows.push_back(sys.eval(design.support[j]));
    rhs.push_back(theta[j] >= 0.0 ? 1.0 : -1.0);
    if (!boundary_point(model.interval, design.support[j])) {
      rows.push_back(sys.eval_dt(design.support[j]));
      rhs.push_back(0.0);
    }
  }
  const int nr = static_cast<int>(rows.size());
  Matrix A(nr, m);
  for (int r = 0; r < nr; ++r)
    for (int i = 0; i < m; ++i) A(r, i) = rows[r][i];

  Vector v;
  if (nr <= m) {
    Matrix AAt(nr, nr);
    for (int r = 0; r < nr; ++r)
      for (int q = 0; q < nr; ++q) AAt(r, q) = dot(rows[r], rows[q]);
    const Vector y = pinv_sym(SymMatrix(AAt)).mat() * rhs;
    v.assign(m, 0.0);
    for (int r = 0; r < nr; ++r)
      for (int i = 0; i < m; ++i) v[i] += A(r, i) * y[r];
  } else {
    Matrix AtA(m, m);
    Vector Atr(m, 0.0);
    for (int i = 0; i < m; ++i)
      for (int l = 0; l < m; ++l)
        for (int r = 0; r < nr; ++r) AtA(i, l) += A(r, i) * A(r, l);
    for (int i = 0; i < m; ++i)
      for (int r = 0; r < nr; ++r) Atr[i] += A(r, i) * rhs[r];
    v = pinv_sym(SymMatrix(AtA)).mat() * Atr;
  }

  double cres = 0.0;
  for (int r = 0; r < nr; ++r) {
    const double diff = dot(rows[r], v) - rhs[r];
    cres += diff * diff;
  }
  double sup = 0.0;
  double sup_arg = design.support[0];
  auto dual_probe = [&](double t) {
    const double val = std::abs(dot(v, sys.eval(t)));
    if (val > sup) {
      sup = val;
      sup_arg = t;
    }
  };
  for (double t : tg) dual_probe(t);
  for (double t : design.support) dual_probe(t);
  const double cv = dot(c, v);

  if (std::sqrt(cres) <= 1e-8 * (1.0 + norm2(rhs)) && sup <= 1.0 + tol &&
      cv * cv >= value * (1.0 - tol)) {
    rep.verdict = Verdict::Optimal;
    rep.max_violation = sup - 1.0;
    rep.argmax_point = sup_arg;
    rep.note = "dual certificate for a singular information matrix";
  } else {
    rep.verdict = Verdict::Inconclusive;
    rep.note = "singular information matrix; no dual certificate found";
  }
  return rep;
}

namespace {

double design_variance(const ModelSpec& model, const Design& d, const Vector& c) {
  const int m = model.m();
  const SymMatrix M = info_matrix(model, d, model_mode(model));
  const EigenSystem es = sym_eigen(M);
  if (es.values[0] > 1e-13 * std::max(es.values[m - 1], 1e-300))
    return dot(c, refined_solve(M.mat(), c));

  const Vector x = pinv_sym(M).mat() * c;
  const Vector Mx = M.mat() * x;
  double res = 0.0, csq = 0.0;
  for (int i = 0; i < m; ++i) {
    res += (Mx[i] - c[i]) * (Mx[i] - c[i]);
    csq += c[i] * c[i];
  }
  if (std::sqrt(res) > 1e-8 * std::sqrt(csq))
    throw estimability_error("coordinate not estimable under the design");
  return dot(c, x);
}

}  // namespace

double efficiency(const ModelSpec& model, const Design& design, int i) {
  model.validate();
  const int m = model.m();
  if (i < 1 || i > m) throw parameter_error("efficiency: coordinate index out of range");
  Vector ei(m, 0.0);
  ei[i - 1] = 1.0;

  const double vdesign = design_variance(model, design, ei);

  Design ref;
  bool have_ref = false;
  try {
    ref = design_c(model, ei);
    have_ref = verify_c(model, ref, ei).verdict == Verdict::Optimal;
  } catch (const std::exception&) {
    have_ref = false;
  }
  if (!have_ref && model.s == 0 && model.k == 1 && !model.a &&
      model.basis == BasisKind::Rational && model.interval.unbounded) {
    try {
      const OnePointDecision op = design_c_onepoint_k1(model, ei);
      if (verify_c(model, op.design, ei).verdict == Verdict::Optimal) {
        ref = op.design;
        have_ref = true;
      }
    } catch (const std::exception&) {
    }
  }
  if (!have_ref) ref = brute_force_c(model, ei);

  const double vref = design_variance(model, ref, ei);
  return vref / vdesign;
}

namespace {

double lambda_min_of(const std::vector<Vector>& feval, const Vector& w) {
  const int n = static_cast<int>(feval.size());
  const int m = static_cast<int>(feval[0].size());
  Matrix M(m, m);
  for (int j = 0; j < n; ++j) {
    if (w[j] == 0.0) continue;
    for (int r = 0; r < m; ++r)
      for (int s = 0; s <= r; ++s) M(r, s) += w[j] * feval[j][r] * feval[j][s];
  }
  for (int r = 0; r < m; ++r)
    for (int s = r + 1; s < m; ++s) M(r, s) = M(s, r);
  return sym_eigen(SymMatrix(M)).values[0];
}

// Multiplicative weight ascent for lambda_min over a fixed support; keeps the
// best iterate. feval holds f at the support points; w is both the starting
// point and the result.
double ascend_weights(const std::vector<Vector>& feval, Vector& w, int iterations) {
  const int n = static_cast<int>(feval.size());
  const int m = static_cast<int>(feval[0].size());
  double best = -std::numeric_limits<double>::infinity();
  Vector bestw = w;
  for (int it = 0; it <= iterations; ++it) {
    Matrix M(m, m);
    for (int j = 0; j < n; ++j) {
      if (w[j] == 0.0) continue;
      for (int r = 0; r < m; ++r)
        for (int s = 0; s <= r; ++s) M(r, s) += w[j] * feval[j][r] * feval[j][s];
    }
    for (int r = 0; r < m; ++r)
      for (int s = r + 1; s < m; ++s) M(r, s) = M(s, r);
    const EigenSystem es = sym_eigen(SymMatrix(M));
    const double lmin = es.values[0];
    if (lmin > best) {
      best = lmin;
      bestw = w;
    }
    if (it == iterations) break;
    const int q = lambda_multiplicity(es.values);
    double total = 0.0;
    for (int j = 0; j < n; ++j) {
      double dj = 0.0;
      for (int l = 0; l < q; ++l) {
        const double z = dot(es.vectors.col(l), feval[j]);
        dj += z * z;
      }
      w[j] *= dj / q;
      total += w[j];
    }
    if (total <= 0.0) {
      w = bestw;
      break;
    }
    for (double& wj : w) wj /= total;
  }
  w = bestw;
  return best;
}

// Exact weight optimization on a small support: cyclic pairwise mass
// transfers, each resolved by golden-section search on the one-dimensional
// slice (lambda_min is concave along it).
double optimize_weights_small(const std::vector<Vector>& feval, Vector& w, int rounds) {
  const int p = static_cast<int>(feval.size());
  double cur = lambda_min_of(feval, w);
  if (p < 2) return cur;
  const double invphi = 0.6180339887498949;
  for (int r = 0; r < rounds; ++r) {
    bool improved = false;
    for (int i = 0; i < p; ++i) {
      for (int j = 0; j < p; ++j) {
        if (i == j || w[j] <= 0.0) continue;
        const double gmax = w[j];
        auto val = [&](double g) {
          Vector t = w;
          t[i] += g;
          t[j] -= g;
          return lambda_min_of(feval, t);
        };
        double lo = 0.0, hi = gmax;
        double x1 = hi - invphi * (hi - lo), x2 = lo + invphi * (hi - lo);
        double f1 = val(x1), f2 = val(x2);
        for (int gs = 0; gs < 32 && hi - lo > 1e-15; ++gs) {
          if (f1 < f2) {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + invphi * (hi - lo);
            f2 = val(x2);
          } else {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - invphi * (hi - lo);
            f1 = val(x1);
          }
        }
        double g = 0.5 * (lo + hi);
        double fg = val(g);
        if (val(gmax) >= fg) {
          g = gmax;
          fg = val(gmax);
        }
        if (fg > cur * (1.0 + 1e-14) && g > 0.0) {
          w[i] += g;
          w[j] -= g;
          if (w[j] < 0.0) w[j] = 0.0;
          cur = fg;
          improved = true;
        }
      }
    }
    if (!improved) break;
  }
  return cur;
}

}  // namespace

Design brute_force_E(const ModelSpec& model, int grid_size, int weight_iterations) {
  model.validate();
  const System sys = model_system(model);
  const std::vector<double> tg = scan_grid(model.interval, grid_size);
  const int n = static_cast<int>(tg.size());
  std::vector<Vector> feval(n);
  for (int j = 0; j < n; ++j) feval[j] = sys.eval(tg[j]);

  Vector w(n, 1.0 / n);
  ascend_weights(feval, w, weight_iterations);

  // Prune, then merge runs of adjacent grid atoms into single points.
  std::vector<double> pts;
  Vector sw;
  const double cell = 1.0 / grid_size;
  double acc_w = 0.0, acc_tw = 0.0;
  double prev_u = -10.0;
  auto flush = [&]() {
    if (acc_w > 0.0) {
      pts.push_back(acc_tw / acc_w);
      sw.push_back(acc_w);
      acc_w = acc_tw = 0.0;
    }
  };
  for (int j = 0; j < n; ++j) {
    if (w[j] < 1e-6) continue;
    const double u = to_u(model.interval, tg[j]);
    if (u - prev_u > 2.5 * cell) flush();
    acc_w += w[j];
    acc_tw += w[j] * tg[j];
    prev_u = u;
  }
  flush();
  if (pts.empty()) throw iteration_error("brute_force_E: no support extracted", 1.0);

  const int p = static_cast<int>(pts.size());
  auto support_eval = [&](const std::vector<double>& points) {
    std::vector<Vector> fe(points.size());
    for (size_t j = 0; j < points.size(); ++j) fe[j] = sys.eval(points[j]);
    return fe;
  };

  double total0 = 0.0;
  for (double wj : sw) total0 += wj;
  for (double& wj : sw) wj /= total0;
  double lam = optimize_weights_small(support_eval(pts), sw, 40);

  // Local coordinate search in the compactified variable; each accepted move
  // is followed by a weight re-optimization.
  const double ulo = 0.0;
  const double uhi = model.interval.unbounded ? 1.0 - cell / 4.0 : 1.0;
  for (int round = 0; round < 60; ++round) {
    bool improved = false;
    for (int j = 0; j < p; ++j) {
      for (double step = cell; step > 1e-8; step /= 4.0) {
        for (double dir : {1.0, -1.0}) {
          const double u = to_u(model.interval, pts[j]) + dir * step;
          if (u < ulo || u > uhi) continue;
          std::vector<double> trial = pts;
          trial[j] = from_u(model.interval, u);
          bool ordered = true;
          for (size_t l = 1; l < trial.size(); ++l)
            if (!(trial[l - 1] < trial[l])) ordered = false;
          if (!ordered) continue;
          const double tl = lambda_min_of(support_eval(trial), sw);
          if (tl > lam * (1.0 + 1e-13)) {
            pts = trial;
            lam = optimize_weights_small(support_eval(pts), sw, 8);
            improved = true;
          }
        }
      }
    }
    if (!improved) break;
  }

  optimize_weights_small(support_eval(pts), sw, 40);

  Design d;
  double total = 0.0;
  for (int j = 0; j < p; ++j) {
    if (sw[j] < 1e-9) continue;
    d.support.push_back(pts[j]);
    d.weights.push_back(sw[j]);
    total += sw[j];
  }
  for (double& wj : d.weights) wj /= total;
  d.validate(model.interval);
  return d;
}

namespace {

struct RestrictedFit {
  Vector theta;
  double residual = 0.0;
  double value = 0.0;
};

RestrictedFit restricted_c_fit(const System& sys, const std::vector<double>& pts,
                               const Vector& c) {
  const int m = sys.m;
  const int p = static_cast<int>(pts.size());
  Matrix FT(m, p);
  for (int j = 0; j < p; ++j) {
    const Vector f = sys.eval(pts[j]);
    for (int i = 0; i < m; ++i) FT(i, j) = f[i];
  }
  Matrix FtF(p, p);
  Vector Ftc(p, 0.0);
  for (int a = 0; a < p; ++a) {
    for (int b = 0; b < p; ++b)
      for (int i = 0; i < m; ++i) FtF(a, b) += FT(i, a) * FT(i, b);
    for (int i = 0; i < m; ++i) Ftc[a] += FT(i, a) * c[i];
  }
  RestrictedFit fit;
  fit.theta = pinv_sym(SymMatrix(FtF)).mat() * Ftc;
  double sum = 0.0;
  Vector recon(m, 0.0);
  for (int j = 0; j < p; ++j) {
    sum += std::abs(fit.theta[j]);
    for (int i = 0; i < m; ++i) recon[i] += FT(i, j) * fit.theta[j];
  }
  double res = 0.0;
  for (int i = 0; i < m; ++i) res += (recon[i] - c[i]) * (recon[i] - c[i]);
  fit.residual = std::sqrt(res);
  fit.value = sum * sum;
  return fit;
}

}  // namespace

Design brute_force_c(const ModelSpec& model, const Vector& c, int grid_size,
                     int iterations) {
  model.validate();
  const int m = model.m();
  if (static_cast<int>(c.size()) != m)
    throw parameter_error("brute_force_c: c has the wrong length");
  const System sys = model_system(model);
  const std::vector<double> tg = scan_grid(model.interval, grid_size);
  const int n = static_cast<int>(tg.size());
  std::vector<Vector> feval(n);
  for (int j = 0; j < n; ++j) feval[j] = sys.eval(tg[j]);

  // Monotone multiplicative reweighting: mass flows toward points whose
  // squared sensitivity exceeds the current variance, which shrinks the
  // variance at every step and starves the rest of the grid.
  Vector w(n, 1.0 / n);
  for (int it = 0; it < iterations; ++it) {
    Matrix M(m, m);
    for (int j = 0; j < n; ++j) {
      if (w[j] == 0.0) continue;
      for (int r = 0; r < m; ++r)
        for (int s = 0; s <= r; ++s) M(r, s) += w[j] * feval[j][r] * feval[j][s];
    }
    for (int r = 0; r < m; ++r)
      for (int s = r + 1; s < m; ++s) M(r, s) = M(s, r);
    Vector x;
    try {
      x = solve(M, c);
    } catch (const singularity_error&) {
      x = pinv_sym(SymMatrix(M)).mat() * c;
    }
    const double value = dot(c, x);
    if (!(value > 0.0))
      throw iteration_error("brute_force_c: degenerate variance during ascent", 1.0);
    double gmax = 0.0;
    double total = 0.0;
    for (int j = 0; j < n; ++j) {
      const double g = dot(feval[j], x);
      const double ratio = g * g / value;
      if (ratio > gmax) gmax = ratio;
      w[j] *= ratio;
      total += w[j];
    }
    for (double& wj : w) wj /= total;
    if (gmax - 1.0 <= 1e-13) break;
  }

  // Extract support: prune and merge adjacent atoms.
  std::vector<double> pts;
  const double cell = 1.0 / grid_size;
  double acc_w = 0.0, acc_tw = 0.0, prev_u = -10.0;
  auto flush = [&]() {
    if (acc_w > 0.0) {
      pts.push_back(acc_tw / acc_w);
      acc_w = acc_tw = 0.0;
    }
  };
  for (int j = 0; j < n; ++j) {
    if (w[j] < 1e-6) continue;
    const double u = to_u(model.interval, tg[j]);
    if (u - prev_u > 2.5 * cell) flush();
    acc_w += w[j];
    acc_tw += w[j] * tg[j];
    prev_u = u;
  }
  flush();
  if (pts.empty()) throw iteration_error("brute_force_c: no support extracted", 1.0);

  const double csq = std::sqrt(dot(c, c));
  auto objective = [&](const std::vector<double>& points) {
    const RestrictedFit fit = restricted_c_fit(sys, points, c);
    double val = fit.value;
    if (fit.residual > 1e-8 * csq) val += 1e6 * fit.residual / csq;
    return val;
  };

  double best = objective(pts);
  const double ulo = 0.0;
  const double uhi = model.interval.unbounded ? 1.0 - cell / 4.0 : 1.0;
  for (int round = 0; round < 80; ++round) {
    bool improved = false;
    for (size_t j = 0; j < pts.size(); ++j) {
      for (double step = cell; step > 1e-9; step /= 4.0) {
        for (double dir : {1.0, -1.0}) {
          const double u = to_u(model.interval, pts[j]) + dir * step;
          if (u < ulo || u > uhi) continue;
          std::vector<double> trial = pts;
          trial[j] = from_u(model.interval, u);
          bool ordered = true;
          for (size_t l = 1; l < trial.size(); ++l)
            if (!(trial[l - 1] < trial[l])) ordered = false;
          if (!ordered) continue;
          const double val = objective(trial);
          if (val < best * (1.0 - 1e-13)) {
            best = val;
            pts = trial;
            improved = true;
          }
        }
      }
    }
    if (!improved) break;
  }

  const RestrictedFit fit = restricted_c_fit(sys, pts, c);
  Design d;
  double total = 0.0;
  for (size_t j = 0; j < pts.size(); ++j) {
    const double wt = std::abs(fit.theta[j]);
    if (wt < 1e-12) continue;
    d.support.push_back(pts[j]);
    d.weights.push_back(wt);
    total += wt;
  }
  for (double& wj : d.weights) wj /= total;
  d.validate(model.interval);
  return d;
}

std::vector<RatioRow> eig_ratio_sweep(const ModelSpec& base, int b_index, double from,
                                      double to, int steps, int grid_size) {
  if (steps < 1) throw parameter_error("eig_ratio_sweep: steps must be positive");
  if (b_index < 0 || b_index >= base.k)
    throw parameter_error("eig_ratio_sweep: b index out of range");
  std::vector<RatioRow> rows(steps);
  for (int i = 0; i < steps; ++i) {
    const double value =
        steps == 1 ? from : from + (to - from) * i / static_cast<double>(steps - 1);
    rows[i].value = value;
    try {
      ModelSpec model = base;
      model.b[b_index] = value;
      model.validate();
      ChebyshevSolution sol;
      const Design d = design_estar(model, sol);
      try {
        const VerificationReport rep = verify_E(model, d, grid_size);
        rows[i].ratio = rep.lambda_2 / rep.lambda_cstar;
      } catch (const rank_error&) {
        // Nearly coincident parameters push lambda_min below the verifier's
        // rank gate, but both eigenvalues in the ratio sit well above the
        // eps * lambda_max noise floor, so report them directly.
        const SymMatrix M = info_matrix(model, d, model_mode(model));
        const EigenSystem es = sym_eigen(M);
        const double csq = dot(sol.coeffs, sol.coeffs);
        double lcs = dot(sol.coeffs, M.mat() * sol.coeffs) / csq;
        if (!(lcs > 0.0)) lcs = 1.0 / csq;
        rows[i].ratio = es.values[1] / lcs;
        rows[i].message = "rank gate bypassed: ratio taken from raw eigenvalues";
      }
      rows[i].ok = true;
    } catch (const std::exception& e) {
      rows[i].message = e.what();
    }
  }
  return rows;
}

}  // namespace chebdes
