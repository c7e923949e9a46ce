#include "chebdes/cheb.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <random>
#include <stdexcept>
#include <string>

#include "chebdes/errors.hpp"

namespace chebdes {

System linearized_system(const ModelSpec& model) {
  System sys;
  sys.m = model.m();
  sys.eval = [model](double t) { return eval_f(model, t); };
  sys.eval_dt = [model](double t) { return eval_f_dt(model, t); };
  return sys;
}

System scaled_system(const ModelSpec& model) {
  const Vector kad = ka_diag(model);
  System sys;
  sys.m = model.m();
  sys.eval = [model, kad](double t) {
    Vector f = eval_f(model, t);
    for (size_t i = 0; i < f.size(); ++i) f[i] /= kad[i];
    return f;
  };
  sys.eval_dt = [model, kad](double t) {
    Vector g = eval_f_dt(model, t);
    for (size_t i = 0; i < g.size(); ++i) g[i] /= kad[i];
    return g;
  };
  return sys;
}

System collapsed_system(const ModelSpec& model, double x) {
  System sys;
  sys.m = model.m();
  sys.eval = [model, x](double t) { return eval_fbar(model, t, x); };
  sys.eval_dt = [model, x](double t) { return eval_fbar_dt(model, t, x); };
  return sys;
}

namespace {

// Compactified coordinate: u in [0,1] <-> t. Infinite intervals use the
// Moebius map t = lo + u/(1-u) so that a uniform u-grid reaches far out.
struct UMap {
  Interval iv;

  double to_t(double u) const {
    return iv.unbounded ? iv.lo + u / (1.0 - u) : iv.lo + u * (iv.hi - iv.lo);
  }
  double to_u(double t) const {
    if (iv.unbounded) {
      const double d = t - iv.lo;
      return d / (1.0 + d);
    }
    return (t - iv.lo) / (iv.hi - iv.lo);
  }
};

struct Extremum {
  double t;
  double value;  // signed e(t)
};

double golden_max_abs(const std::function<double(double)>& e, double lo, double hi) {
  const double invphi = 0.6180339887498949;
  double a = lo, b = hi;
  double x1 = b - invphi * (b - a);
  double x2 = a + invphi * (b - a);
  double f1 = std::abs(e(x1));
  double f2 = std::abs(e(x2));
  for (int it = 0; it < 120; ++it) {
    if (b - a <= 1e-13 * (1.0 + std::abs(a) + std::abs(b))) break;
    if (f1 < f2) {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + invphi * (b - a);
      f2 = std::abs(e(x2));
    } else {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - invphi * (b - a);
      f1 = std::abs(e(x1));
    }
  }
  double best = 0.5 * (a + b);
  double fbest = std::abs(e(best));
  for (double cand : {lo, hi}) {
    const double fc = std::abs(e(cand));
    if (fc > fbest) {
      fbest = fc;
      best = cand;
    }
  }
  return best;
}

}  // namespace

ChebyshevSolution remez(const System& sys, const Interval& iv, const RemezOptions& opt) {
  const int m = sys.m;
  if (m < 1) throw parameter_error("remez: empty system");
  if (opt.grid_size < 8 * m) throw parameter_error("remez: grid too coarse");
  const UMap map{iv};

  // Scan grid in u. Infinite intervals stop one step short of u = 1.
  const int N = opt.grid_size;
  const int npts = iv.unbounded ? N : N + 1;
  std::vector<double> tg(npts);
  for (int i = 0; i < npts; ++i) tg[i] = map.to_t(static_cast<double>(i) / N);

  // Initial reference.
  Vector ref(m);
  if (opt.initial_reference) {
    if (static_cast<int>(opt.initial_reference->size()) != m)
      throw parameter_error("remez: initial reference must have m points");
    ref = *opt.initial_reference;
    for (int i = 0; i < m; ++i) {
      if (!iv.contains(ref[i]))
        throw parameter_error("remez: initial reference point outside interval");
      if (i > 0 && !(ref[i - 1] < ref[i]))
        throw parameter_error("remez: initial reference must be ascending");
    }
  } else if (m == 1) {
    ref[0] = map.to_t(0.5);
  } else {
    for (int j = 0; j < m; ++j) {
      const double u = iv.unbounded ? static_cast<double>(j) / m
                                    : static_cast<double>(j) / (m - 1);
      ref[j] = map.to_t(u);
    }
  }

  Vector d(m - 1, 0.0);
  auto err = [&](double t) {
    const Vector f = sys.eval(t);
    double e = f[m - 1];
    for (int j = 0; j < m - 1; ++j) e -= d[j] * f[j];
    return e;
  };
  auto err_dt = [&](double t) {
    const Vector g = sys.eval_dt(t);
    double e = g[m - 1];
    for (int j = 0; j < m - 1; ++j) e -= d[j] * g[j];
    return e;
  };
  // Interior extrema sit where e' crosses zero; bisecting e' pins them far
  // more tightly than the curvature-limited direct maximization.
  auto polish = [&](double lo, double hi, double guess) {
    if (!sys.eval_dt) return guess;
    double glo = err_dt(lo), ghi = err_dt(hi);
    if ((glo < 0.0) == (ghi < 0.0)) return guess;
    for (int it = 0; it < 200 && hi - lo > 1e-15 * (1.0 + std::abs(lo) + std::abs(hi));
         ++it) {
      const double mid = 0.5 * (lo + hi);
      const double gm = err_dt(mid);
      if (gm == 0.0) return mid;
      if ((glo < 0.0) == (gm < 0.0)) {
        lo = mid;
        glo = gm;
      } else {
        hi = mid;
      }
    }
    const double t = 0.5 * (lo + hi);
    return std::abs(err(t)) >= std::abs(err(guess)) ? t : guess;
  };

  ChebyshevSolution sol;
  bool converged = false;
  Vector heights(m, 0.0);
  // With nearly dependent columns (e.g. almost coincident poles) the
  // interpolation solve carries O(kappa*eps) noise and the heights never
  // equalize past that floor; remember the flattest reference seen so the
  // fixed point can still be returned.
  double best_spread = std::numeric_limits<double>::infinity();
  Vector best_ref, best_d, best_heights;

  for (int iter = 0; iter < opt.max_iter; ++iter) {
    sol.iterations = iter + 1;

    // Interpolation step: f_m(s_i) = sum_j d_j f_j(s_i) + (-1)^i osc.
    Matrix A(m, m);
    Vector rhs(m);
    for (int i = 0; i < m; ++i) {
      const Vector f = sys.eval(ref[i]);
      for (int j = 0; j < m - 1; ++j) A(i, j) = f[j];
      A(i, m - 1) = (i % 2 == 0) ? 1.0 : -1.0;
      rhs[i] = f[m - 1];
    }
    Vector x = solve(std::move(A), std::move(rhs));
    for (int j = 0; j < m - 1; ++j) d[j] = x[j];

    // Locate the extrema of |e| on the grid and polish each bracket.
    std::vector<double> ev(npts);
    double sup = 0.0;
    for (int i = 0; i < npts; ++i) {
      ev[i] = err(tg[i]);
      sup = std::max(sup, std::abs(ev[i]));
    }
    if (sup < 1e-300)
      throw chebyshev_violation_error(
          "remez: system is linearly dependent on the grid");

    std::vector<Extremum> cand;
    for (int i = 0; i < npts; ++i) {
      const double ai = std::abs(ev[i]);
      const bool up = (i == 0) || ai >= std::abs(ev[i - 1]);
      const bool down = (i == npts - 1) || ai >= std::abs(ev[i + 1]);
      if (!(up && down) || ai == 0.0) continue;
      const double lo = tg[std::max(0, i - 1)];
      const double hi = tg[std::min(npts - 1, i + 1)];
      double tstar = golden_max_abs(err, lo, hi);
      if (i > 0 && i < npts - 1) tstar = polish(lo, hi, tstar);
      cand.push_back({tstar, err(tstar)});
    }
    std::sort(cand.begin(), cand.end(),
              [](const Extremum& a, const Extremum& b) { return a.t < b.t; });

    // Merge same-sign neighbours, keeping the taller one.
    std::vector<Extremum> alt;
    for (const Extremum& c : cand) {
      if (!alt.empty() && (alt.back().value > 0) == (c.value > 0)) {
        if (std::abs(c.value) > std::abs(alt.back().value)) alt.back() = c;
      } else {
        alt.push_back(c);
      }
    }
    if (static_cast<int>(alt.size()) < m)
      throw chebyshev_violation_error(
          "remez: fewer alternation points than basis functions (" +
          std::to_string(alt.size()) + " < " + std::to_string(m) + ")");
    while (static_cast<int>(alt.size()) > m) {
      if (std::abs(alt.front().value) < std::abs(alt.back().value))
        alt.erase(alt.begin());
      else
        alt.pop_back();
    }

    double move = 0.0;
    for (int i = 0; i < m; ++i) {
      move = std::max(move, std::abs(map.to_u(alt[i].t) - map.to_u(ref[i])));
      ref[i] = alt[i].t;
      heights[i] = std::abs(alt[i].value);
    }
    const double hmax = *std::max_element(heights.begin(), heights.end());
    const double hmin = *std::min_element(heights.begin(), heights.end());
    if ((hmax - hmin) < best_spread * hmax) {
      best_spread = (hmax - hmin) / hmax;
      best_ref = ref;
      best_d = d;
      best_heights = heights;
    }

    // Movement stalls near sqrt(eps) because extremum locations can only be
    // resolved to that accuracy in double; equalized heights are the
    // fixed-point signal in that regime.
    if (move < opt.tol || (hmax - hmin) <= 1e-13 * hmax) {
      converged = true;
      break;
    }
  }

  if (!converged && best_spread <= 1e-7) {
    // The exchange reached its double-precision noise floor instead of the
    // strict gates above. Heights equalized to 1e-7 sit far below every
    // consumer tolerance, so the flattest reference is the answer.
    ref = best_ref;
    d = best_d;
    heights = best_heights;
    converged = true;
  }
  const double h = *std::max_element(heights.begin(), heights.end());
  if (!(h > 0.0)) throw singularity_error("remez: zero oscillation on reference");
  if (!converged) {
    const double hmin = *std::min_element(heights.begin(), heights.end());
    throw iteration_error("remez: exchange did not settle", (h - hmin) / h);
  }

  sol.coeffs.assign(m, 0.0);
  for (int j = 0; j < m - 1; ++j) sol.coeffs[j] = -d[j] / h;
  sol.coeffs[m - 1] = 1.0 / h;
  if (err(ref[0]) > 0.0)
    for (double& c : sol.coeffs) c = -c;
  sol.points = ref;

  auto poly = [&](double t) {
    const Vector f = sys.eval(t);
    double p = 0.0;
    for (int j = 0; j < m; ++j) p += sol.coeffs[j] * f[j];
    return p;
  };
  double residual = 0.0;
  for (int i = 0; i < m; ++i)
    residual = std::max(residual, std::abs(std::abs(poly(ref[i])) - 1.0));
  for (int i = 0; i < npts; ++i)
    residual = std::max(residual, std::abs(poly(tg[i])) - 1.0);
  sol.residual = residual;
  return sol;
}

double chebU(long n, double t) {
  if (n == -1) return 0.0;
  if (n < -1) return -chebU(-n - 2, t);
  double um1 = 1.0;  // U_0
  if (n == 0) return um1;
  double u = 2.0 * t;  // U_1
  for (long i = 1; i < n; ++i) {
    const double next = 2.0 * t * u - um1;
    um1 = u;
    u = next;
  }
  return u;
}

namespace {

// Ascending-power coefficients of prod_i (t - tau_i)^4.
Vector quartic_product_coeffs(const Vector& tau) {
  Vector d{1.0};
  for (double x : tau) {
    const Vector factor{x * x * x * x, -4.0 * x * x * x, 6.0 * x * x, -4.0 * x, 1.0};
    Vector next(d.size() + 4, 0.0);
    for (size_t i = 0; i < d.size(); ++i)
      for (size_t j = 0; j < 5; ++j) next[i + j] += d[i] * factor[j];
    d = std::move(next);
  }
  return d;
}

std::vector<double> interior_roots(const std::function<double(double)>& q) {
  const int N = 10000;
  std::vector<double> roots;
  double tprev = -1.0 + 2.0 / N;
  double qprev = q(tprev);
  for (int i = 2; i < N; ++i) {
    const double t = -1.0 + 2.0 * i / N;
    const double qt = q(t);
    if (qprev == 0.0) {
      roots.push_back(tprev);
    } else if ((qprev < 0.0) != (qt < 0.0)) {
      double lo = tprev, hi = t, qlo = qprev;
      while (hi - lo > 1e-12) {
        const double mid = 0.5 * (lo + hi);
        const double qm = q(mid);
        if (qm == 0.0) {
          lo = hi = mid;
          break;
        }
        if ((qlo < 0.0) != (qm < 0.0))
          hi = mid;
        else {
          lo = mid;
          qlo = qm;
        }
      }
      roots.push_back(0.5 * (lo + hi));
    }
    tprev = t;
    qprev = qt;
  }
  return roots;
}

}  // namespace

Vector closed_form_cheb_points(const Vector& b, int s) {
  if (s != 1)
    throw parameter_error("closed_form_cheb_points: derived only for s = 1");
  const int k = static_cast<int>(b.size());
  if (k < 1) throw parameter_error("closed_form_cheb_points: empty b");
  for (int i = 0; i < k; ++i) {
    if (std::abs(b[i]) <= 1.0)
      throw parameter_error("closed_form_cheb_points: |b| must exceed 1");
    for (int j = i + 1; j < k; ++j)
      if (b[i] == b[j])
        throw parameter_error("closed_form_cheb_points: b entries must be distinct");
  }
  const int m = 1 + 2 * k;

  Vector tau(k);
  for (int i = 0; i < k; ++i) {
    const double root = std::sqrt(b[i] * b[i] - 1.0);
    tau[i] = b[i] - (b[i] > 0 ? root : -root);  // the root inside the unit disc
  }

  auto attempt = [&](const Vector& taus) -> std::vector<double> {
    const Vector d = quartic_product_coeffs(taus);
    auto q = [&](double t) {
      double sum = 0.0;
      for (size_t i = 0; i < d.size(); ++i)
        sum += d[i] * chebU(static_cast<long>(i) - 2 * k - 1, t);
      return sum;
    };
    return interior_roots(q);
  };

  std::vector<double> inner = attempt(tau);
  if (static_cast<int>(inner.size()) != m - 2) {
    std::fprintf(stderr,
                 "closed_form_cheb_points: retrying with reciprocal tau roots\n");
    for (double& x : tau) x = 1.0 / x;
    inner = attempt(tau);
  }
  if (static_cast<int>(inner.size()) != m - 2)
    throw chebyshev_violation_error(
        "closed_form_cheb_points: interior root count mismatch");
  for (size_t i = 1; i < inner.size(); ++i)
    if (inner[i] - inner[i - 1] < 1e-9)
      throw chebyshev_violation_error(
          "closed_form_cheb_points: degenerate (double) interior root");

  Vector pts;
  pts.reserve(m);
  pts.push_back(-1.0);
  pts.insert(pts.end(), inner.begin(), inner.end());
  pts.push_back(1.0);
  return pts;
}

ChebCheckResult is_chebyshev_system(const System& sys, const Interval& iv, int trials,
                                    std::uint64_t seed) {
  if (trials < 1) throw parameter_error("is_chebyshev_system: trials must be positive");
  const int m = sys.m;
  const UMap map{iv};
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u01(0.0, iv.unbounded ? 0.999 : 1.0);

  ChebCheckResult res;
  bool seen_pos = false, seen_neg = false, seen_zero = false;
  Vector pos_tuple, neg_tuple;

  for (int trial = 0; trial < trials; ++trial) {
    Vector u(m);
    bool ok = false;
    while (!ok) {
      for (double& ui : u) ui = u01(rng);
      std::sort(u.begin(), u.end());
      ok = true;
      for (int i = 1; i < m; ++i)
        if (u[i] - u[i - 1] < 1e-9) ok = false;
    }
    Vector t(m);
    for (int i = 0; i < m; ++i) t[i] = map.to_t(u[i]);

    Matrix A(m, m);
    double hadamard = 1.0;
    for (int j = 0; j < m; ++j) {
      const Vector f = sys.eval(t[j]);
      double colsq = 0.0;
      for (int i = 0; i < m; ++i) {
        A(i, j) = f[i];
        colsq += f[i] * f[i];
      }
      hadamard *= std::sqrt(colsq);
    }
    const double det = determinant(A);
    if (std::abs(det) <= 1e-12 * hadamard) {
      seen_zero = true;
    } else if (det > 0.0) {
      seen_pos = true;
      if (pos_tuple.empty()) pos_tuple = t;
    } else {
      seen_neg = true;
      if (neg_tuple.empty()) neg_tuple = t;
    }
    if (seen_pos && seen_neg) break;
  }

  if (seen_pos && seen_neg) {
    res.verdict = ChebVerdict::Violated;
    res.witness = seen_pos ? neg_tuple : pos_tuple;
    if (res.witness.empty()) res.witness = neg_tuple;
  } else if (seen_zero) {
    res.verdict = ChebVerdict::Weak;
  } else {
    res.verdict = ChebVerdict::Strict;
  }
  return res;
}

double cauchy_vandermonde_det(const Vector& T, const Vector& btilde, int s) {
  const int m = static_cast<int>(T.size());
  const int q = m - s;
  if (s < 0 || q < 0) throw parameter_error("cauchy_vandermonde_det: bad split");
  if (static_cast<int>(btilde.size()) != q)
    throw parameter_error("cauchy_vandermonde_det: btilde must have |T| - s entries");
  for (int i = 1; i < m; ++i)
    if (!(T[i - 1] < T[i]))
      throw parameter_error("cauchy_vandermonde_det: T must be strictly ascending");
  for (int i = 0; i < q; ++i)
    for (int j = 0; j < m; ++j)
      if (T[j] == btilde[i])
        throw singularity_error("cauchy_vandermonde_det: point equals a pole");

  double det = ((s * q) % 2 == 0) ? 1.0 : -1.0;
  for (int i = 0; i < m; ++i)
    for (int j = i + 1; j < m; ++j) det *= (T[j] - T[i]);
  for (int i = 0; i < q; ++i)
    for (int j = i + 1; j < q; ++j) det *= (btilde[i] - btilde[j]);
  for (int i = 0; i < q; ++i)
    for (int j = 0; j < m; ++j) det /= (T[j] - btilde[i]);
  return det;
}

}  // namespace chebdes
