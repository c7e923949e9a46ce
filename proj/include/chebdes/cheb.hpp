#pragma once

#include <cstdint>
#include <functional>
#include <optional>

#include "chebdes/model.hpp"

namespace chebdes {

// A finite function system on an interval. eval returns the m function
// values at t; eval_dt (optional) their t-derivatives.
struct System {
  int m = 0;
  std::function<Vector(double)> eval;
  std::function<Vector(double)> eval_dt;
};

System linearized_system(const ModelSpec& model);
// Linearized system premultiplied by K_a^{-1} (nonlinear-model criteria).
System scaled_system(const ModelSpec& model);
System collapsed_system(const ModelSpec& model, double x);

// Result of the equi-oscillation solve: coefficients c of the extremal
// polynomial c^T f with sup norm 1, the m alternation points ascending, the
// verification residual and the iteration count. Sign convention:
// c^T f(points[0]) = -1, alternating +1/-1 afterwards.
struct ChebyshevSolution {
  Vector coeffs;
  Vector points;
  double residual = 0.0;
  int iterations = 0;
};

struct RemezOptions {
  double tol = 1e-12;      // reference movement tolerance (compactified units)
  int max_iter = 100;
  int grid_size = 10000;
  std::optional<Vector> initial_reference;  // m points in t, ascending
};

// Remez exchange for a generalized Chebyshev system: computes the extremal
// polynomial of the system (the best sup-norm approximation of the last
// basis function by the span of the others, rescaled to oscillate between
// -1 and +1). Infinite intervals are handled through u = (t-lo)/(1+t-lo);
// grids and scans run in u, extrema are polished by golden section in t.
//
// Throws chebyshev_violation_error when fewer than m alternation points
// exist, singularity_error on a degenerate reference, and iteration_error
// when the exchange fails to settle within max_iter passes.
ChebyshevSolution remez(const System& sys, const Interval& iv,
                        const RemezOptions& opt = {});

// Chebyshev polynomial of the second kind, extended to negative degree by
// U_{-1} = 0 and U_{-n} = -U_{n-2}.
double chebU(long n, double t);

// Closed-form alternation points for the rational system with one
// polynomial term (s = 1) on [-1, 1]: the roots of
//   (1 - t^2) * sum_i d_i U_{i-2k-1}(t),
// where sum_i d_i t^i expands prod_j (t - tau_j)^4 and tau_j solves
// 2 b_j = tau_j + 1/tau_j with |tau_j| < 1 (the reciprocal root is retried
// automatically if the root count comes out wrong). Requires |b_j| > 1.
Vector closed_form_cheb_points(const Vector& b, int s);

enum class ChebVerdict { Strict, Weak, Violated };

struct ChebCheckResult {
  ChebVerdict verdict = ChebVerdict::Strict;
  Vector witness;  // offending point tuple when verdict == Violated
};

// Randomized collocation-determinant test: draws `trials` ascending
// m-tuples, computes det(f_i(x_j)) and classifies the sign pattern.
ChebCheckResult is_chebyshev_system(const System& sys, const Interval& iv,
                                    int trials, std::uint64_t seed);

// Determinant of the collocation matrix of
//   (1, t, ..., t^{s-1}, 1/(t - btilde_1), ..., 1/(t - btilde_q))
// at the points T (q = |T| - s), in closed form:
//   (-1)^{s q} prod_{i<j}(T_j - T_i) prod_{i<j}(btilde_i - btilde_j)
//     / prod_{i,j}(T_j - btilde_i).
double cauchy_vandermonde_det(const Vector& T, const Vector& btilde, int s);

}  // namespace chebdes
