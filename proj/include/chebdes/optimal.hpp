#pragma once

#include <string>
#include <vector>

#include "chebdes/design.hpp"
#include "chebdes/linalg.hpp"
#include "chebdes/model.hpp"

namespace chebdes {

enum class Verdict { Optimal, NotOptimal, Inconclusive };

std::string verdict_name(Verdict v);

// Outcome of an equivalence-theorem check. max_violation is the signed slack
// of the directional inequality (<= tolerance when the design passes);
// argmax_point is where the worst slack occurs. For the E-criterion,
// lambda_cstar is the Rayleigh quotient of the extremal coefficient vector
// and lambda_2 the second-smallest eigenvalue; their ratio lambda_2 /
// lambda_cstar is the secondary optimality indicator.
struct VerificationReport {
  char criterion = 'E';
  Verdict verdict = Verdict::Inconclusive;
  double lambda_min = 0.0;
  double lambda_2 = 0.0;
  double lambda_cstar = 0.0;
  double max_violation = 0.0;
  double argmax_point = 0.0;
  int multiplicity = 1;
  std::string note;
};

std::string report_to_json(const VerificationReport& r);

// Checks the minimal-eigenvalue directional inequality
// (z^T f(t))^2 / lambda_min <= 1 on a compactified grid plus the support.
// A minimal eigenvalue of multiplicity > 1 is inconclusive unless the model
// carries a constant basis function, whose squared value bounds lambda_min
// universally. Throws rank_error when the information matrix is singular.
VerificationReport verify_E(const ModelSpec& model, const Design& design,
                            int grid_size = 10000);

// Checks (f(t)^T M^- c)^2 <= c^T M^- c on the grid. Nonsingular M decides
// optimal/not-optimal outright. Singular M first tries the pseudo-inverse
// inequality and then searches for a dual certificate (a direction v with
// v^T f(s_j) = +-1 at support, stationary at interior support, |v^T f| <= 1
// on the grid, and (c^T v)^2 matching the design's value); failing both is
// inconclusive. Throws estimability_error when c is outside range(M).
VerificationReport verify_c(const ModelSpec& model, const Design& design,
                            const Vector& c, int grid_size = 10000);

// Variance ratio for estimating the i-th coefficient (1-based): the optimal
// reference value over the design's value. The reference is the alternation
// candidate when it verifies, the one-point closed form where applicable,
// and the grid oracle otherwise.
double efficiency(const ModelSpec& model, const Design& design, int i);

// Grid oracle maximizing lambda_min over weights (multiplicative ascent with
// uniform mixing across a tied minimal eigenspace), followed by pruning,
// merging of adjacent atoms, and local support polishing. Deterministic.
Design brute_force_E(const ModelSpec& model, int grid_size = 200,
                     int weight_iterations = 3000);

// Grid oracle minimizing c^T M^- c by pairwise exchange with exact
// line search, then exact restricted weights on the extracted support and
// local support polishing. Deterministic.
Design brute_force_c(const ModelSpec& model, const Vector& c, int grid_size = 2000,
                     int iterations = 4000);

// One row per parameter value: the model's b[b_index] is replaced by the
// sweep value, the E-candidate built, and lambda_2 / lambda_cstar reported.
// When the information matrix falls below the verifier's rank gate the ratio
// is taken from the raw eigenvalues and message says so. Failing rows carry
// ok = false and the error text; the sweep continues.
struct RatioRow {
  double value = 0.0;
  double ratio = 0.0;
  bool ok = false;
  std::string message;
};

std::vector<RatioRow> eig_ratio_sweep(const ModelSpec& base, int b_index, double from,
                                      double to, int steps, int grid_size = 10000);

}  // namespace chebdes
