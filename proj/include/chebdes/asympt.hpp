#pragma once

#include <string>
#include <vector>

#include "chebdes/design.hpp"
#include "chebdes/linalg.hpp"
#include "chebdes/model.hpp"

namespace chebdes {

// Parameter collapse b_i = x + delta * r_i toward a common location x.
struct CollapseSpec {
  double x = 0.0;
  Vector r;       // strictly increasing, one entry per nonlinear term
  double delta = 0.0;

  void validate() const;
  // The base model with b replaced by x + delta * r; validates the result.
  ModelSpec apply(const ModelSpec& base) const;
};

// Leading coefficient vector of the small-separation expansion: s leading
// zeros, then pairs (g_1, g_2, ..., g_{2k}) with
//   g_{2i}   = prod_{j != i} (r_i - r_j)^{-2},
//   g_{2i-1} = -g_{2i} * sum_{j != i} 2 / (r_i - r_j).
// Empty products are 1 and empty sums are 0.
Vector gamma_tilde(const Vector& r, int s);

// Same data placed as the expansion limit direction: the only nonzero
// entries sit at positions s + 2i - 1 (1-based) and carry g_{2i-1}.
Vector gamma_bar(const Vector& r, int s);

// Design that the extremal and coordinate designs approach as delta -> 0:
// Chebyshev points of the collapsed system at x, weighted for the vector c
// (in collapsed-system coordinates). The default c picks the last coordinate.
Design limiting_design(const ModelSpec& model, double x);
Design limiting_design(const ModelSpec& model, double x, const Vector& c);

// Scale constant of the expansion: ((2k-1)!)^2 times the trailing diagonal
// entry of the inverse collapsed-system information matrix at x.
double h_const(const ModelSpec& model, const Design& design, double x);

struct ExpansionRow {
  double delta = 0.0;
  double error = 0.0;     // max-abs entry of delta^(4k-2) * Minv - h * gbar gbar^T
  double lv_error = 0.0;  // self-test residual of the confluent inverse identities
  bool ok = false;
  std::string message;
};

// For each delta, compares the rescaled inverse information matrix of the
// fixed design (under b = x + delta * r) against its rank-one limit.
// Ill-conditioned rows are flagged rather than fatal.
std::vector<ExpansionRow> expansion_check(const ModelSpec& model, double x,
                                          const Vector& r, const Design& design,
                                          const std::vector<double>& delta_list);

struct ConvergenceRow {
  double delta = 0.0;
  double dist_estar = 0.0;
  double dist_c = 0.0;
  bool ok = false;
  std::string message;
};

// Distance between designs with index-matched supports:
// max_j (|point difference| + |weight difference|).
double design_distance(const Design& a, const Design& b);

// For each delta, distances of the extremal design and of the c-weighted
// coordinate design (both at b = x + delta * r) from the limiting design.
// Requires c to have a nonzero component along gamma_tilde(r, s).
std::vector<ConvergenceRow> convergence_check_designs(
    const ModelSpec& model, double x, const Vector& r,
    const std::vector<double>& delta_list);
std::vector<ConvergenceRow> convergence_check_designs(
    const ModelSpec& model, double x, const Vector& r,
    const std::vector<double>& delta_list, const Vector& c);

// Default geometric separation schedule for the checks above.
std::vector<double> default_delta_list();

}  // namespace chebdes
