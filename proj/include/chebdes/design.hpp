#pragma once

#include <string>

#include "chebdes/cheb.hpp"
#include "chebdes/linalg.hpp"
#include "chebdes/model.hpp"

namespace chebdes {

// A finite-support probability measure on the design interval.
struct Design {
  Vector support;  // strictly ascending
  Vector weights;  // same length, each > 0, summing to 1 within 1e-12

  int size() const { return static_cast<int>(support.size()); }

  // Type invariants; the Interval overload also requires support points to
  // lie inside the interval. Throws parameter_error.
  void validate() const;
  void validate(const Interval& iv) const;
};

// {"support": [...], "weights": [...]}; floats round-trip exactly.
std::string design_to_json(const Design& d);
Design design_from_json(const std::string& text);

// Two-column CSV with a "point,weight" header; %.17g floats.
std::string design_to_csv(const Design& d);
Design design_from_csv(const std::string& text);

enum class InfoMode { Linearized, Nonlinear };

// M = sum_j w_j f(t_j) f(t_j)^T; Nonlinear conjugates by the inverse of K_a,
// i.e. uses the rescaled regression vector.
SymMatrix info_matrix(const ModelSpec& model, const Design& design,
                      InfoMode mode = InfoMode::Linearized);

enum class WeightMode { EStar, General };

// Weights attached to the alternation points whose collocation matrix is
// F(i,j) = f_i(s_j).
//
//   EStar:   w = J F^{-1} c / |c|^2 with J = diag(-1, 1, -1, ...). Sums to 1
//            when c is the coefficient vector of the extremal polynomial.
//            Entries below -1e-12 raise negative_weight_error; tiny negatives
//            are clamped to zero. Returned exactly as defined.
//   General: |F^{-1} c| normalized to sum 1.
Vector cheb_weights(const Matrix& F, const Vector& c, WeightMode mode);

// Candidate for the E-optimal design: alternation points of the extremal
// polynomial with EStar weights. Uses the rescaled system when model.a is
// present. The overload also hands back the extremal polynomial.
Design design_estar(const ModelSpec& model);
Design design_estar(const ModelSpec& model, ChebyshevSolution& extremal);

// Candidate for the c-optimal design: alternation-point support with General
// weights; zero-weight points are dropped.
Design design_c(const ModelSpec& model, const Vector& c);
Design design_c(const ModelSpec& model, const Vector& c, ChebyshevSolution& extremal);

// Closed form for one rational term (s=0, k=1) on [0, infinity). When
// c2/c1 lies in [1/((1+sqrt2)|b|), 1/|b|] the optimum is the one-point design
// at b + c1/c2; otherwise the two-point alternation candidate applies and is
// returned with its closed-form first weight.
struct OnePointDecision {
  bool one_point;
  Design design;
};
OnePointDecision design_c_onepoint_k1(const ModelSpec& model, const Vector& c);

}  // namespace chebdes
