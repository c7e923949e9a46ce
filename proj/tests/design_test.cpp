#include "chebdes/design.hpp"

#include <cmath>

#include "chebdes/errors.hpp"
#include "doctest.h"

using namespace chebdes;

namespace {

const double kSqrt2 = std::sqrt(2.0);

ModelSpec rational_ray(double b, int k = 1, double b2 = 0.0) {
  ModelSpec model;
  model.basis = BasisKind::Rational;
  model.s = 0;
  model.k = k;
  model.b = k == 1 ? Vector{b} : Vector{b, b2};
  model.interval = Interval::right_open(0.0);
  return model;
}

ModelSpec line_model() {
  ModelSpec model;
  model.s = 2;
  model.k = 0;
  model.interval = Interval::closed(-1.0, 1.0);
  return model;
}

}  // namespace

TEST_CASE("design validation enforces the measure invariants") {
  Design d{{0.0, 1.0}, {0.5, 0.5}};
  CHECK_NOTHROW(d.validate());
  CHECK_THROWS_AS((Design{{1.0, 0.0}, {0.5, 0.5}}.validate()), parameter_error);
  CHECK_THROWS_AS((Design{{0.0, 1.0}, {0.5, 0.4}}.validate()), parameter_error);
  CHECK_THROWS_AS((Design{{0.0, 1.0}, {1.5, -0.5}}.validate()), parameter_error);
  CHECK_THROWS_AS((Design{{}, {}}.validate()), parameter_error);
  CHECK_THROWS_AS(d.validate(Interval::closed(0.25, 1.0)), parameter_error);
}

TEST_CASE("serialization round-trips are bit exact") {
  const Design d{{0.0, 1.0 / 3.0, kSqrt2}, {0.1, 0.2, 0.7}};
  const Design dj = design_from_json(design_to_json(d));
  const Design dc = design_from_csv(design_to_csv(d));
  for (int i = 0; i < 3; ++i) {
    CHECK(dj.support[i] == d.support[i]);
    CHECK(dj.weights[i] == d.weights[i]);
    CHECK(dc.support[i] == d.support[i]);
    CHECK(dc.weights[i] == d.weights[i]);
  }
  CHECK_THROWS_AS(design_from_json("{\"support\": [0], \"weights\": [1], \"x\": 1}"),
                  parameter_error);
  CHECK_THROWS_AS(design_from_json("[1,2]"), parameter_error);
  CHECK_THROWS_AS(design_from_csv("point,weight\n0.0\n"), parameter_error);
}

TEST_CASE("info_matrix on the straight line") {
  const ModelSpec model = line_model();

  SUBCASE("one-point design gives the rank-one outer product") {
    const SymMatrix M = info_matrix(model, Design{{1.0}, {1.0}});
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) CHECK(M(i, j) == doctest::Approx(1.0));
  }
  SUBCASE("symmetric two-point design gives the identity") {
    const SymMatrix M = info_matrix(model, Design{{-1.0, 1.0}, {0.5, 0.5}});
    CHECK(M(0, 0) == doctest::Approx(1.0));
    CHECK(M(0, 1) == doctest::Approx(0.0));
    CHECK(M(1, 1) == doctest::Approx(1.0));
  }
}

TEST_CASE("info_matrix hand value for the rational ray model") {
  const ModelSpec model = rational_ray(-1.0);
  const SymMatrix M = info_matrix(model, Design{{0.0, kSqrt2}, {0.5, 0.5}});
  const double expected = 0.5 * (1.0 + 1.0 / ((1.0 + kSqrt2) * (1.0 + kSqrt2)));
  CHECK(M(0, 0) == doctest::Approx(expected).epsilon(1e-14));
}

TEST_CASE("info_matrix is affine in design mixtures") {
  const ModelSpec model = rational_ray(-1.5);
  const Design d1{{0.0, 1.0}, {0.3, 0.7}};
  const Design d2{{0.5, 2.0}, {0.6, 0.4}};
  const double alpha = 0.25;
  const Design mix{{0.0, 0.5, 1.0, 2.0},
                   {alpha * 0.3, (1 - alpha) * 0.6, alpha * 0.7, (1 - alpha) * 0.4}};
  const SymMatrix M1 = info_matrix(model, d1);
  const SymMatrix M2 = info_matrix(model, d2);
  const SymMatrix Mm = info_matrix(model, mix);
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      CHECK(Mm(i, j) ==
            doctest::Approx(alpha * M1(i, j) + (1 - alpha) * M2(i, j)).epsilon(1e-12));
}

TEST_CASE("cheb_weights hand example on the line") {
  Matrix F(2, 2);
  F(0, 0) = 1;
  F(0, 1) = 1;
  F(1, 0) = -1;
  F(1, 1) = 1;
  const Vector w = cheb_weights(F, {0.0, 1.0}, WeightMode::EStar);
  CHECK(w[0] == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(w[1] == doctest::Approx(0.5).epsilon(1e-14));
}

TEST_CASE("design_c closed-form weights for coordinate directions") {
  for (double b : {-1.0, -2.0, -0.5}) {
    const ModelSpec model = rational_ray(b);
    const Design d1 = design_c(model, {1.0, 0.0});
    REQUIRE(d1.size() == 2);
    CHECK(d1.support[0] == doctest::Approx(0.0).epsilon(1e-10));
    CHECK(d1.support[1] == doctest::Approx(kSqrt2 * std::abs(b)).epsilon(1e-8));
    CHECK(d1.weights[0] == doctest::Approx((2.0 - kSqrt2) / 4.0).epsilon(1e-8));
    CHECK(d1.weights[1] == doctest::Approx((2.0 + kSqrt2) / 4.0).epsilon(1e-8));

    const Design d2 = design_c(model, {0.0, 1.0});
    CHECK(d2.weights[0] == doctest::Approx(1.0 - 1.0 / kSqrt2).epsilon(1e-8));
    CHECK(d2.weights[1] == doctest::Approx(1.0 / kSqrt2).epsilon(1e-8));
  }
}

TEST_CASE("design_estar closed-form weight for one rational term") {
  const double b = -1.0;
  const ModelSpec model = rational_ray(b);
  const Design d = design_estar(model);
  REQUIRE(d.size() == 2);
  const double w1 = 0.5 * (2.0 - kSqrt2) * (6.0 - 4.0 * kSqrt2 + b * b) /
                    (b * b + 12.0 - 8.0 * kSqrt2);
  CHECK(d.support[0] == doctest::Approx(0.0).epsilon(1e-10));
  CHECK(d.support[1] == doctest::Approx(kSqrt2).epsilon(1e-8));
  CHECK(d.weights[0] == doctest::Approx(w1).epsilon(1e-8));
  CHECK(w1 == doctest::Approx(0.2333).epsilon(5e-4));
}

TEST_CASE("design_estar satisfies the boundary representation identity") {
  // c/|c|^2 = sum_j f(s_j) (-1)^{j+1} w_j over the alternation support.
  ModelSpec models[] = {rational_ray(-1.0), rational_ray(-1.5, 2, -0.5),
                        rational_ray(-2.0)};
  models[2].a = Vector{2.0};
  for (const ModelSpec& model : models) {
    ChebyshevSolution sol;
    const Design d = design_estar(model, sol);
    const System sys = model.a ? scaled_system(model) : linearized_system(model);
    const int m = sys.m;
    const double csq = dot(sol.coeffs, sol.coeffs);
    Vector lhs(m, 0.0);
    for (int j = 0; j < d.size(); ++j) {
      const Vector f = sys.eval(d.support[j]);
      const double sgn = (j % 2 == 0) ? -1.0 : 1.0;
      for (int i = 0; i < m; ++i) lhs[i] += sgn * d.weights[j] * f[i];
    }
    for (int i = 0; i < m; ++i)
      CHECK(lhs[i] == doctest::Approx(sol.coeffs[i] / csq).epsilon(1e-8).scale(1.0));
  }
}

TEST_CASE("extremal coefficient vector is an eigenvector of the information matrix") {
  const ModelSpec model = rational_ray(-1.0);
  ChebyshevSolution sol;
  const Design d = design_estar(model, sol);
  const SymMatrix M = info_matrix(model, d);
  const double csq = dot(sol.coeffs, sol.coeffs);
  const Vector Mc = M.mat() * sol.coeffs;
  for (size_t i = 0; i < Mc.size(); ++i)
    CHECK(Mc[i] == doctest::Approx(sol.coeffs[i] / csq).epsilon(1e-8).scale(1.0));
}

TEST_CASE("design_c with the extremal coefficients reproduces design_estar") {
  const ModelSpec model = rational_ray(-1.5, 2, -0.5);
  ChebyshevSolution sol;
  const Design de = design_estar(model, sol);
  const Design dc = design_c(model, sol.coeffs);
  REQUIRE(de.size() == dc.size());
  for (int i = 0; i < de.size(); ++i) {
    CHECK(de.support[i] == doctest::Approx(dc.support[i]).epsilon(1e-10));
    CHECK(de.weights[i] == doctest::Approx(dc.weights[i]).epsilon(1e-8));
  }
}

TEST_CASE("design_c weights are invariant under scaling of c") {
  const ModelSpec model = rational_ray(-1.0);
  const Design d1 = design_c(model, {1.0, 0.7});
  const Design d2 = design_c(model, {-3.7, -2.59});
  REQUIRE(d1.size() == d2.size());
  for (int i = 0; i < d1.size(); ++i)
    CHECK(d1.weights[i] == doctest::Approx(d2.weights[i]).epsilon(1e-12));
}

TEST_CASE("nonlinear rescaling shifts the E-candidate weights") {
  ModelSpec model = rational_ray(-1.0);
  model.a = Vector{2.0};
  const Design d = design_estar(model);
  REQUIRE(d.size() == 2);
  // Frozen from the scaled-system run; the a=1 case must reduce to the
  // unscaled weight.
  CHECK(d.weights[0] == doctest::Approx(0.18555).epsilon(5e-5));
  ModelSpec unit = rational_ray(-1.0);
  unit.a = Vector{1.0};
  const Design du = design_estar(unit);
  const Design dl = design_estar(rational_ray(-1.0));
  CHECK(du.weights[0] == doctest::Approx(dl.weights[0]).epsilon(1e-10));
}

TEST_CASE("one-point rule for a single rational term") {
  const ModelSpec model = rational_ray(-1.0);

  SUBCASE("ratio inside the arc range gives the one-point design") {
    const OnePointDecision r = design_c_onepoint_k1(model, {1.0, 0.7});
    CHECK(r.one_point);
    REQUIRE(r.design.size() == 1);
    CHECK(r.design.support[0] == doctest::Approx(3.0 / 7.0).epsilon(1e-12));
  }
  SUBCASE("coordinate direction e2 falls back to the alternation candidate") {
    const OnePointDecision r = design_c_onepoint_k1(model, {0.0, 1.0});
    CHECK_FALSE(r.one_point);
    REQUIRE(r.design.size() == 2);
    CHECK(r.design.support[1] == doctest::Approx(kSqrt2).epsilon(1e-12));
    CHECK(r.design.weights[0] == doctest::Approx(1.0 - 1.0 / kSqrt2).epsilon(1e-12));
  }
  SUBCASE("boundary ratio lands on the support endpoint") {
    const OnePointDecision r = design_c_onepoint_k1(model, {1.0, 1.0});
    CHECK(r.one_point);
    CHECK(r.design.support[0] == doctest::Approx(0.0));
  }
  SUBCASE("closed-form candidate weight matches the collocation weights") {
    for (const Vector& c : {Vector{1.0, -0.7}, Vector{1.0, 2.0}, Vector{3.0, 0.2}}) {
      const OnePointDecision r = design_c_onepoint_k1(model, c);
      if (r.one_point) continue;
      const Design dc = design_c(model, c);
      REQUIRE(dc.size() == 2);
      CHECK(r.design.weights[0] == doctest::Approx(dc.weights[0]).epsilon(1e-7));
    }
    const OnePointDecision r = design_c_onepoint_k1(model, {1.0, -0.7});
    CHECK_FALSE(r.one_point);
    CHECK(r.design.weights[0] == doctest::Approx(0.2135167).epsilon(1e-6));
  }
  SUBCASE("rejects models outside its scope") {
    CHECK_THROWS_AS(design_c_onepoint_k1(rational_ray(-1.5, 2, -0.5), {1.0, 0.0}),
                    parameter_error);
  }
}
