#include <cmath>

#include "chebdes/design.hpp"
#include "chebdes/errors.hpp"
#include "chebdes/model.hpp"
#include "chebdes/optimal.hpp"
#include "doctest.h"

using namespace chebdes;

namespace {

ModelSpec line_model() {
  ModelSpec m;
  m.basis = BasisKind::Rational;
  m.s = 2;
  m.k = 0;
  m.interval = Interval{-1.0, 1.0, false};
  return m;
}

ModelSpec rational_k1(double b) {
  ModelSpec m;
  m.basis = BasisKind::Rational;
  m.s = 0;
  m.k = 1;
  m.b = {b};
  m.interval = Interval{0.0, 0.0, true};
  return m;
}

ModelSpec rational_k2(double b1, double b2) {
  ModelSpec m;
  m.basis = BasisKind::Rational;
  m.s = 0;
  m.k = 2;
  m.b = {b1, b2};
  m.interval = Interval{0.0, 0.0, true};
  return m;
}

}  // namespace

TEST_CASE("E-verification accepts the symmetric two-point design for a line") {
  const ModelSpec m = line_model();
  const Design d{{-1.0, 1.0}, {0.5, 0.5}};
  const VerificationReport rep = verify_E(m, d);
  CHECK(rep.verdict == Verdict::Optimal);
  CHECK(rep.lambda_min == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(rep.multiplicity == 2);
}

TEST_CASE("E-verification rejects a lopsided two-point design for a line") {
  const ModelSpec m = line_model();
  const Design d{{-1.0, 1.0}, {0.25, 0.75}};
  const VerificationReport rep = verify_E(m, d);
  CHECK(rep.verdict == Verdict::NotOptimal);
  CHECK(rep.lambda_min < 1.0);
}

TEST_CASE("E-verification throws on a singular information matrix") {
  const ModelSpec m = line_model();
  const Design d{{0.5}, {1.0}};
  CHECK_THROWS_AS(verify_E(m, d), rank_error);
}

TEST_CASE("E-verification accepts the equi-oscillation design, rational k=1") {
  for (double b : {-0.5, -1.0, -2.0}) {
    const ModelSpec m = rational_k1(b);
    const Design d = design_estar(m);
    const VerificationReport rep = verify_E(m, d);
    CHECK(rep.verdict == Verdict::Optimal);
    CHECK(rep.multiplicity == 1);
    CHECK(rep.lambda_cstar <= rep.lambda_2 * (1.0 + 1e-9));
    CHECK(rep.lambda_cstar == doctest::Approx(rep.lambda_min).epsilon(1e-9));
  }
}

TEST_CASE("E-verification accepts the equi-oscillation design, rational k=2") {
  const ModelSpec m = rational_k2(-1.5, -0.5);
  const Design d = design_estar(m);
  const VerificationReport rep = verify_E(m, d);
  CHECK(rep.verdict == Verdict::Optimal);
  CHECK(rep.max_violation <= 1e-6);
}

TEST_CASE("E-verification rejects wrong weights on the right support") {
  const ModelSpec m = rational_k1(-1.0);
  Design d = design_estar(m);
  d.weights = {0.5, 0.5};
  const VerificationReport rep = verify_E(m, d);
  CHECK(rep.verdict == Verdict::NotOptimal);
}

TEST_CASE("c-verification accepts the second-coordinate design, nonsingular path") {
  const ModelSpec m = rational_k1(-1.0);
  const Vector c{0.0, 1.0};
  const Design d = design_c(m, c);
  const VerificationReport rep = verify_c(m, d, c);
  CHECK(rep.verdict == Verdict::Optimal);
  CHECK(rep.max_violation <= 1e-6);
}

TEST_CASE("c-verification rejects equal weights for the second coordinate") {
  const ModelSpec m = rational_k1(-1.0);
  const Design d{{0.0, std::sqrt(2.0)}, {0.5, 0.5}};
  const VerificationReport rep = verify_c(m, d, {0.0, 1.0});
  CHECK(rep.verdict == Verdict::NotOptimal);
  CHECK(rep.max_violation > 1e-6);
}

TEST_CASE("c-verification certifies a one-point design via the dual direction") {
  const ModelSpec m = rational_k1(-1.0);
  const Vector c{1.0, 0.7};
  const OnePointDecision op = design_c_onepoint_k1(m, c);
  REQUIRE(op.one_point);
  REQUIRE(op.design.size() == 1);
  CHECK(op.design.support[0] == doctest::Approx(3.0 / 7.0).epsilon(1e-12));
  const VerificationReport rep = verify_c(m, op.design, c);
  CHECK(rep.verdict == Verdict::Optimal);
  CHECK(rep.note.find("dual") != std::string::npos);
}

TEST_CASE("c-verification throws when c is not estimable under the design") {
  const ModelSpec m = rational_k1(-1.0);
  const Design d{{3.0 / 7.0}, {1.0}};
  CHECK_THROWS_AS(verify_c(m, d, {0.0, 1.0}), estimability_error);
}

TEST_CASE("c-verification verdict and slack are invariant under scaling c") {
  const ModelSpec m = rational_k1(-1.0);
  const Design d = design_c(m, {0.0, 1.0});
  const VerificationReport a = verify_c(m, d, {0.0, 1.0});
  const VerificationReport b = verify_c(m, d, {0.0, -3.7});
  CHECK(a.verdict == b.verdict);
  CHECK(a.max_violation == doctest::Approx(b.max_violation).epsilon(1e-10));
}

TEST_CASE("coordinate efficiency of a coordinate-optimal design is one") {
  const ModelSpec m = rational_k1(-1.0);
  const Design d = design_c(m, {0.0, 1.0});
  CHECK(efficiency(m, d, 2) == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("coordinate efficiencies of the minimax design, rational b=-1") {
  const ModelSpec m = rational_k1(-1.0);
  const Design d = design_estar(m);
  CHECK(efficiency(m, d, 1) == doctest::Approx(0.95973).epsilon(5e-4));
  CHECK(efficiency(m, d, 2) == doctest::Approx(0.98072).epsilon(5e-4));
}

TEST_CASE("efficiency throws for a non-estimable coordinate") {
  const ModelSpec m = rational_k1(-1.0);
  const Design d{{3.0 / 7.0}, {1.0}};
  CHECK_THROWS_AS(efficiency(m, d, 2), estimability_error);
}

TEST_CASE("efficiency rejects out-of-range coordinate indices") {
  const ModelSpec m = rational_k1(-1.0);
  const Design d = design_estar(m);
  CHECK_THROWS_AS(efficiency(m, d, 0), parameter_error);
  CHECK_THROWS_AS(efficiency(m, d, 3), parameter_error);
}

TEST_CASE("grid search recovers the symmetric design for a line") {
  const ModelSpec m = line_model();
  const Design d = brute_force_E(m);
  REQUIRE(d.size() == 2);
  CHECK(d.support[0] == doctest::Approx(-1.0).epsilon(1e-6));
  CHECK(d.support[1] == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(d.weights[0] == doctest::Approx(0.5).epsilon(1e-3));
}

TEST_CASE("grid search matches the equi-oscillation design, rational k=1") {
  const ModelSpec m = rational_k1(-1.0);
  const Design exact = design_estar(m);
  const Design approx = brute_force_E(m);
  const double lam_exact = verify_E(m, exact).lambda_min;
  const SymMatrix M = info_matrix(m, approx);
  const double lam_approx = sym_eigen(M).values[0];
  CHECK(lam_approx >= lam_exact * (1.0 - 5e-3));
  CHECK(lam_approx <= lam_exact * (1.0 + 1e-9));
}

TEST_CASE("pairwise exchange matches the closed-form coordinate design") {
  const ModelSpec m = rational_k1(-1.0);
  const Vector c{0.0, 1.0};
  const Design exact = design_c(m, c);
  const Design approx = brute_force_c(m, c);
  REQUIRE(approx.size() == 2);
  const SymMatrix Me = info_matrix(m, exact);
  const SymMatrix Ma = info_matrix(m, approx);
  const double ve = dot(c, pinv_sym(Me).mat() * c);
  const double va = dot(c, pinv_sym(Ma).mat() * c);
  CHECK(va <= ve * (1.0 + 1e-6));
  CHECK(approx.weights[0] == doctest::Approx(exact.weights[0]).epsilon(1e-4));
}

TEST_CASE("pairwise exchange collapses to a single point when one suffices") {
  const ModelSpec m = rational_k1(-1.0);
  const Vector c{1.0, 0.7};
  const Design d = brute_force_c(m, c);
  REQUIRE(d.size() == 1);
  CHECK(d.support[0] == doctest::Approx(3.0 / 7.0).epsilon(1e-5));
  const VerificationReport rep = verify_c(m, d, c);
  CHECK(rep.verdict == Verdict::Optimal);
}

TEST_CASE("eigenvalue-ratio sweep flags infeasible rows and keeps the rest") {
  const ModelSpec base = rational_k2(-1.0, -0.5);
  const auto rows = eig_ratio_sweep(base, 1, -0.5, -1.0, 3, 4000);
  REQUIRE(rows.size() == 3);
  CHECK(rows[0].ok);
  CHECK(rows[0].ratio > 1.0);
  CHECK(rows[1].ok);
  CHECK_FALSE(rows[2].ok);
  CHECK_FALSE(rows[2].message.empty());
}

TEST_CASE("single-step sweep agrees with direct verification") {
  const ModelSpec base = rational_k2(-1.0, -0.5);
  const auto rows = eig_ratio_sweep(base, 1, -0.5, -0.5, 1, 4000);
  REQUIRE(rows.size() == 1);
  REQUIRE(rows[0].ok);
  const VerificationReport rep = verify_E(base, design_estar(base), 4000);
  CHECK(rows[0].ratio == doctest::Approx(rep.lambda_2 / rep.lambda_cstar).epsilon(1e-12));
}

TEST_CASE("report serialization carries verdict and eigenvalue fields") {
  const ModelSpec m = rational_k1(-1.0);
  const VerificationReport rep = verify_E(m, design_estar(m));
  const std::string s = report_to_json(rep);
  CHECK(s.find("\"verdict\": \"optimal\"") != std::string::npos);
  CHECK(s.find("lambda_cstar") != std::string::npos);
}
