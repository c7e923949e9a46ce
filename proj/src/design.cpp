#include "chebdes/design.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <sstream>
#include <string>

#include "chebdes/errors.hpp"
#include "json.hpp"

namespace chebdes {

void Design::validate() const {
  if (support.empty()) throw parameter_error("design: empty support");
  if (support.size() != weights.size())
    throw parameter_error("design: support/weights length mismatch");
  double sum = 0.0;
  for (size_t i = 0; i < support.size(); ++i) {
    if (i > 0 && !(support[i - 1] < support[i]))
      throw parameter_error("design: support must be strictly ascending");
    if (!(weights[i] > 0.0)) throw parameter_error("design: weights must be positive");
    sum += weights[i];
  }
  if (std::abs(sum - 1.0) > 1e-12)
    throw parameter_error("design: weights must sum to one");
}

void Design::validate(const Interval& iv) const {
  validate();
  for (double t : support)
    if (!iv.contains(t))
      throw parameter_error("design: support point outside the interval");
}

std::string design_to_json(const Design& d) {
  nlohmann::json j;
  j["support"] = d.support;
  j["weights"] = d.weights;
  return j.dump(2);
}

Design design_from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw parameter_error(std::string("design JSON: ") + e.what());
  }
  if (!j.is_object()) throw parameter_error("design JSON: expected an object");
  for (const auto& item : j.items())
    if (item.key() != "support" && item.key() != "weights")
      throw parameter_error("design JSON: unknown key '" + item.key() + "'");
  if (!j.contains("support") || !j.contains("weights"))
    throw parameter_error("design JSON: needs 'support' and 'weights'");
  Design d;
  try {
    d.support = j["support"].get<Vector>();
    d.weights = j["weights"].get<Vector>();
  } catch (const nlohmann::json::exception& e) {
    throw parameter_error(std::string("design JSON: ") + e.what());
  }
  d.validate();
  return d;
}

std::string design_to_csv(const Design& d) {
  std::string out = "point,weight\n";
  char buf[80];
  for (int i = 0; i < d.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%.17g,%.17g\n", d.support[i], d.weights[i]);
    out += buf;
  }
  return out;
}

Design design_from_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  Design d;
  while (std::getline(in, line)) {
    while (!line.empty() && (line.back() == '\r' || line.back() == ' ')) line.pop_back();
    if (line.empty()) continue;
    const char first = line.front();
    if (!(std::isdigit(static_cast<unsigned char>(first)) || first == '-' ||
          first == '+' || first == '.'))
      continue;  // header
    const size_t comma = line.find(',');
    if (comma == std::string::npos)
      throw parameter_error("design CSV: expected two comma-separated columns");
    char* end = nullptr;
    const double t = std::strtod(line.c_str(), &end);
    if (end != line.c_str() + comma)
      throw parameter_error("design CSV: bad point '" + line + "'");
    const double w = std::strtod(line.c_str() + comma + 1, &end);
    if (end != line.c_str() + line.size())
      throw parameter_error("design CSV: bad weight '" + line + "'");
    d.support.push_back(t);
    d.weights.push_back(w);
  }
  d.validate();
  return d;
}

SymMatrix info_matrix(const ModelSpec& model, const Design& design, InfoMode mode) {
  model.validate();
  design.validate(model.interval);
  const int m = model.m();
  Vector kad;
  if (mode == InfoMode::Nonlinear) kad = ka_diag(model);
  Matrix acc(m, m);
  for (int j = 0; j < design.size(); ++j) {
    Vector f = eval_f(model, design.support[j]);
    if (!kad.empty())
      for (int i = 0; i < m; ++i) f[i] /= kad[i];
    for (int r = 0; r < m; ++r)
      for (int c = 0; c <= r; ++c) acc(r, c) += design.weights[j] * f[r] * f[c];
  }
  for (int r = 0; r < m; ++r)
    for (int c = r + 1; c < m; ++c) acc(r, c) = acc(c, r);
  return SymMatrix(acc);
}

Vector cheb_weights(const Matrix& F, const Vector& c, WeightMode mode) {
  const int m = F.rows();
  if (F.cols() != m || static_cast<int>(c.size()) != m)
    throw parameter_error("cheb_weights: dimension mismatch");
  const Vector x = solve(F, c);
  Vector w(m);
  if (mode == WeightMode::EStar) {
    const double csq = dot(c, c);
    if (csq == 0.0) throw parameter_error("cheb_weights: zero coefficient vector");
    for (int i = 0; i < m; ++i) {
      w[i] = (i % 2 == 0 ? -1.0 : 1.0) * x[i] / csq;
      if (w[i] < -1e-12)
        throw negative_weight_error(
            "cheb_weights: negative weight; the alternation candidate is invalid");
      if (w[i] < 0.0) w[i] = 0.0;
    }
  } else {
    double sum = 0.0;
    for (int i = 0; i < m; ++i) sum += (w[i] = std::abs(x[i]));
    if (sum == 0.0) throw parameter_error("cheb_weights: c must be nonzero");
    for (double& wi : w) wi /= sum;
  }
  return w;
}

namespace {

struct Candidate {
  ChebyshevSolution sol;
  Matrix F;  // F(i, j) = f_i(s_j)
};

Candidate build_candidate(const ModelSpec& model) {
  model.validate();
  const System sys = model.a ? scaled_system(model) : linearized_system(model);
  Candidate cand;
  cand.sol = remez(sys, model.interval, {});
  const int m = sys.m;
  cand.F = Matrix(m, m);
  for (int j = 0; j < m; ++j) {
    const Vector f = sys.eval(cand.sol.points[j]);
    for (int i = 0; i < m; ++i) cand.F(i, j) = f[i];
  }
  return cand;
}

}  // namespace

Design design_estar(const ModelSpec& model, ChebyshevSolution& extremal) {
  Candidate cand = build_candidate(model);
  Vector w = cheb_weights(cand.F, cand.sol.coeffs, WeightMode::EStar);
  double sum = 0.0;
  for (double wi : w) sum += wi;
  if (std::abs(sum - 1.0) > 1e-8)
    throw iteration_error("design_estar: weights did not sum to one",
                          std::abs(sum - 1.0));
  for (double& wi : w) wi /= sum;
  extremal = std::move(cand.sol);
  Design d{extremal.points, std::move(w)};
  d.validate(model.interval);
  return d;
}

Design design_estar(const ModelSpec& model) {
  ChebyshevSolution extremal;
  return design_estar(model, extremal);
}

Design design_c(const ModelSpec& model, const Vector& c, ChebyshevSolution& extremal) {
  bool nonzero = false;
  for (double ci : c) nonzero = nonzero || ci != 0.0;
  if (!nonzero) throw parameter_error("design_c: c must be nonzero");
  Candidate cand = build_candidate(model);
  const Vector w = cheb_weights(cand.F, c, WeightMode::General);
  Design d;
  double sum = 0.0;
  for (size_t i = 0; i < w.size(); ++i) {
    if (w[i] < 1e-12) continue;
    d.support.push_back(cand.sol.points[i]);
    d.weights.push_back(w[i]);
    sum += w[i];
  }
  for (double& wi : d.weights) wi /= sum;
  extremal = std::move(cand.sol);
  d.validate(model.interval);
  return d;
}

Design design_c(const ModelSpec& model, const Vector& c) {
  ChebyshevSolution extremal;
  return design_c(model, c, extremal);
}

OnePointDecision design_c_onepoint_k1(const ModelSpec& model, const Vector& c) {
  model.validate();
  if (model.s != 0 || model.k != 1 || model.basis != BasisKind::Rational ||
      !model.interval.unbounded || model.interval.lo != 0.0 || model.b[0] >= 0.0)
    throw parameter_error(
        "design_c_onepoint_k1: needs a single rational term on [0, inf) with b < 0");
  if (c.size() != 2 || (c[0] == 0.0 && c[1] == 0.0))
    throw parameter_error("design_c_onepoint_k1: c must be a nonzero 2-vector");

  const double b = model.b[0];
  const double ab = -b;
  const double sqrt2 = std::sqrt(2.0);

  bool inside = false;
  if (c[0] != 0.0) {
    const double ratio = c[1] / c[0];
    inside = ratio >= 1.0 / ((1.0 + sqrt2) * ab) && ratio <= 1.0 / ab;
  }
  OnePointDecision out;
  out.one_point = inside;
  if (inside) {
    out.design.support = {b + c[0] / c[1]};
    out.design.weights = {1.0};
  } else {
    const double aterm = std::abs(sqrt2 * c[0] + (2.0 + sqrt2) * c[1] * b);
    const double bterm = (4.0 + 3.0 * sqrt2) * std::abs(c[0] + c[1] * b);
    const double w1 = aterm / (aterm + bterm);
    out.design.support = {0.0, sqrt2 * ab};
    out.design.weights = {w1, 1.0 - w1};
  }
  out.design.validate(model.interval);
  return out;
}

}  // namespace chebdes
