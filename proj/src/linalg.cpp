#include "chebdes/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "chebdes/errors.hpp"

namespace chebdes {

Matrix Matrix::identity(int n) {
  Matrix id(n, n);
  for (int i = 0; i < n; ++i) id(i, i) = 1.0;
  return id;
}

Vector Matrix::col(int j) const {
  Vector v(rows_);
  for (int i = 0; i < rows_; ++i) v[i] = (*this)(i, j);
  return v;
}

Vector Matrix::row(int i) const {
  Vector v(cols_);
  for (int j = 0; j < cols_; ++j) v[j] = (*this)(i, j);
  return v;
}

Matrix operator*(const Matrix& a, const Matrix& b) {
  Matrix c(a.rows(), b.cols());
  for (int i = 0; i < a.rows(); ++i)
    for (int k = 0; k < a.cols(); ++k) {
      const double aik = a(i, k);
      if (aik == 0.0) continue;
      for (int j = 0; j < b.cols(); ++j) c(i, j) += aik * b(k, j);
    }
  return c;
}

Vector operator*(const Matrix& a, const Vector& x) {
  Vector y(a.rows(), 0.0);
  for (int i = 0; i < a.rows(); ++i) {
    double s = 0.0;
    for (int j = 0; j < a.cols(); ++j) s += a(i, j) * x[j];
    y[i] = s;
  }
  return y;
}

Matrix transpose(const Matrix& a) {
  Matrix t(a.cols(), a.rows());
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j) t(j, i) = a(i, j);
  return t;
}

double dot(const Vector& a, const Vector& b) {
  return std::inner_product(a.begin(), a.end(), b.begin(), 0.0);
}

double norm2(const Vector& a) { return std::sqrt(dot(a, a)); }

namespace {

// In-place LU with partial pivoting. Returns the permutation sign, fills
// `piv` with row swaps. Throws on (numerically) singular input.
int lu_decompose(Matrix& a, std::vector<int>& piv) {
  const int n = a.rows();
  piv.resize(n);
  int sign = 1;
  double scale = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) scale = std::max(scale, std::abs(a(i, j)));
  if (scale == 0.0) throw singularity_error("lu: zero matrix");

  for (int k = 0; k < n; ++k) {
    int p = k;
    double best = std::abs(a(k, k));
    for (int i = k + 1; i < n; ++i) {
      if (std::abs(a(i, k)) > best) {
        best = std::abs(a(i, k));
        p = i;
      }
    }
    if (best < 1e-300 * scale || best == 0.0)
      throw singularity_error("lu: matrix is singular to working precision");
    if (p != k) {
      for (int j = 0; j < n; ++j) std::swap(a(k, j), a(p, j));
      sign = -sign;
    }
    piv[k] = p;
    for (int i = k + 1; i < n; ++i) {
      a(i, k) /= a(k, k);
      const double lik = a(i, k);
      if (lik == 0.0) continue;
      for (int j = k + 1; j < n; ++j) a(i, j) -= lik * a(k, j);
    }
  }
  return sign;
}

Vector lu_solve(const Matrix& lu, const std::vector<int>& piv, Vector b) {
  const int n = lu.rows();
  for (int k = 0; k < n; ++k)
    if (piv[k] != k) std::swap(b[k], b[piv[k]]);
  for (int i = 1; i < n; ++i) {
    double s = b[i];
    for (int j = 0; j < i; ++j) s -= lu(i, j) * b[j];
    b[i] = s;
  }
  for (int i = n - 1; i >= 0; --i) {
    double s = b[i];
    for (int j = i + 1; j < n; ++j) s -= lu(i, j) * b[j];
    b[i] = s / lu(i, i);
  }
  return b;
}

}  // namespace

Vector solve(Matrix a, Vector rhs) {
  if (a.rows() != a.cols() || a.rows() != static_cast<int>(rhs.size()))
    throw parameter_error("solve: dimension mismatch");
  std::vector<int> piv;
  lu_decompose(a, piv);
  return lu_solve(a, piv, std::move(rhs));
}

double determinant(Matrix a) {
  if (a.rows() != a.cols()) throw parameter_error("determinant: matrix not square");
  std::vector<int> piv;
  int sign;
  try {
    sign = lu_decompose(a, piv);
  } catch (const singularity_error&) {
    return 0.0;
  }
  double d = sign;
  for (int i = 0; i < a.rows(); ++i) d *= a(i, i);
  return d;
}

Matrix inverse(const Matrix& a) {
  if (a.rows() != a.cols()) throw parameter_error("inverse: matrix not square");
  const int n = a.rows();
  Matrix lu = a;
  std::vector<int> piv;
  lu_decompose(lu, piv);
  Matrix inv(n, n);
  for (int j = 0; j < n; ++j) {
    Vector e(n, 0.0);
    e[j] = 1.0;
    Vector x = lu_solve(lu, piv, std::move(e));
    for (int i = 0; i < n; ++i) inv(i, j) = x[i];
  }
  return inv;
}

SymMatrix::SymMatrix(const Matrix& a) {
  if (a.rows() != a.cols()) throw parameter_error("SymMatrix: matrix not square");
  double scale = 1.0;
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j) scale = std::max(scale, std::abs(a(i, j)));
  for (int i = 0; i < a.rows(); ++i)
    for (int j = i + 1; j < a.cols(); ++j)
      if (std::abs(a(i, j) - a(j, i)) > 1e-12 * scale)
        throw parameter_error("SymMatrix: matrix not symmetric");
  m_ = a;
  for (int i = 0; i < a.rows(); ++i)
    for (int j = i + 1; j < a.cols(); ++j) {
      const double v = 0.5 * (a(i, j) + a(j, i));
      m_(i, j) = v;
      m_(j, i) = v;
    }
}

EigenSystem sym_eigen(const SymMatrix& sm) {
  const int n = sm.order();
  Matrix a = sm.mat();
  Matrix v = Matrix::identity(n);

  double scale = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) scale = std::max(scale, std::abs(a(i, j)));
  if (scale == 0.0) scale = 1.0;

  auto off_norm = [&]() {
    double s = 0.0;
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) s += 2.0 * a(i, j) * a(i, j);
    return std::sqrt(s);
  };

  const int max_sweeps = 64;
  for (int sweep = 0; sweep < max_sweeps; ++sweep) {
    if (off_norm() <= 1e-12 * scale) break;
    for (int p = 0; p < n - 1; ++p) {
      for (int q = p + 1; q < n; ++q) {
        const double apq = a(p, q);
        if (std::abs(apq) <= 1e-300) continue;
        const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
        double t;
        if (std::abs(theta) > 1e154) {
          t = 0.5 / theta;
        } else {
          t = 1.0 / (std::abs(theta) + std::sqrt(1.0 + theta * theta));
          if (theta < 0.0) t = -t;
        }
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = t * c;
        const double tau = s / (1.0 + c);

        const double app = a(p, p), aqq = a(q, q);
        a(p, p) = app - t * apq;
        a(q, q) = aqq + t * apq;
        a(p, q) = 0.0;
        a(q, p) = 0.0;
        for (int i = 0; i < n; ++i) {
          if (i != p && i != q) {
            const double aip = a(i, p), aiq = a(i, q);
            a(i, p) = aip - s * (aiq + tau * aip);
            a(p, i) = a(i, p);
            a(i, q) = aiq + s * (aip - tau * aiq);
            a(q, i) = a(i, q);
          }
          const double vip = v(i, p), viq = v(i, q);
          v(i, p) = vip - s * (viq + tau * vip);
          v(i, q) = viq + s * (vip - tau * viq);
        }
      }
    }
  }
  if (off_norm() > 1e-10 * scale)
    throw iteration_error("sym_eigen: Jacobi sweeps did not converge", off_norm() / scale);

  std::vector<int> order(n);
  for (int i = 0; i < n; ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](int i, int j) { return a(i, i) < a(j, j); });

  EigenSystem es;
  es.values.resize(n);
  es.vectors = Matrix(n, n);
  for (int j = 0; j < n; ++j) {
    es.values[j] = a(order[j], order[j]);
    for (int i = 0; i < n; ++i) es.vectors(i, j) = v(i, order[j]);
  }
  return es;
}

SymMatrix pinv_sym(const SymMatrix& a, double rel_cutoff) {
  const EigenSystem es = sym_eigen(a);
  const int n = a.order();
  double lmax = 0.0;
  for (double l : es.values) lmax = std::max(lmax, std::abs(l));
  Matrix p(n, n);
  for (int k = 0; k < n; ++k) {
    if (std::abs(es.values[k]) <= rel_cutoff * lmax || es.values[k] == 0.0) continue;
    const double inv = 1.0 / es.values[k];
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) p(i, j) += inv * es.vectors(i, k) * es.vectors(j, k);
  }
  return SymMatrix(p);
}

}  // namespace chebdes
