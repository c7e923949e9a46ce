#pragma once

#include <vector>

namespace chebdes {

using Vector = std::vector<double>;

// Small dense row-major matrix. Everything in this library is m x m with
// m rarely above ten, so no attempt is made at blocking or views.
class Matrix {
 public:
  Matrix() = default;
  Matrix(int rows, int cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(static_cast<size_t>(rows) * cols, fill) {}

  static Matrix identity(int n);

  int rows() const { return rows_; }
  int cols() const { return cols_; }

  double& operator()(int i, int j) { return data_[static_cast<size_t>(i) * cols_ + j]; }
  double operator()(int i, int j) const { return data_[static_cast<size_t>(i) * cols_ + j]; }

  Vector col(int j) const;
  Vector row(int i) const;

 private:
  int rows_ = 0;
  int cols_ = 0;
  std::vector<double> data_;
};

Matrix operator*(const Matrix& a, const Matrix& b);
Vector operator*(const Matrix& a, const Vector& x);
Matrix transpose(const Matrix& a);

double dot(const Vector& a, const Vector& b);
double norm2(const Vector& a);

// Solve a x = rhs by LU with partial pivoting. Throws singularity_error.
Vector solve(Matrix a, Vector rhs);
double determinant(Matrix a);
Matrix inverse(const Matrix& a);

// Dense symmetric matrix. The constructor checks symmetry to a relative
// 1e-12 and stores the symmetrized entries.
class SymMatrix {
 public:
  SymMatrix() = default;
  explicit SymMatrix(const Matrix& a);

  int order() const { return m_.rows(); }
  double operator()(int i, int j) const { return m_(i, j); }
  const Matrix& mat() const { return m_; }

 private:
  Matrix m_;
};

// Eigenvalues ascending, eigenvectors as the matching columns of `vectors`.
struct EigenSystem {
  Vector values;
  Matrix vectors;
};

// Cyclic Jacobi rotations; runs sweeps until the off-diagonal Frobenius norm
// falls below 1e-12 relative to the matrix scale.
EigenSystem sym_eigen(const SymMatrix& a);

// Moore-Penrose inverse via the spectral decomposition; eigenvalues below
// rel_cutoff times the largest magnitude are treated as zero.
SymMatrix pinv_sym(const SymMatrix& a, double rel_cutoff = 1e-10);

}  // namespace chebdes
