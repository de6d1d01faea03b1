#ifndef PWAHIER_LINALG_HPP
#define PWAHIER_LINALG_HPP

// Small dense linear algebra. Everything here targets matrices of dimension
// below ~100 (the vectorized Lyapunov operators are the largest users).

#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

namespace pwahier {

class Vector {
 public:
  Vector() = default;
  explicit Vector(std::size_t n, double fill = 0.0) : data_(n, fill) {}
  Vector(std::initializer_list<double> values) : data_(values) {}
  explicit Vector(std::vector<double> values) : data_(std::move(values)) {}

  static Vector ones(std::size_t n) { return Vector(n, 1.0); }
  static Vector unit(std::size_t n, std::size_t k);

  std::size_t size() const noexcept { return data_.size(); }
  bool empty() const noexcept { return data_.empty(); }
  double& operator[](std::size_t i) { return data_[i]; }
  double operator[](std::size_t i) const { return data_[i]; }
  std::span<double> values() noexcept { return data_; }
  std::span<const double> values() const noexcept { return data_; }
  const std::vector<double>& std() const noexcept { return data_; }

  Vector segment(std::size_t start, std::size_t len) const;
  void set_segment(std::size_t start, const Vector& v);
  /// Concatenation (this, tail).
  Vector append(const Vector& tail) const;

  double norm() const;
  double norm_inf() const;
  double dot(const Vector& other) const;
  bool all_finite() const;

  Vector& operator+=(const Vector& rhs);
  Vector& operator-=(const Vector& rhs);
  Vector& operator*=(double s);

  bool operator==(const Vector&) const = default;

 private:
  std::vector<double> data_;
};

Vector operator+(Vector lhs, const Vector& rhs);
Vector operator-(Vector lhs, const Vector& rhs);
Vector operator-(Vector v);
Vector operator*(double s, Vector v);
Vector operator*(Vector v, double s);

/// Row-major dense matrix.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}
  Matrix(std::initializer_list<std::initializer_list<double>> rows);
  Matrix(std::size_t rows, std::size_t cols, std::vector<double> row_major);

  static Matrix identity(std::size_t n);
  static Matrix zeros(std::size_t rows, std::size_t cols) { return Matrix(rows, cols); }
  static Matrix diagonal(const Vector& d);
  static Matrix column(const Vector& v);
  static Matrix row(const Vector& v);
  static Matrix block_diag(const Matrix& a, const Matrix& b);
  static Matrix hstack(const Matrix& a, const Matrix& b);
  static Matrix vstack(const Matrix& a, const Matrix& b);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  bool square() const noexcept { return rows_ == cols_; }
  bool empty() const noexcept { return data_.empty(); }

  double& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  double operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }
  std::span<const double> row_major() const noexcept { return data_; }

  Matrix transpose() const;
  Matrix block(std::size_t r0, std::size_t c0, std::size_t nr, std::size_t nc) const;
  void set_block(std::size_t r0, std::size_t c0, const Matrix& b);
  Vector row_vector(std::size_t r) const;
  Vector col_vector(std::size_t c) const;
  /// Column-major vectorization vec(A).
  Vector vec() const;
  static Matrix unvec(const Vector& v, std::size_t rows, std::size_t cols);
  Matrix symmetric_part() const;

  double frobenius_norm() const;
  double max_abs() const;
  double trace() const;
  bool all_finite() const;
  bool is_zero() const;

  Matrix& operator+=(const Matrix& rhs);
  Matrix& operator-=(const Matrix& rhs);
  Matrix& operator*=(double s);

  bool operator==(const Matrix&) const = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

Matrix operator+(Matrix lhs, const Matrix& rhs);
Matrix operator-(Matrix lhs, const Matrix& rhs);
Matrix operator-(Matrix m);
Matrix operator*(const Matrix& a, const Matrix& b);
Vector operator*(const Matrix& a, const Vector& x);
Matrix operator*(double s, Matrix m);
Matrix operator*(Matrix m, double s);

Matrix kron(const Matrix& a, const Matrix& b);

struct SymEigen {
  Vector eigenvalues;  // ascending
  Matrix eigenvectors;  // columns, orthonormal
};

/// Cyclic Jacobi eigendecomposition of a symmetric matrix.
SymEigen sym_eigen(const Matrix& s);

double lambda_min(const Matrix& s);
double lambda_max(const Matrix& s);

/// Symmetric square root of a positive semidefinite matrix. Eigenvalues in
/// [-1e-10, 0) are clamped to zero.
Matrix matrix_sqrt_psd(const Matrix& s);

/// Largest singular value.
double spectral_norm(const Matrix& a);

/// Inverse of a symmetric positive definite matrix.
Matrix spd_inverse(const Matrix& s);

/// Moore-Penrose pseudo-inverse via the eigen-decomposition of AᵀA.
Matrix pseudo_inverse(const Matrix& a, double relative_threshold = 1e-10);

struct LeastSquaresSolution {
  Vector solution;
  double residual = 0.0;
  std::size_t rank = 0;
};

/// Minimum-norm least-squares solution of coeff·x = rhs via the normal
/// equations and an eigenvalue-thresholded pseudo-inverse (threshold
/// 1e-10·λ_max of coeffᵀcoeff).
LeastSquaresSolution kron_solve_least_squares(const Matrix& coeff, const Vector& rhs);

/// exp(M·t) by scaling and squaring of an 8-term Taylor series.
Matrix expm_taylor(const Matrix& m, double t);

/// Upper estimate of the spectral radius of exp(M·h) through normalized
/// repeated squaring, ‖E^(2^k)‖^(1/2^k). Returned as ln(ρ)/h, i.e. an
/// estimate of the spectral abscissa of M that converges from above.
double spectral_abscissa_estimate(const Matrix& m, double h = 0.01);

/// Hurwitz test: the symmetric part is negative definite with the given
/// margin, or the exp-based spectral radius estimate is below 1 - margin.
bool is_hurwitz(const Matrix& m, double margin = 1e-8);

}  // namespace pwahier

#endif  // PWAHIER_LINALG_HPP
