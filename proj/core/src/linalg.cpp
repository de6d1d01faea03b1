#include "pwahier/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "pwahier/error.hpp"

namespace pwahier {
namespace {

void require_same_size(std::size_t a, std::size_t b, const char* what) {
  if (a != b) {
    throw Error(ErrorCode::DimensionMismatch,
                std::string(what) + " (" + std::to_string(a) + " vs " + std::to_string(b) + ")");
  }
}

void require_finite(const Matrix& m, const char* what) {
  if (!m.all_finite()) throw Error(ErrorCode::NonFinite, what);
}

constexpr double kJacobiTolerance = 1e-14;
constexpr int kJacobiMaxSweeps = 100;

}  // namespace

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::NonSquare: return "NonSquare";
    case ErrorCode::NotSymmetric: return "NotSymmetric";
    case ErrorCode::NoConvergence: return "NoConvergence";
    case ErrorCode::NotPsd: return "NotPsd";
    case ErrorCode::NonFinite: return "NonFinite";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::Unbounded: return "Unbounded";
    case ErrorCode::Empty: return "Empty";
    case ErrorCode::NotTwoD: return "NotTwoD";
    case ErrorCode::NoCell: return "NoCell";
    case ErrorCode::NotHurwitz: return "NotHurwitz";
    case ErrorCode::NoFeasiblePairing: return "NoFeasiblePairing";
    case ErrorCode::SingularBBt: return "SingularBBt";
    case ErrorCode::UncertifiedRelation: return "UncertifiedRelation";
    case ErrorCode::NegativeQuadForm: return "NegativeQuadForm";
    case ErrorCode::SynthesisFailed: return "SynthesisFailed";
    case ErrorCode::InfeasibleCertificate: return "InfeasibleCertificate";
    case ErrorCode::DegenerateState: return "DegenerateState";
    case ErrorCode::NonFiniteState: return "NonFiniteState";
    case ErrorCode::UncertifiedMode: return "UncertifiedMode";
    case ErrorCode::EmptySchedule: return "EmptySchedule";
    case ErrorCode::NonMonotoneTimes: return "NonMonotoneTimes";
    case ErrorCode::EmptyTrajectory: return "EmptyTrajectory";
    case ErrorCode::IoError: return "IoError";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::UnknownParameter: return "UnknownParameter";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

// ---------------------------------------------------------------- Vector

Vector Vector::unit(std::size_t n, std::size_t k) {
  Vector v(n);
  v[k] = 1.0;
  return v;
}

Vector Vector::segment(std::size_t start, std::size_t len) const {
  if (start + len > size()) throw Error(ErrorCode::DimensionMismatch, "vector segment out of range");
  return Vector(std::vector<double>(data_.begin() + static_cast<std::ptrdiff_t>(start),
                                    data_.begin() + static_cast<std::ptrdiff_t>(start + len)));
}

void Vector::set_segment(std::size_t start, const Vector& v) {
  if (start + v.size() > size()) throw Error(ErrorCode::DimensionMismatch, "vector segment out of range");
  std::copy(v.data_.begin(), v.data_.end(), data_.begin() + static_cast<std::ptrdiff_t>(start));
}

Vector Vector::append(const Vector& tail) const {
  std::vector<double> out(data_);
  out.insert(out.end(), tail.data_.begin(), tail.data_.end());
  return Vector(std::move(out));
}

double Vector::norm() const { return std::sqrt(dot(*this)); }

double Vector::norm_inf() const {
  double m = 0.0;
  for (double x : data_) m = std::max(m, std::abs(x));
  return m;
}

double Vector::dot(const Vector& other) const {
  require_same_size(size(), other.size(), "dot product");
  return std::inner_product(data_.begin(), data_.end(), other.data_.begin(), 0.0);
}

bool Vector::all_finite() const {
  return std::all_of(data_.begin(), data_.end(), [](double x) { return std::isfinite(x); });
}

Vector& Vector::operator+=(const Vector& rhs) {
  require_same_size(size(), rhs.size(), "vector addition");
  for (std::size_t i = 0; i < size(); ++i) data_[i] += rhs.data_[i];
  return *this;
}

Vector& Vector::operator-=(const Vector& rhs) {
  require_same_size(size(), rhs.size(), "vector subtraction");
  for (std::size_t i = 0; i < size(); ++i) data_[i] -= rhs.data_[i];
  return *this;
}

Vector& Vector::operator*=(double s) {
  for (double& x : data_) x *= s;
  return *this;
}

Vector operator+(Vector lhs, const Vector& rhs) { return lhs += rhs; }
Vector operator-(Vector lhs, const Vector& rhs) { return lhs -= rhs; }
Vector operator-(Vector v) { return v *= -1.0; }
Vector operator*(double s, Vector v) { return v *= s; }
Vector operator*(Vector v, double s) { return v *= s; }

// ---------------------------------------------------------------- Matrix

Matrix::Matrix(std::initializer_list<std::initializer_list<double>> rows) {
  rows_ = rows.size();
  cols_ = rows_ == 0 ? 0 : rows.begin()->size();
  data_.reserve(rows_ * cols_);
  for (const auto& r : rows) {
    if (r.size() != cols_) throw Error(ErrorCode::DimensionMismatch, "ragged matrix initializer");
    data_.insert(data_.end(), r.begin(), r.end());
  }
}

Matrix::Matrix(std::size_t rows, std::size_t cols, std::vector<double> row_major)
    : rows_(rows), cols_(cols), data_(std::move(row_major)) {
  require_same_size(data_.size(), rows * cols, "matrix storage");
}

Matrix Matrix::identity(std::size_t n) {
  Matrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

Matrix Matrix::diagonal(const Vector& d) {
  Matrix m(d.size(), d.size());
  for (std::size_t i = 0; i < d.size(); ++i) m(i, i) = d[i];
  return m;
}

Matrix Matrix::column(const Vector& v) { return Matrix(v.size(), 1, v.std()); }
Matrix Matrix::row(const Vector& v) { return Matrix(1, v.size(), v.std()); }

Matrix Matrix::block_diag(const Matrix& a, const Matrix& b) {
  Matrix m(a.rows() + b.rows(), a.cols() + b.cols());
  m.set_block(0, 0, a);
  m.set_block(a.rows(), a.cols(), b);
  return m;
}

Matrix Matrix::hstack(const Matrix& a, const Matrix& b) {
  require_same_size(a.rows(), b.rows(), "hstack rows");
  Matrix m(a.rows(), a.cols() + b.cols());
  m.set_block(0, 0, a);
  m.set_block(0, a.cols(), b);
  return m;
}

Matrix Matrix::vstack(const Matrix& a, const Matrix& b) {
  if (a.empty() && a.cols() == 0) return b;
  if (b.empty() && b.cols() == 0) return a;
  require_same_size(a.cols(), b.cols(), "vstack cols");
  Matrix m(a.rows() + b.rows(), a.cols());
  m.set_block(0, 0, a);
  m.set_block(a.rows(), 0, b);
  return m;
}

Matrix Matrix::transpose() const {
  Matrix t(cols_, rows_);
  for (std::size_t r = 0; r < rows_; ++r)
    for (std::size_t c = 0; c < cols_; ++c) t(c, r) = (*this)(r, c);
  return t;
}

Matrix Matrix::block(std::size_t r0, std::size_t c0, std::size_t nr, std::size_t nc) const {
  if (r0 + nr > rows_ || c0 + nc > cols_) throw Error(ErrorCode::DimensionMismatch, "block out of range");
  Matrix b(nr, nc);
  for (std::size_t r = 0; r < nr; ++r)
    for (std::size_t c = 0; c < nc; ++c) b(r, c) = (*this)(r0 + r, c0 + c);
  return b;
}

void Matrix::set_block(std::size_t r0, std::size_t c0, const Matrix& b) {
  if (r0 + b.rows() > rows_ || c0 + b.cols() > cols_) {
    throw Error(ErrorCode::DimensionMismatch, "set_block out of range");
  }
  for (std::size_t r = 0; r < b.rows(); ++r)
    for (std::size_t c = 0; c < b.cols(); ++c) (*this)(r0 + r, c0 + c) = b(r, c);
}

Vector Matrix::row_vector(std::size_t r) const {
  Vector v(cols_);
  for (std::size_t c = 0; c < cols_; ++c) v[c] = (*this)(r, c);
  return v;
}

Vector Matrix::col_vector(std::size_t c) const {
  Vector v(rows_);
  for (std::size_t r = 0; r < rows_; ++r) v[r] = (*this)(r, c);
  return v;
}

Vector Matrix::vec() const {
  Vector v(rows_ * cols_);
  for (std::size_t c = 0; c < cols_; ++c)
    for (std::size_t r = 0; r < rows_; ++r) v[c * rows_ + r] = (*this)(r, c);
  return v;
}

Matrix Matrix::unvec(const Vector& v, std::size_t rows, std::size_t cols) {
  require_same_size(v.size(), rows * cols, "unvec");
  Matrix m(rows, cols);
  for (std::size_t c = 0; c < cols; ++c)
    for (std::size_t r = 0; r < rows; ++r) m(r, c) = v[c * rows + r];
  return m;
}

Matrix Matrix::symmetric_part() const {
  if (!square()) throw Error(ErrorCode::NonSquare, "symmetric part of non-square matrix");
  Matrix s(rows_, cols_);
  for (std::size_t r = 0; r < rows_; ++r)
    for (std::size_t c = 0; c < cols_; ++c) s(r, c) = 0.5 * ((*this)(r, c) + (*this)(c, r));
  return s;
}

double Matrix::frobenius_norm() const {
  double s = 0.0;
  for (double x : data_) s += x * x;
  return std::sqrt(s);
}

double Matrix::max_abs() const {
  double m = 0.0;
  for (double x : data_) m = std::max(m, std::abs(x));
  return m;
}

double Matrix::trace() const {
  double t = 0.0;
  for (std::size_t i = 0; i < std::min(rows_, cols_); ++i) t += (*this)(i, i);
  return t;
}

bool Matrix::all_finite() const {
  return std::all_of(data_.begin(), data_.end(), [](double x) { return std::isfinite(x); });
}

bool Matrix::is_zero() const {
  return std::all_of(data_.begin(), data_.end(), [](double x) { return x == 0.0; });
}

Matrix& Matrix::operator+=(const Matrix& rhs) {
  if (rows_ != rhs.rows_ || cols_ != rhs.cols_) throw Error(ErrorCode::DimensionMismatch, "matrix addition");
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += rhs.data_[i];
  return *this;
}

Matrix& Matrix::operator-=(const Matrix& rhs) {
  if (rows_ != rhs.rows_ || cols_ != rhs.cols_) throw Error(ErrorCode::DimensionMismatch, "matrix subtraction");
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= rhs.data_[i];
  return *this;
}

Matrix& Matrix::operator*=(double s) {
  for (double& x : data_) x *= s;
  return *this;
}

Matrix operator+(Matrix lhs, const Matrix& rhs) { return lhs += rhs; }
Matrix operator-(Matrix lhs, const Matrix& rhs) { return lhs -= rhs; }
Matrix operator-(Matrix m) { return m *= -1.0; }
Matrix operator*(double s, Matrix m) { return m *= s; }
Matrix operator*(Matrix m, double s) { return m *= s; }

Matrix operator*(const Matrix& a, const Matrix& b) {
  if (a.cols() != b.rows()) {
    throw Error(ErrorCode::DimensionMismatch, "matrix product " + std::to_string(a.rows()) + "x" +
                                                  std::to_string(a.cols()) + " * " + std::to_string(b.rows()) +
                                                  "x" + std::to_string(b.cols()));
  }
  Matrix c(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const double aik = a(i, k);
      if (aik == 0.0) continue;
      for (std::size_t j = 0; j < b.cols(); ++j) c(i, j) += aik * b(k, j);
    }
  }
  return c;
}

Vector operator*(const Matrix& a, const Vector& x) {
  require_same_size(a.cols(), x.size(), "matrix-vector product");
  Vector y(a.rows());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    double s = 0.0;
    for (std::size_t k = 0; k < a.cols(); ++k) s += a(i, k) * x[k];
    y[i] = s;
  }
  return y;
}

Matrix kron(const Matrix& a, const Matrix& b) {
  Matrix k(a.rows() * b.rows(), a.cols() * b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) {
      const double aij = a(i, j);
      if (aij == 0.0) continue;
      for (std::size_t r = 0; r < b.rows(); ++r)
        for (std::size_t c = 0; c < b.cols(); ++c) k(i * b.rows() + r, j * b.cols() + c) = aij * b(r, c);
    }
  return k;
}

// ---------------------------------------------------------------- eigen

SymEigen sym_eigen(const Matrix& s) {
  if (!s.square()) throw Error(ErrorCode::NonSquare, "sym_eigen needs a square matrix");
  require_finite(s, "sym_eigen input");
  const std::size_t n = s.rows();
  const double scale = s.frobenius_norm();
  double asym = 0.0;
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t c = r + 1; c < n; ++c) asym += 2.0 * std::pow(s(r, c) - s(c, r), 2);
  if (std::sqrt(asym) > 1e-12 * scale) throw Error(ErrorCode::NotSymmetric, "sym_eigen input is not symmetric");

  Matrix a = s.symmetric_part();
  Matrix v = Matrix::identity(n);

  auto off_norm = [&] {
    double o = 0.0;
    for (std::size_t r = 0; r < n; ++r)
      for (std::size_t c = r + 1; c < n; ++c) o += 2.0 * a(r, c) * a(r, c);
    return std::sqrt(o);
  };

  int sweep = 0;
  while (off_norm() > kJacobiTolerance * scale) {
    if (++sweep > kJacobiMaxSweeps) throw Error(ErrorCode::NoConvergence, "Jacobi sweep cap reached");
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const double apq = a(p, q);
        if (apq == 0.0) continue;
        const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
        const double t = (theta >= 0.0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(1.0 + theta * theta));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double sn = t * c;
        for (std::size_t k = 0; k < n; ++k) {
          const double akp = a(k, p);
          const double akq = a(k, q);
          a(k, p) = c * akp - sn * akq;
          a(k, q) = sn * akp + c * akq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double apk = a(p, k);
          const double aqk = a(q, k);
          a(p, k) = c * apk - sn * aqk;
          a(q, k) = sn * apk + c * aqk;
        }
        a(p, q) = 0.0;
        a(q, p) = 0.0;
        for (std::size_t k = 0; k < n; ++k) {
          const double vkp = v(k, p);
          const double vkq = v(k, q);
          v(k, p) = c * vkp - sn * vkq;
          v(k, q) = sn * vkp + c * vkq;
        }
      }
    }
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) { return a(i, i) < a(j, j); });

  SymEigen out{Vector(n), Matrix(n, n)};
  for (std::size_t k = 0; k < n; ++k) {
    out.eigenvalues[k] = a(order[k], order[k]);
    for (std::size_t r = 0; r < n; ++r) out.eigenvectors(r, k) = v(r, order[k]);
  }
  return out;
}

double lambda_min(const Matrix& s) {
  const auto e = sym_eigen(s);
  return e.eigenvalues.empty() ? 0.0 : e.eigenvalues[0];
}

double lambda_max(const Matrix& s) {
  const auto e = sym_eigen(s);
  return e.eigenvalues.empty() ? 0.0 : e.eigenvalues[e.eigenvalues.size() - 1];
}

namespace {

// Q·diag(f(λ))·Qᵀ
Matrix spectral_map(const SymEigen& e, auto&& f) {
  const std::size_t n = e.eigenvalues.size();
  Matrix out(n, n);
  for (std::size_t k = 0; k < n; ++k) {
    const double fk = f(e.eigenvalues[k]);
    if (fk == 0.0) continue;
    for (std::size_t r = 0; r < n; ++r) {
      const double vr = e.eigenvectors(r, k) * fk;
      for (std::size_t c = 0; c < n; ++c) out(r, c) += vr * e.eigenvectors(c, k);
    }
  }
  return out.symmetric_part();
}

}  // namespace

Matrix matrix_sqrt_psd(const Matrix& s) {
  const auto e = sym_eigen(s);
  for (std::size_t k = 0; k < e.eigenvalues.size(); ++k) {
    if (e.eigenvalues[k] < -1e-10) throw Error(ErrorCode::NotPsd, "matrix_sqrt_psd: negative eigenvalue");
  }
  return spectral_map(e, [](double l) { return l > 0.0 ? std::sqrt(l) : 0.0; });
}

double spectral_norm(const Matrix& a) {
  require_finite(a, "spectral_norm input");
  if (a.empty()) return 0.0;
  const Matrix gram = a.cols() <= a.rows() ? a.transpose() * a : a * a.transpose();
  return std::sqrt(std::max(0.0, lambda_max(gram)));
}

Matrix spd_inverse(const Matrix& s) {
  const auto e = sym_eigen(s);
  for (std::size_t k = 0; k < e.eigenvalues.size(); ++k) {
    if (e.eigenvalues[k] <= 0.0) throw Error(ErrorCode::NotPsd, "spd_inverse: matrix is not positive definite");
  }
  return spectral_map(e, [](double l) { return 1.0 / l; });
}

Matrix pseudo_inverse(const Matrix& a, double relative_threshold) {
  if (a.empty()) return Matrix(a.cols(), a.rows());
  const auto e = sym_eigen(a.transpose() * a);
  const double top = std::max(0.0, e.eigenvalues[e.eigenvalues.size() - 1]);
  const double thr = relative_threshold * top;
  const Matrix inv = spectral_map(e, [&](double l) { return (l > thr && l > 0.0) ? 1.0 / l : 0.0; });
  return inv * a.transpose();
}

LeastSquaresSolution kron_solve_least_squares(const Matrix& coeff, const Vector& rhs) {
  require_same_size(coeff.rows(), rhs.size(), "kron_solve_least_squares rhs length");
  require_finite(coeff, "kron_solve_least_squares coefficient");
  LeastSquaresSolution out{Vector(coeff.cols()), 0.0, 0};
  if (coeff.cols() == 0) {
    out.residual = rhs.norm();
    return out;
  }
  const Matrix ct = coeff.transpose();
  const auto e = sym_eigen(ct * coeff);
  const double top = std::max(0.0, e.eigenvalues[e.eigenvalues.size() - 1]);
  const double thr = 1e-10 * top;
  for (std::size_t k = 0; k < e.eigenvalues.size(); ++k) {
    if (e.eigenvalues[k] > thr && e.eigenvalues[k] > 0.0) ++out.rank;
  }
  const Matrix normal_pinv = spectral_map(e, [&](double l) { return (l > thr && l > 0.0) ? 1.0 / l : 0.0; });

  Vector x = normal_pinv * (ct * rhs);
  // Two rounds of iterative refinement on the residual; corrections stay in
  // the retained eigenspace so the minimum-norm property is preserved.
  for (int round = 0; round < 2; ++round) {
    const Vector r = rhs - coeff * x;
    x += normal_pinv * (ct * r);
  }
  out.solution = std::move(x);
  out.residual = (coeff * out.solution - rhs).norm();
  return out;
}

// ---------------------------------------------------------------- stability

Matrix expm_taylor(const Matrix& m, double t) {
  if (!m.square()) throw Error(ErrorCode::NonSquare, "expm of non-square matrix");
  Matrix x = m * t;
  const double nrm = x.frobenius_norm();
  int squarings = 0;
  if (nrm > 1.0 / 64.0) squarings = static_cast<int>(std::ceil(std::log2(nrm * 64.0)));
  x *= std::ldexp(1.0, -squarings);

  const std::size_t n = m.rows();
  Matrix result = Matrix::identity(n);
  Matrix term = Matrix::identity(n);
  for (int k = 1; k <= 8; ++k) {
    term = term * x;
    term *= 1.0 / k;
    result += term;
  }
  for (int k = 0; k < squarings; ++k) result = result * result;
  return result;
}

double spectral_abscissa_estimate(const Matrix& m, double h) {
  if (!m.square()) throw Error(ErrorCode::NonSquare, "spectral abscissa of non-square matrix");
  require_finite(m, "spectral abscissa input");
  if (m.empty()) return -std::numeric_limits<double>::infinity();
  Matrix e = expm_taylor(m, h);
  double nrm = e.frobenius_norm();
  if (nrm == 0.0) return -std::numeric_limits<double>::infinity();
  double log_norm = std::log(nrm);
  e *= 1.0 / nrm;
  constexpr int kSquarings = 32;
  double horizon = 1.0;
  for (int k = 0; k < kSquarings; ++k) {
    e = e * e;
    nrm = e.frobenius_norm();
    if (nrm == 0.0) return -std::numeric_limits<double>::infinity();
    log_norm = 2.0 * log_norm + std::log(nrm);
    horizon *= 2.0;
    e *= 1.0 / nrm;
  }
  return log_norm / horizon / h;
}

bool is_hurwitz(const Matrix& m, double margin) {
  if (!m.square()) throw Error(ErrorCode::NonSquare, "Hurwitz test of non-square matrix");
  if (m.empty()) return true;
  if (lambda_max(m.symmetric_part()) < -margin) return true;
  constexpr double h = 0.01;
  const double rho = std::exp(spectral_abscissa_estimate(m, h) * h);
  return rho < 1.0 - margin;
}

}  // namespace pwahier
