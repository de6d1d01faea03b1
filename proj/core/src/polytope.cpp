#include "pwahier/polytope.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "pwahier/error.hpp"

namespace pwahier {

Polyhedron::Polyhedron(Matrix e, Vector f) : e_(std::move(e)), f_(std::move(f)) {
  if (e_.rows() == 0) throw Error(ErrorCode::InvalidArgument, "polyhedron needs at least one constraint row");
  if (e_.rows() != f_.size()) {
    throw Error(ErrorCode::DimensionMismatch, "polyhedron E has " + std::to_string(e_.rows()) + " rows but f has " +
                                                  std::to_string(f_.size()) + " entries");
  }
  if (!e_.all_finite() || !f_.all_finite()) throw Error(ErrorCode::NonFinite, "polyhedron data must be finite");
}

Vector Polyhedron::slack(const Vector& x) const {
  if (x.size() != dim()) throw Error(ErrorCode::DimensionMismatch, "point dimension does not match polyhedron");
  return e_ * x - f_;
}

bool Polyhedron::contains(const Vector& x, double tol) const {
  const Vector s = slack(x);
  return std::all_of(s.values().begin(), s.values().end(), [tol](double v) { return v >= -tol; });
}

CellKind classify_cell(const Polyhedron& p) {
  const auto f = p.f().values();
  return std::all_of(f.begin(), f.end(), [](double v) { return v == 0.0; }) ? CellKind::Conic : CellKind::Affine;
}

CellBounding cell_bounding(const Polyhedron& p) {
  const CellKind kind = classify_cell(p);
  if (kind == CellKind::Conic) return {p.e(), kind};
  return {Matrix::hstack(p.e(), Matrix::column(-p.f())), kind};
}

ContinuityMatrix ContinuityMatrix::identity(std::size_t dim, CellKind kind) {
  return {Matrix::identity(kind == CellKind::Affine ? dim + 1 : dim), kind};
}

Vector ContinuityMatrix::apply(const Vector& x) const {
  if (kind == CellKind::Affine) return jbar * x.append(Vector{1.0});
  return jbar * x;
}

double continuity_mismatch(const ContinuityMatrix& a, const ContinuityMatrix& b,
                           const std::vector<Vector>& facet_points) {
  double worst = 0.0;
  for (const auto& v : facet_points) {
    const Vector hv = v.append(Vector{1.0});
    const Vector ya = a.kind == CellKind::Affine ? a.jbar * hv : a.jbar * v;
    const Vector yb = b.kind == CellKind::Affine ? b.jbar * hv : b.jbar * v;
    worst = std::max(worst, (ya - yb).norm_inf());
  }
  return worst;
}

Partition::Partition(std::vector<Polyhedron> cells) : cells_(std::move(cells)) {
  for (const auto& c : cells_) {
    if (c.dim() != cells_.front().dim()) throw Error(ErrorCode::DimensionMismatch, "partition cells differ in dimension");
  }
}

std::optional<std::size_t> first_containing(const Partition& part, const Vector& x,
                                            std::span<const std::size_t> candidates) {
  for (std::size_t i : candidates) {
    if (i < part.size() && part.cell(i).contains(x)) return i;
  }
  return std::nullopt;
}

std::size_t locate_mode(const Partition& part, const Vector& x, std::optional<std::size_t> previous) {
  if (x.size() != part.dim()) throw Error(ErrorCode::DimensionMismatch, "state dimension does not match partition");
  if (previous && *previous < part.size() && part.cell(*previous).contains(x)) return *previous;
  for (std::size_t i = 0; i < part.size(); ++i) {
    if (part.cell(i).contains(x)) return i;
  }
  throw Error(ErrorCode::NoCell, "state lies outside every partition cell");
}

Matrix JointCell::ebar() const {
  return kind == CellKind::Conic ? region.e() : Matrix::hstack(region.e(), Matrix::column(-region.f()));
}

std::vector<JointCell> joint_partition_linear(const Partition& part, const std::vector<Matrix>& p) {
  if (p.size() != part.size()) throw Error(ErrorCode::DimensionMismatch, "one P matrix per cell is required");
  std::vector<JointCell> out;
  out.reserve(part.size());
  for (std::size_t i = 0; i < part.size(); ++i) {
    const auto& cell = part.cell(i);
    if (p[i].rows() != cell.dim()) throw Error(ErrorCode::DimensionMismatch, "P row count must equal state dimension");
    out.push_back({Polyhedron(Matrix::hstack(cell.e(), cell.e() * p[i]), cell.f()), classify_cell(cell)});
  }
  return out;
}

JointCell joint_cell_pair(const Polyhedron& concrete, const Polyhedron& abstraction_cell, const Matrix& p) {
  if (abstraction_cell.dim() != concrete.dim() || p.rows() != concrete.dim()) {
    throw Error(ErrorCode::DimensionMismatch, "abstraction cell must be expressed in the concrete state space");
  }
  Matrix e = Matrix::vstack(Matrix::hstack(concrete.e(), concrete.e() * p),
                            Matrix::hstack(abstraction_cell.e(), abstraction_cell.e() * p));
  Vector f = concrete.f().append(abstraction_cell.f());
  const bool conic =
      classify_cell(concrete) == CellKind::Conic && classify_cell(abstraction_cell) == CellKind::Conic;
  return {Polyhedron(std::move(e), std::move(f)), conic ? CellKind::Conic : CellKind::Affine};
}

std::vector<JointCell> joint_partition_pwa(const Partition& concrete, const std::vector<Polyhedron>& abstraction_cells,
                                           const std::vector<Matrix>& p) {
  if (p.size() != concrete.size()) throw Error(ErrorCode::DimensionMismatch, "one P matrix per concrete cell is required");
  std::vector<JointCell> out;
  out.reserve(concrete.size() * abstraction_cells.size());
  for (std::size_t i = 0; i < concrete.size(); ++i) {
    for (const auto& ac : abstraction_cells) out.push_back(joint_cell_pair(concrete.cell(i), ac, p[i]));
  }
  return out;
}

Polyhedron abstraction_cell_estimate(const Polyhedron& abstraction_cell, const Matrix& p, const Vector& xtilde) {
  if (p.rows() != abstraction_cell.dim() || xtilde.size() != abstraction_cell.dim()) {
    throw Error(ErrorCode::DimensionMismatch, "abstraction_cell_estimate dimensions");
  }
  return Polyhedron(abstraction_cell.e() * p, abstraction_cell.f() - abstraction_cell.e() * xtilde);
}

namespace {

bool feasible_2d(const Polyhedron& p, double x, double y) {
  const Matrix& e = p.e();
  for (std::size_t k = 0; k < e.rows(); ++k) {
    const double scale = std::max(1.0, std::hypot(e(k, 0), e(k, 1)));
    if (e(k, 0) * x + e(k, 1) * y - p.f()[k] < -1e-9 * scale) return false;
  }
  return true;
}

bool has_recession_direction(const Matrix& e) {
  std::vector<std::array<double, 2>> dirs;
  for (std::size_t k = 0; k < e.rows(); ++k) {
    const double nrm = std::hypot(e(k, 0), e(k, 1));
    if (nrm == 0.0) continue;
    dirs.push_back({-e(k, 1) / nrm, e(k, 0) / nrm});
    dirs.push_back({e(k, 1) / nrm, -e(k, 0) / nrm});
  }
  if (dirs.empty()) return true;  // every row is zero
  for (const auto& d : dirs) {
    bool ok = true;
    for (std::size_t k = 0; k < e.rows() && ok; ++k) {
      const double nrm = std::hypot(e(k, 0), e(k, 1));
      ok = e(k, 0) * d[0] + e(k, 1) * d[1] >= -1e-12 * nrm;
    }
    if (ok) return true;
  }
  return false;
}

}  // namespace

std::vector<std::array<double, 2>> vertices_2d(const Polyhedron& p) {
  if (p.dim() != 2) throw Error(ErrorCode::NotTwoD, "vertices_2d needs a 2-D polyhedron");
  const Matrix& e = p.e();
  const Vector& f = p.f();

  std::vector<std::array<double, 2>> pts;
  for (std::size_t a = 0; a < e.rows(); ++a) {
    for (std::size_t b = a + 1; b < e.rows(); ++b) {
      const double det = e(a, 0) * e(b, 1) - e(a, 1) * e(b, 0);
      const double scale = std::hypot(e(a, 0), e(a, 1)) * std::hypot(e(b, 0), e(b, 1));
      if (scale == 0.0 || std::abs(det) <= 1e-12 * scale) continue;
      const double x = (f[a] * e(b, 1) - e(a, 1) * f[b]) / det;
      const double y = (e(a, 0) * f[b] - f[a] * e(b, 0)) / det;
      if (!feasible_2d(p, x, y)) continue;
      const bool dup = std::any_of(pts.begin(), pts.end(), [&](const auto& q) {
        return std::abs(q[0] - x) <= 1e-9 * (1.0 + std::abs(x)) && std::abs(q[1] - y) <= 1e-9 * (1.0 + std::abs(y));
      });
      if (!dup) pts.push_back({x, y});
    }
  }

  if (has_recession_direction(e)) {
    bool nonempty = !pts.empty() || feasible_2d(p, 0.0, 0.0);
    for (std::size_t k = 0; k < e.rows() && !nonempty; ++k) {
      const double n2 = e(k, 0) * e(k, 0) + e(k, 1) * e(k, 1);
      if (n2 == 0.0) continue;
      nonempty = feasible_2d(p, e(k, 0) * f[k] / n2, e(k, 1) * f[k] / n2);
    }
    if (nonempty) throw Error(ErrorCode::Unbounded, "polyhedron is unbounded");
    throw Error(ErrorCode::Empty, "polyhedron is empty");
  }
  if (pts.empty()) throw Error(ErrorCode::Empty, "polyhedron is empty");

  double cx = 0.0;
  double cy = 0.0;
  for (const auto& q : pts) {
    cx += q[0];
    cy += q[1];
  }
  cx /= static_cast<double>(pts.size());
  cy /= static_cast<double>(pts.size());
  std::sort(pts.begin(), pts.end(), [&](const auto& u, const auto& v) {
    return std::atan2(u[1] - cy, u[0] - cx) < std::atan2(v[1] - cy, v[0] - cx);
  });
  // Start from the lowest-left vertex for a stable ordering.
  const auto first = std::min_element(pts.begin(), pts.end(), [](const auto& u, const auto& v) {
    return u[1] < v[1] || (u[1] == v[1] && u[0] < v[0]);
  });
  std::rotate(pts.begin(), first, pts.end());
  return pts;
}

bool contains_mapped(const Polyhedron& z, const Matrix& p, const Vector& yhat, const Polyhedron& x) {
  if (p.cols() != 2 || p.rows() != x.dim() || yhat.size() != x.dim()) {
    throw Error(ErrorCode::DimensionMismatch, "contains_mapped dimensions");
  }
  for (const auto& v : vertices_2d(z)) {
    if (!x.contains(p * Vector{v[0], v[1]} + yhat)) return false;
  }
  return true;
}

}  // namespace pwahier
