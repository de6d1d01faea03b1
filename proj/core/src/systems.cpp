#include "pwahier/systems.hpp"

#include <cmath>
#include <string>

#include "pwahier/error.hpp"

namespace pwahier {
namespace {

void check_mode(const PwaMode& m, std::size_t n, std::size_t p, std::size_t k) {
  if (!m.a.square() || m.a.rows() != n) throw Error(ErrorCode::DimensionMismatch, "A must be n x n");
  if (m.b.rows() != n || m.b.cols() != p) throw Error(ErrorCode::DimensionMismatch, "B must be n x p");
  if (m.c.cols() != n || m.c.rows() != k) throw Error(ErrorCode::DimensionMismatch, "C must be k x n");
  if (!(m.c_bound >= 0.0)) throw Error(ErrorCode::InvalidArgument, "disturbance bound must be nonnegative");
  if (!m.a.all_finite() || !m.b.all_finite() || !m.c.all_finite()) {
    throw Error(ErrorCode::NonFinite, "mode matrices must be finite");
  }
}

void check_abstraction_mode(const AbstractionMode& m, std::size_t dim, std::size_t q, std::size_t k) {
  if (!m.f.square() || m.f.rows() != dim) throw Error(ErrorCode::DimensionMismatch, "F must be m x m");
  if (m.g.rows() != dim || m.g.cols() != q) throw Error(ErrorCode::DimensionMismatch, "G must be m x q");
  if (m.h.cols() != dim || m.h.rows() != k) throw Error(ErrorCode::DimensionMismatch, "H must be k x m");
  if (m.l.rows() != q || m.l.cols() != dim) throw Error(ErrorCode::DimensionMismatch, "L must be q x m");
  transformed_abstraction_matrix(m.f, m.g, m.l);
}

}  // namespace

PwaSystem::PwaSystem(std::vector<PwaMode> modes, Partition partition,
                     std::optional<std::vector<ContinuityMatrix>> continuity)
    : modes_(std::move(modes)), partition_(std::move(partition)), continuity_(std::move(continuity)) {
  if (modes_.empty()) throw Error(ErrorCode::InvalidArgument, "a PWA system needs at least one mode");
  if (modes_.size() != partition_.size()) {
    throw Error(ErrorCode::DimensionMismatch, std::to_string(modes_.size()) + " modes but " +
                                                  std::to_string(partition_.size()) + " partition cells");
  }
  const auto& first = modes_.front();
  for (const auto& m : modes_) check_mode(m, first.state_dim(), first.input_dim(), first.output_dim());
  if (partition_.dim() != first.state_dim()) throw Error(ErrorCode::DimensionMismatch, "partition dimension must be n");
  if (continuity_ && continuity_->size() != modes_.size()) {
    throw Error(ErrorCode::DimensionMismatch, "one continuity matrix per mode is required");
  }
}

ContinuityMatrix PwaSystem::continuity(std::size_t i) const {
  if (continuity_) return continuity_->at(i);
  return ContinuityMatrix::identity(state_dim(), partition_.kind(i));
}

LinearAbstraction::LinearAbstraction(AbstractionMode mode) : mode_(std::move(mode)) {
  check_abstraction_mode(mode_, mode_.f.rows(), mode_.g.cols(), mode_.h.rows());
}

PwaAbstraction::PwaAbstraction(std::vector<AbstractionMode> modes, std::vector<Polyhedron> concrete_space_cells)
    : modes_(std::move(modes)), cells_(std::move(concrete_space_cells)), partition_(cells_) {
  if (modes_.empty()) throw Error(ErrorCode::InvalidArgument, "a PWA abstraction needs at least one mode");
  if (modes_.size() != cells_.size()) throw Error(ErrorCode::DimensionMismatch, "one concrete-space cell per abstraction mode");
  const auto& first = modes_.front();
  for (const auto& m : modes_) check_abstraction_mode(m, first.state_dim(), first.input_dim(), first.h.rows());
}

DisturbanceSignal DisturbanceSignal::zero(std::size_t dim) {
  DisturbanceSignal d;
  d.kind_ = Kind::Zero;
  d.vec_ = Vector(dim);
  return d;
}

DisturbanceSignal DisturbanceSignal::constant(Vector value) {
  DisturbanceSignal d;
  d.kind_ = Kind::Constant;
  d.vec_ = std::move(value);
  return d;
}

DisturbanceSignal DisturbanceSignal::sinusoid(double offset, double amplitude, Vector mask) {
  DisturbanceSignal d;
  d.kind_ = Kind::Sinusoid;
  d.offset_ = offset;
  d.amplitude_ = amplitude;
  d.vec_ = std::move(mask);
  return d;
}

DisturbanceSignal DisturbanceSignal::with_sup_norm(double sup) const {
  const double current = disturbance_sup_norm(*this);
  if (current == 0.0 || sup == 0.0) return zero(dim());
  const double s = sup / current;
  switch (kind_) {
    case Kind::Zero: return *this;
    case Kind::Constant: return constant(s * vec_);
    case Kind::Sinusoid: return sinusoid(s * offset_, s * amplitude_, vec_);
  }
  return *this;
}

Vector disturbance_value(const DisturbanceSignal& d, double t) {
  switch (d.kind()) {
    case DisturbanceSignal::Kind::Zero: return Vector(d.dim());
    case DisturbanceSignal::Kind::Constant: return d.vector();
    case DisturbanceSignal::Kind::Sinusoid: return (d.offset() + d.amplitude() * std::sin(t)) * d.vector();
  }
  return Vector(d.dim());
}

double disturbance_sup_norm(const DisturbanceSignal& d) {
  switch (d.kind()) {
    case DisturbanceSignal::Kind::Zero: return 0.0;
    case DisturbanceSignal::Kind::Constant: return d.vector().norm_inf();
    case DisturbanceSignal::Kind::Sinusoid:
      return (std::abs(d.offset()) + std::abs(d.amplitude())) * d.vector().norm_inf();
  }
  return 0.0;
}

Matrix transformed_abstraction_matrix(const Matrix& f, const Matrix& g, const Matrix& l) {
  if (!f.square() || g.rows() != f.rows() || l.rows() != g.cols() || l.cols() != f.cols()) {
    throw Error(ErrorCode::DimensionMismatch, "F + G L dimensions");
  }
  Matrix closed = f + g * l;
  if (!is_hurwitz(closed, 1e-8)) throw Error(ErrorCode::NotHurwitz, "F + G L is not Hurwitz");
  return closed;
}

}  // namespace pwahier
