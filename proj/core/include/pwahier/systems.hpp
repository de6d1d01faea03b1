#ifndef PWAHIER_SYSTEMS_HPP
#define PWAHIER_SYSTEMS_HPP

#include <cstddef>
#include <optional>
#include <vector>

#include "pwahier/linalg.hpp"
#include "pwahier/polytope.hpp"

namespace pwahier {

/// One affine mode ẋ = A x + B u + c, y = C x with ‖c‖∞ ≤ c_bound.
struct PwaMode {
  Matrix a;
  Matrix b;
  Matrix c;
  double c_bound = 0.0;

  std::size_t state_dim() const { return a.rows(); }
  std::size_t input_dim() const { return b.cols(); }
  std::size_t output_dim() const { return c.rows(); }
};

class PwaSystem {
 public:
  PwaSystem(std::vector<PwaMode> modes, Partition partition,
            std::optional<std::vector<ContinuityMatrix>> continuity = std::nullopt);

  const std::vector<PwaMode>& modes() const noexcept { return modes_; }
  const PwaMode& mode(std::size_t i) const { return modes_.at(i); }
  const Partition& partition() const noexcept { return partition_; }
  std::size_t num_modes() const noexcept { return modes_.size(); }
  std::size_t state_dim() const { return modes_.front().state_dim(); }
  std::size_t input_dim() const { return modes_.front().input_dim(); }
  std::size_t output_dim() const { return modes_.front().output_dim(); }

  /// User continuity matrices, or the identity [I 0; 0 1] per cell.
  ContinuityMatrix continuity(std::size_t i) const;

 private:
  std::vector<PwaMode> modes_;
  Partition partition_;
  std::optional<std::vector<ContinuityMatrix>> continuity_;
};

/// One abstraction mode ẋ₂ = F x₂ + G u₂, y₂ = H x₂ with u₂ = L x₂ + ū₂.
struct AbstractionMode {
  Matrix f;
  Matrix g;
  Matrix h;
  Matrix l;

  std::size_t state_dim() const { return f.rows(); }
  std::size_t input_dim() const { return g.cols(); }
};

class LinearAbstraction {
 public:
  explicit LinearAbstraction(AbstractionMode mode);
  const AbstractionMode& mode() const noexcept { return mode_; }

 private:
  AbstractionMode mode_;
};

/// PWA abstraction; each mode carries its cell expressed in the concrete
/// state space, E_cj x₁ ≥ f_cj.
class PwaAbstraction {
 public:
  PwaAbstraction(std::vector<AbstractionMode> modes, std::vector<Polyhedron> concrete_space_cells);

  const std::vector<AbstractionMode>& modes() const noexcept { return modes_; }
  const AbstractionMode& mode(std::size_t j) const { return modes_.at(j); }
  const std::vector<Polyhedron>& concrete_space_cells() const noexcept { return cells_; }
  const Partition& cell_partition() const noexcept { return partition_; }
  std::size_t num_modes() const noexcept { return modes_.size(); }

 private:
  std::vector<AbstractionMode> modes_;
  std::vector<Polyhedron> cells_;
  Partition partition_;
};

class DisturbanceSignal {
 public:
  enum class Kind { Zero, Constant, Sinusoid };

  static DisturbanceSignal zero(std::size_t dim);
  static DisturbanceSignal constant(Vector value);
  /// (offset + amplitude·sin t)·mask
  static DisturbanceSignal sinusoid(double offset, double amplitude, Vector mask);

  Kind kind() const noexcept { return kind_; }
  std::size_t dim() const noexcept { return vec_.size(); }
  double offset() const noexcept { return offset_; }
  double amplitude() const noexcept { return amplitude_; }
  /// Constant value, or the per-entry mask of a sinusoid.
  const Vector& vector() const noexcept { return vec_; }

  /// The same signal scaled so its supremum norm equals `sup` (zero stays zero).
  DisturbanceSignal with_sup_norm(double sup) const;

 private:
  Kind kind_ = Kind::Zero;
  double offset_ = 0.0;
  double amplitude_ = 0.0;
  Vector vec_;
};

Vector disturbance_value(const DisturbanceSignal& d, double t);
double disturbance_sup_norm(const DisturbanceSignal& d);

/// F + G·L; throws NotHurwitz unless it passes is_hurwitz with margin 1e-8.
Matrix transformed_abstraction_matrix(const Matrix& f, const Matrix& g, const Matrix& l);

}  // namespace pwahier

#endif  // PWAHIER_SYSTEMS_HPP
