#ifndef PWAHIER_POLYTOPE_HPP
#define PWAHIER_POLYTOPE_HPP

#include <array>
#include <cstddef>
#include <optional>
#include <vector>

#include "pwahier/linalg.hpp"

namespace pwahier {

/// Componentwise slack used for every membership test.
inline constexpr double kMembershipSlack = 1e-9;

enum class CellKind { Conic, Affine };

/// Region {x : E·x ≥ f}.
class Polyhedron {
 public:
  Polyhedron(Matrix e, Vector f);

  const Matrix& e() const noexcept { return e_; }
  const Vector& f() const noexcept { return f_; }
  std::size_t dim() const noexcept { return e_.cols(); }
  std::size_t num_constraints() const noexcept { return e_.rows(); }

  /// E·x − f; nonnegative entries mean the row is satisfied.
  Vector slack(const Vector& x) const;
  bool contains(const Vector& x, double tol = kMembershipSlack) const;

 private:
  Matrix e_;
  Vector f_;
};

CellKind classify_cell(const Polyhedron& p);

/// Cell bounding: [E −f] for affine cells, E for conic ones. Affine cells are
/// tested on the homogeneous point (x, 1).
struct CellBounding {
  Matrix ebar;
  CellKind kind;
};

CellBounding cell_bounding(const Polyhedron& p);

/// [J h] for affine cells or J for conic cells; satisfies J̄₁(x,1) = J̄₂(x,1)
/// on shared facets.
struct ContinuityMatrix {
  Matrix jbar;
  CellKind kind;

  static ContinuityMatrix identity(std::size_t dim, CellKind kind);
  /// Image of x (homogenized for affine cells).
  Vector apply(const Vector& x) const;
};

/// Largest mismatch |J̄ₐ(v,1) − J̄_b(v,1)|∞ over the given shared-facet points.
double continuity_mismatch(const ContinuityMatrix& a, const ContinuityMatrix& b,
                           const std::vector<Vector>& facet_points);

class Partition {
 public:
  Partition() = default;
  explicit Partition(std::vector<Polyhedron> cells);

  const std::vector<Polyhedron>& cells() const noexcept { return cells_; }
  const Polyhedron& cell(std::size_t i) const { return cells_.at(i); }
  std::size_t size() const noexcept { return cells_.size(); }
  std::size_t dim() const noexcept { return cells_.empty() ? 0 : cells_.front().dim(); }
  CellKind kind(std::size_t i) const { return classify_cell(cells_.at(i)); }

 private:
  std::vector<Polyhedron> cells_;
};

/// Index of a cell containing x. Keeps `previous` when it still qualifies,
/// otherwise the lowest qualifying index. Throws NoCell.
std::size_t locate_mode(const Partition& part, const Vector& x, std::optional<std::size_t> previous = std::nullopt);

/// Same, restricted to the candidate indices in the order given; returns
/// nullopt when none qualifies.
std::optional<std::size_t> first_containing(const Partition& part, const Vector& x,
                                            std::span<const std::size_t> candidates);

/// A joint cell over ω = (x̃, x₂) in the form E'ω ≥ f, with the homogeneous
/// bounding Ē = [E' −f] acting on ω̄ = (ω, 1).
struct JointCell {
  Polyhedron region;
  CellKind kind;

  Matrix ebar() const;
};

/// Joint cells {[Eᵢ EᵢPᵢ]ω ≥ fᵢ} for a linear abstraction.
std::vector<JointCell> joint_partition_linear(const Partition& part, const std::vector<Matrix>& p);

/// Joint cell for the pair (i, j): rows [Eᵢ EᵢPᵢ; E_cj E_cjPᵢ] with offsets
/// [fᵢ; f_cj]. The pair is conic only when both offsets vanish.
JointCell joint_cell_pair(const Polyhedron& concrete, const Polyhedron& abstraction_cell, const Matrix& p);

/// All pairs (i, j) in row-major order i·r + j.
std::vector<JointCell> joint_partition_pwa(const Partition& concrete, const std::vector<Polyhedron>& abstraction_cells,
                                           const std::vector<Matrix>& p);

/// Online estimate of the abstraction cell in x₂ coordinates:
/// E_a = E_c·P, f_a = f_c − E_c·x̃.
Polyhedron abstraction_cell_estimate(const Polyhedron& abstraction_cell, const Matrix& p, const Vector& xtilde);

/// Counter-clockwise vertices of a bounded 2-D polyhedron.
std::vector<std::array<double, 2>> vertices_2d(const Polyhedron& p);

/// Whether P·Z + ŷ ⊆ X for a bounded 2-D polytope Z. Vertex test, which is
/// equivalent to the multiplier characterization
///   Λₖ D_z = D Qₖ,  Σₖ Λₖ E_z ≥ E − D ŷ,  Λₖ ≥ 0,  Σₖ Qₖ = P
/// for bounded Z.
bool contains_mapped(const Polyhedron& z, const Matrix& p, const Vector& yhat, const Polyhedron& x);

}  // namespace pwahier

#endif  // PWAHIER_POLYTOPE_HPP
