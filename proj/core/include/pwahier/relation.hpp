#ifndef PWAHIER_RELATION_HPP
#define PWAHIER_RELATION_HPP

#include <cstddef>
#include <optional>
#include <vector>

#include "pwahier/linalg.hpp"
#include "pwahier/polytope.hpp"
#include "pwahier/systems.hpp"

namespace pwahier {

/// Solution (P, Q) of H = C·P, P·F = A·P + B·Q.
struct RelationMaps {
  Matrix p;
  Matrix q;
  double residual = 0.0;
  double tolerance = 0.0;
  bool certified = false;
};

struct RelationResiduals {
  double output = 0.0;    // ‖H − C P‖_F
  double dynamics = 0.0;  // ‖P F − A P − B Q‖_F
};

RelationResiduals relation_residuals(const Matrix& a, const Matrix& b, const Matrix& c, const Matrix& f,
                                     const Matrix& h, const Matrix& p, const Matrix& q);

/// Certification threshold 1e-8·(1 + ‖H‖ + ‖A‖), spectral norms.
double relation_tolerance(const Matrix& a, const Matrix& h);

/// Vectorizes both equations into one stacked system in (vec P, vec Q) and
/// returns its minimum-norm least-squares solution.
RelationMaps solve_relation(const Matrix& a, const Matrix& b, const Matrix& c, const Matrix& f, const Matrix& h);

struct Pairing {
  /// Abstraction mode j chosen for each concrete mode i.
  std::vector<std::size_t> abstraction_mode;
  std::vector<RelationMaps> maps;
};

/// For every concrete mode, solves against each abstraction mode and keeps the
/// certified candidate with the smallest ‖P‖²+‖Q‖² (ties: smallest j).
/// Throws NoFeasiblePairing when a concrete mode has no certified candidate.
Pairing solve_relation_pairing(const std::vector<PwaMode>& concrete, const std::vector<AbstractionMode>& abstraction);

/// B⁺·P·G with B⁺ the Moore-Penrose inverse, which is Bᵀ(BBᵀ)⁻¹ for full row
/// rank B and (BᵀB)⁻¹Bᵀ for full column rank B. SingularBBt otherwise.
Matrix default_r(const Matrix& b, const Matrix& p, const Matrix& g);

/// u_v = R ū₂ + (Q + R L) x₂ + K x̃.
Vector interface_linear(const Vector& xtilde, const Vector& x2, const Vector& u2bar, const Matrix& r,
                        const Matrix& q, const Matrix& l, const Matrix& k);

/// Pair-indexed interface; same law with R_ij and L_j.
Vector interface_pwa(const Vector& xtilde, const Vector& x2, const Vector& u2bar, const Matrix& r_ij,
                     const Matrix& q_i, const Matrix& l_j, const Matrix& k_i);

struct Interface {
  Matrix r;
  Matrix q;
  Matrix l;
  Matrix k;

  Vector evaluate(const Vector& xtilde, const Vector& x2, const Vector& u2bar) const {
    return interface_linear(xtilde, x2, u2bar, r, q, l, k);
  }
};

/// Validates A + B K Hurwitz and fills R with default_r unless overridden.
Interface make_interface(const PwaMode& mode, const AbstractionMode& abstraction, const RelationMaps& relation,
                         const Matrix& k, std::optional<Matrix> r_override = std::nullopt);

/// Closed-loop joint dynamics of one mode (linear abstraction) or one pair
/// (PWA abstraction) over ω = (x̃, x₂) and ω̄ = (ω, 1):
///   ω̄' = Ā ω̄ + B̄₁ x₂ + B̄₂ ū₂ + c̄,   e = C̄ ω̄,   c̄ = D̄ c.
struct JointSystem {
  std::size_t mode_i = 0;
  std::size_t mode_j = 0;
  std::size_t n = 0;  // concrete state
  std::size_t m = 0;  // abstraction state
  std::size_t q = 0;  // abstraction input

  // ω coordinates
  Matrix a_prime;   // blockdiag(A + B K, F + G L)
  Matrix b1_prime;  // [(B R − P G) L; 0]
  Matrix b2_prime;  // [B R − P G; G]
  Matrix d_prime;   // c' = D' c = [c; 0]
  Matrix c_prime;   // [C 0]

  // ω̄ coordinates
  Matrix abar;
  Matrix b1bar;
  Matrix b2bar;
  Matrix dbar;
  Matrix cbar;

  JointCell cell;
  Matrix p;
  Interface iface;

  CellKind kind() const noexcept { return cell.kind; }
  std::size_t omega_dim() const noexcept { return n + m; }

  /// Time derivative of ω, with x₂ read from ω.
  Vector omega_rate(const Vector& omega, const Vector& u2bar, const Vector& c) const;
  /// Time derivative of ω̄; the trailing entry is always zero.
  Vector omegabar_rate(const Vector& omegabar, const Vector& x2, const Vector& u2bar, const Vector& c) const;
};

JointSystem assemble_joint(const PwaMode& mode, const AbstractionMode& abstraction, const RelationMaps& relation,
                           const Interface& iface, JointCell cell, std::size_t i, std::size_t j);

/// One joint system per concrete mode. UncertifiedRelation when any relation
/// fails its residual threshold.
std::vector<JointSystem> assemble_joint_linear(const PwaSystem& system, const LinearAbstraction& abstraction,
                                               const std::vector<RelationMaps>& relations,
                                               const std::vector<Interface>& interfaces);

/// One joint system per concrete mode i, for its paired abstraction mode j.
std::vector<JointSystem> assemble_joint_pwa(const PwaSystem& system, const PwaAbstraction& abstraction,
                                            const Pairing& pairing, const std::vector<Interface>& interfaces);

}  // namespace pwahier

#endif  // PWAHIER_RELATION_HPP
