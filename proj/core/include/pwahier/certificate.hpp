#ifndef PWAHIER_CERTIFICATE_HPP
#define PWAHIER_CERTIFICATE_HPP

#include <cstddef>
#include <optional>
#include <vector>

#include "pwahier/linalg.hpp"
#include "pwahier/polytope.hpp"
#include "pwahier/relation.hpp"

namespace pwahier {

/// Quadratic form of one mode (or pair). Conic cells use M over ω; affine
/// cells use M̄ = [M 0; 0 m] over ω̄ = (ω, 1).
struct ModeCertificate {
  CellKind kind = CellKind::Conic;
  Matrix m;
  double m_scalar = 0.0;
  Matrix u;  // multipliers for the cell bounding, entrywise ≥ 0
  Matrix w;
  std::optional<Matrix> t;     // if present, M̄ must equal J̄ᵀ T J̄
  std::optional<Matrix> jbar;  // joint continuity matrix paired with t

  Matrix mbar() const;
  /// Dimension of the coordinate the form acts on (ω or ω̄).
  std::size_t form_dim() const { return mbar().rows(); }
};

struct Certificate {
  double kappa = 1.0;
  double lambda = 1.0;
  std::vector<ModeCertificate> modes;
};

struct LmiReport {
  double output_margin = 0.0;      // λ_min(M̄ − C̄ᵀC̄), needs ≥ −1e-9
  double positivity_margin = 0.0;  // λ_min(M̄ − ĒᵀUĒ), needs ≥ +1e-9
  double decrease_margin = 0.0;    // λ_max(ĀᵀM̄ + M̄Ā + ĒᵀWĒ + λ̄M̄), needs ≤ +1e-9
  /// Same matrix restricted to the ω block (differs from decrease_margin only
  /// for affine cells, whose homogeneous row contributes a zero eigenvalue).
  double decrease_margin_state = 0.0;
  double factorization_error = 0.0;  // ‖M̄ − J̄ᵀTJ̄‖_F when T is given
  bool multipliers_nonnegative = true;
  bool feasible = false;
};

inline constexpr double kLmiTolerance = 1e-9;

/// Homogenizes ω for affine cells; returns ω unchanged for conic ones.
Vector form_coordinates(CellKind kind, const Vector& omega);

/// (1/κ)·sqrt(zᵀ M̄ z) for a coordinate vector z already in form coordinates.
double sim_fn_value(const Matrix& mbar, double kappa, const Vector& z);
/// V at joint state ω (homogenized when the certificate is affine).
double sim_fn_value(const ModeCertificate& cert, double kappa, const Vector& omega);

LmiReport verify_lmi(const ModeCertificate& cert, double lambda, const JointSystem& joint);

struct SynthesisOptions {
  std::size_t grid_points = 16;
  double lambda_floor = 1e-3;
  double epsilon = 1e-6;
  /// Explicit descending λ grid; overrides the log-spaced default.
  std::vector<double> lambda_grid;
};

/// Heuristic search with an exact verifier: for each λ on a descending grid,
/// solve A′ᵀM + MA′ + λM = −εI per mode, scale M to dominate C′ᵀC′, set
/// m = 1 on affine cells and U = W = 0, and keep the first λ at which every
/// mode verifies.
Certificate synthesize_certificate(const std::vector<JointSystem>& joints, double kappa,
                                   const SynthesisOptions& options = {});

/// Linear class-K slopes and the resulting offsets b₀, b₁.
struct Gains {
  double gamma1 = 0.0;  // ū₂ channel
  double gamma2 = 0.0;  // disturbance channel
  double gamma3 = 0.0;  // x₂ channel
  double sqrt_m = 0.0;
  CellKind kind = CellKind::Conic;
  double b0 = 0.0;
  double b1 = 0.0;

  Gains with_sups(double u2bar_sup, double c_sup, double x2_sup) const;
  /// b₀ for conic cells, b₁ for affine cells.
  double bound() const { return kind == CellKind::Conic ? b0 : b1; }
};

/// Throws InfeasibleCertificate unless verify_lmi passes.
Gains compute_gains(const ModeCertificate& cert, double lambda, const JointSystem& joint, double u2bar_sup,
                    double c_sup, double x2_sup);

/// Precision δ: κ·V when V ≥ b, κ·b otherwise.
double error_bound(double kappa, const Gains& gains, double v_now);

/// zᵀM̄ż / (κ·sqrt(zᵀM̄z)); DegenerateState when the form is below 1e-24.
double sim_fn_derivative(const Matrix& mbar, double kappa, const Vector& z, const Vector& z_rate);
/// V̇ along the joint dynamics at ω with exogenous ū₂ and c.
double sim_fn_derivative(const ModeCertificate& cert, double kappa, const JointSystem& joint, const Vector& omega,
                         const Vector& u2bar, const Vector& c);

}  // namespace pwahier

#endif  // PWAHIER_CERTIFICATE_HPP
