#include "pwahier/certificate.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "pwahier/error.hpp"

namespace pwahier {
namespace {

bool nonnegative_symmetric(const Matrix& x) {
  if (x.empty()) return true;
  if (!x.square()) return false;
  for (std::size_t r = 0; r < x.rows(); ++r)
    for (std::size_t c = 0; c < x.cols(); ++c) {
      if (x(r, c) < 0.0 || x(r, c) != x(c, r)) return false;
    }
  return true;
}

// ĒᵀXĒ, treating an empty X as zero.
Matrix bounding_term(const Matrix& ebar, const Matrix& x) {
  if (x.empty()) return Matrix(ebar.cols(), ebar.cols());
  if (x.rows() != ebar.rows() || x.cols() != ebar.rows()) {
    throw Error(ErrorCode::DimensionMismatch, "multiplier size must match the cell bounding row count");
  }
  return ebar.transpose() * x * ebar;
}

}  // namespace

Matrix ModeCertificate::mbar() const {
  if (kind == CellKind::Conic) return m;
  return Matrix::block_diag(m, Matrix(1, 1, m_scalar));
}

Vector form_coordinates(CellKind kind, const Vector& omega) {
  return kind == CellKind::Affine ? omega.append(Vector{1.0}) : omega;
}

double sim_fn_value(const Matrix& mbar, double kappa, const Vector& z) {
  const double quad = z.dot(mbar * z);
  if (quad < -1e-12) throw Error(ErrorCode::NegativeQuadForm, "quadratic form is negative");
  return std::sqrt(std::max(0.0, quad)) / kappa;
}

double sim_fn_value(const ModeCertificate& cert, double kappa, const Vector& omega) {
  return sim_fn_value(cert.mbar(), kappa, form_coordinates(cert.kind, omega));
}

LmiReport verify_lmi(const ModeCertificate& cert, double lambda, const JointSystem& joint) {
  const bool affine = cert.kind == CellKind::Affine;
  const Matrix mbar = cert.mbar();
  const Matrix a = affine ? joint.abar : joint.a_prime;
  const Matrix c = affine ? joint.cbar : joint.c_prime;
  const Matrix e = affine ? joint.cell.ebar() : joint.cell.region.e();
  if (mbar.rows() != a.rows()) {
    throw Error(ErrorCode::DimensionMismatch, "certificate dimension " + std::to_string(mbar.rows()) +
                                                  " does not match joint system " + std::to_string(a.rows()));
  }
  if (e.cols() != a.rows()) {
    throw Error(ErrorCode::DimensionMismatch, "cell kind of certificate and joint cell disagree");
  }

  // λ̄ = blockdiag(λI, 0) on ω̄; λI on ω.
  Matrix lam = Matrix::identity(a.rows()) * lambda;
  if (affine) lam(a.rows() - 1, a.rows() - 1) = 0.0;

  LmiReport rep;
  rep.output_margin = lambda_min((mbar - c.transpose() * c).symmetric_part());
  rep.positivity_margin = lambda_min((mbar - bounding_term(e, cert.u)).symmetric_part());
  const Matrix decrease =
      (a.transpose() * mbar + mbar * a + bounding_term(e, cert.w) + lam * mbar).symmetric_part();
  rep.decrease_margin = lambda_max(decrease);
  const std::size_t state = joint.omega_dim();
  rep.decrease_margin_state = lambda_max(decrease.block(0, 0, state, state));
  rep.multipliers_nonnegative = nonnegative_symmetric(cert.u) && nonnegative_symmetric(cert.w);
  bool factorization_ok = true;
  if (cert.t) {
    const Matrix j = cert.jbar ? *cert.jbar : Matrix::identity(mbar.rows());
    rep.factorization_error = (mbar - j.transpose() * *cert.t * j).frobenius_norm();
    factorization_ok = rep.factorization_error <= 1e-8;
  }
  const bool m_positive = !affine || cert.m_scalar > 0.0;
  rep.feasible = rep.output_margin >= -kLmiTolerance && rep.positivity_margin >= kLmiTolerance &&
                 rep.decrease_margin <= kLmiTolerance && rep.multipliers_nonnegative && factorization_ok &&
                 m_positive && lambda > 0.0;
  return rep;
}

namespace {

std::vector<double> default_grid(const std::vector<JointSystem>& joints, const SynthesisOptions& options) {
  double abscissa = -std::numeric_limits<double>::infinity();
  for (const auto& js : joints) abscissa = std::max(abscissa, spectral_abscissa_estimate(js.a_prime));
  if (!(abscissa < 0.0)) {
    throw Error(ErrorCode::SynthesisFailed, "closed-loop joint dynamics are not Hurwitz");
  }
  const double top = 2.0 * std::abs(abscissa);
  std::vector<double> grid;
  if (top <= options.lambda_floor || options.grid_points < 2) {
    grid.push_back(std::min(top, options.lambda_floor) * 0.5);
    return grid;
  }
  const double ratio = std::log(top / options.lambda_floor);
  for (std::size_t k = 0; k < options.grid_points; ++k) {
    const double frac = static_cast<double>(k) / static_cast<double>(options.grid_points - 1);
    grid.push_back(top * std::exp(-ratio * frac));
  }
  return grid;
}

std::optional<ModeCertificate> attempt_mode(const JointSystem& js, double lambda, double epsilon) {
  const std::size_t d = js.omega_dim();
  const Matrix shifted = js.a_prime + Matrix::identity(d) * (0.5 * lambda);
  const Matrix st = shifted.transpose();
  const Matrix id = Matrix::identity(d);
  // vec(SᵀM + MS) = (I ⊗ Sᵀ + Sᵀ ⊗ I) vec M
  const Matrix op = kron(id, st) + kron(st, id);
  const Vector rhs = (id * -epsilon).vec();
  const auto ls = kron_solve_least_squares(op, rhs);
  Matrix m = Matrix::unvec(ls.solution, d, d).symmetric_part();
  if (!m.all_finite() || lambda_min(m) <= 0.0) return std::nullopt;

  // Scale so that M ⪰ C′ᵀC′: factor = λ_max(M^{-1/2} C′ᵀC′ M^{-1/2}).
  const Matrix root = matrix_sqrt_psd(m);
  const Matrix root_inv = spd_inverse(root);
  const Matrix ctc = js.c_prime.transpose() * js.c_prime;
  const double factor = std::max(1.0, lambda_max((root_inv * ctc * root_inv).symmetric_part()));
  m *= factor * (1.0 + 1e-9);

  ModeCertificate cert;
  cert.kind = js.kind();
  cert.m = std::move(m);
  cert.m_scalar = cert.kind == CellKind::Affine ? 1.0 : 0.0;
  const Matrix e = cert.kind == CellKind::Affine ? js.cell.ebar() : js.cell.region.e();
  cert.u = Matrix(e.rows(), e.rows());
  cert.w = Matrix(e.rows(), e.rows());
  if (!verify_lmi(cert, lambda, js).feasible) return std::nullopt;
  return cert;
}

}  // namespace

Certificate synthesize_certificate(const std::vector<JointSystem>& joints, double kappa,
                                   const SynthesisOptions& options) {
  if (joints.empty()) throw Error(ErrorCode::InvalidArgument, "no joint systems to certify");
  if (!(kappa > 0.0)) throw Error(ErrorCode::InvalidArgument, "kappa must be positive");
  const std::vector<double> grid = options.lambda_grid.empty() ? default_grid(joints, options) : options.lambda_grid;
  for (double lambda : grid) {
    if (!(lambda > 0.0)) continue;
    Certificate cert{kappa, lambda, {}};
    bool ok = true;
    for (const auto& js : joints) {
      auto mode = attempt_mode(js, lambda, options.epsilon);
      if (!mode) {
        ok = false;
        break;
      }
      cert.modes.push_back(std::move(*mode));
    }
    if (ok) return cert;
  }
  throw Error(ErrorCode::SynthesisFailed, "no lambda on the grid yields a feasible certificate for every mode");
}

Gains Gains::with_sups(double u2bar_sup, double c_sup, double x2_sup) const {
  Gains g = *this;
  g.b0 = gamma1 * u2bar_sup + gamma2 * c_sup + gamma3 * x2_sup;
  g.b1 = g.b0 + sqrt_m;
  return g;
}

Gains compute_gains(const ModeCertificate& cert, double lambda, const JointSystem& joint, double u2bar_sup,
                    double c_sup, double x2_sup) {
  const auto rep = verify_lmi(cert, lambda, joint);
  if (!rep.feasible) {
    throw Error(ErrorCode::InfeasibleCertificate,
                "certificate for mode " + std::to_string(joint.mode_i + 1) + " fails its LMI conditions");
  }
  const bool affine = cert.kind == CellKind::Affine;
  const Matrix root = matrix_sqrt_psd(cert.mbar());
  const Matrix& b1 = affine ? joint.b1bar : joint.b1_prime;
  const Matrix& b2 = affine ? joint.b2bar : joint.b2_prime;
  Gains g;
  g.kind = cert.kind;
  g.gamma1 = 2.0 * spectral_norm(root * b2) / lambda;
  g.gamma2 = 2.0 * spectral_norm(root) / lambda;
  g.gamma3 = 2.0 * spectral_norm(root * b1) / lambda;
  g.sqrt_m = affine ? std::sqrt(cert.m_scalar) : 0.0;
  return g.with_sups(u2bar_sup, c_sup, x2_sup);
}

double error_bound(double kappa, const Gains& gains, double v_now) {
  const double b = gains.bound();
  return v_now >= b ? kappa * v_now : kappa * b;
}

double sim_fn_derivative(const Matrix& mbar, double kappa, const Vector& z, const Vector& z_rate) {
  const double v = sim_fn_value(mbar, kappa, z);
  if (v <= 1e-12) throw Error(ErrorCode::DegenerateState, "simulation function too small to differentiate");
  return z.dot(mbar * z_rate) / (kappa * kappa * v);
}

double sim_fn_derivative(const ModeCertificate& cert, double kappa, const JointSystem& joint, const Vector& omega,
                         const Vector& u2bar, const Vector& c) {
  const Vector rate = joint.omega_rate(omega, u2bar, c);
  if (cert.kind == CellKind::Affine) {
    return sim_fn_derivative(cert.mbar(), kappa, form_coordinates(cert.kind, omega), rate.append(Vector{0.0}));
  }
  return sim_fn_derivative(cert.mbar(), kappa, omega, rate);
}

}  // namespace pwahier
