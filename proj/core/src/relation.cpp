#include "pwahier/relation.hpp"

#include <cmath>
#include <string>

#include "pwahier/error.hpp"

namespace pwahier {

RelationResiduals relation_residuals(const Matrix& a, const Matrix& b, const Matrix& c, const Matrix& f,
                                     const Matrix& h, const Matrix& p, const Matrix& q) {
  return {(h - c * p).frobenius_norm(), (p * f - a * p - b * q).frobenius_norm()};
}

double relation_tolerance(const Matrix& a, const Matrix& h) {
  return 1e-8 * (1.0 + spectral_norm(h) + spectral_norm(a));
}

RelationMaps solve_relation(const Matrix& a, const Matrix& b, const Matrix& c, const Matrix& f, const Matrix& h) {
  const std::size_t n = a.rows();
  const std::size_t m = f.rows();
  const std::size_t p_in = b.cols();
  const std::size_t k = c.rows();
  if (!a.square() || b.rows() != n || c.cols() != n || !f.square() || h.rows() != k || h.cols() != m) {
    throw Error(ErrorCode::DimensionMismatch, "solve_relation: inconsistent A, B, C, F, H");
  }

  // Unknowns z = [vec P; vec Q] (column-major).
  //   (I_m ⊗ C) vec P                         = vec H
  //   (Fᵀ ⊗ I_n − I_m ⊗ A) vec P − (I_m ⊗ B) vec Q = 0
  const Matrix im = Matrix::identity(m);
  const std::size_t np = n * m;
  const std::size_t nq = p_in * m;
  Matrix coeff(k * m + n * m, np + nq);
  coeff.set_block(0, 0, kron(im, c));
  coeff.set_block(k * m, 0, kron(f.transpose(), Matrix::identity(n)) - kron(im, a));
  coeff.set_block(k * m, np, -kron(im, b));
  Vector rhs(k * m + n * m);
  rhs.set_segment(0, h.vec());

  const auto ls = kron_solve_least_squares(coeff, rhs);
  RelationMaps out;
  out.p = Matrix::unvec(ls.solution.segment(0, np), n, m);
  out.q = Matrix::unvec(ls.solution.segment(np, nq), p_in, m);
  out.residual = ls.residual;
  out.tolerance = relation_tolerance(a, h);
  out.certified = out.residual <= out.tolerance;
  return out;
}

Pairing solve_relation_pairing(const std::vector<PwaMode>& concrete, const std::vector<AbstractionMode>& abstraction) {
  if (abstraction.empty()) throw Error(ErrorCode::InvalidArgument, "pairing needs at least one abstraction mode");
  Pairing out;
  for (std::size_t i = 0; i < concrete.size(); ++i) {
    const auto& mi = concrete[i];
    std::optional<std::size_t> best;
    RelationMaps best_maps;
    double best_norm = 0.0;
    for (std::size_t j = 0; j < abstraction.size(); ++j) {
      const auto& aj = abstraction[j];
      auto maps = solve_relation(mi.a, mi.b, mi.c, aj.f, aj.h);
      if (!maps.certified) continue;
      const double nrm = std::pow(maps.p.frobenius_norm(), 2) + std::pow(maps.q.frobenius_norm(), 2);
      if (!best || nrm < best_norm - 1e-9 * (1.0 + best_norm)) {
        best = j;
        best_norm = nrm;
        best_maps = std::move(maps);
      }
    }
    if (!best) {
      throw Error(ErrorCode::NoFeasiblePairing, "no abstraction mode admits a relation for concrete mode " +
                                                    std::to_string(i + 1));
    }
    out.abstraction_mode.push_back(*best);
    out.maps.push_back(std::move(best_maps));
  }
  return out;
}

Matrix default_r(const Matrix& b, const Matrix& p, const Matrix& g) {
  if (p.rows() != b.rows() || p.cols() != g.rows()) throw Error(ErrorCode::DimensionMismatch, "default_r dimensions");
  const Matrix bbt = b * b.transpose();
  const Matrix btb = b.transpose() * b;
  Matrix pinv;
  if (lambda_min(bbt) >= 1e-10) {
    pinv = b.transpose() * spd_inverse(bbt);
  } else if (lambda_min(btb) >= 1e-10) {
    pinv = spd_inverse(btb) * b.transpose();
  } else {
    throw Error(ErrorCode::SingularBBt, "B has neither full row nor full column rank");
  }
  return pinv * p * g;
}

Vector interface_linear(const Vector& xtilde, const Vector& x2, const Vector& u2bar, const Matrix& r,
                        const Matrix& q, const Matrix& l, const Matrix& k) {
  if (r.cols() != u2bar.size() || q.cols() != x2.size() || k.cols() != xtilde.size() || r.rows() != q.rows() ||
      r.rows() != k.rows()) {
    throw Error(ErrorCode::DimensionMismatch, "interface dimensions");
  }
  return r * u2bar + (q + r * l) * x2 + k * xtilde;
}

Vector interface_pwa(const Vector& xtilde, const Vector& x2, const Vector& u2bar, const Matrix& r_ij,
                     const Matrix& q_i, const Matrix& l_j, const Matrix& k_i) {
  return interface_linear(xtilde, x2, u2bar, r_ij, q_i, l_j, k_i);
}

Interface make_interface(const PwaMode& mode, const AbstractionMode& abstraction, const RelationMaps& relation,
                         const Matrix& k, std::optional<Matrix> r_override) {
  if (k.rows() != mode.input_dim() || k.cols() != mode.state_dim()) {
    throw Error(ErrorCode::DimensionMismatch, "K must be p x n");
  }
  if (!is_hurwitz(mode.a + mode.b * k, 1e-8)) throw Error(ErrorCode::NotHurwitz, "A + B K is not Hurwitz");
  Matrix r = r_override ? std::move(*r_override) : default_r(mode.b, relation.p, abstraction.g);
  if (r.rows() != mode.input_dim() || r.cols() != abstraction.input_dim()) {
    throw Error(ErrorCode::DimensionMismatch, "R must be p x q");
  }
  return {std::move(r), relation.q, abstraction.l, k};
}

Vector JointSystem::omega_rate(const Vector& omega, const Vector& u2bar, const Vector& c) const {
  const Vector x2 = omega.segment(n, m);
  return a_prime * omega + b1_prime * x2 + b2_prime * u2bar + d_prime * c;
}

Vector JointSystem::omegabar_rate(const Vector& omegabar, const Vector& x2, const Vector& u2bar, const Vector& c) const {
  return abar * omegabar + b1bar * x2 + b2bar * u2bar + dbar * c;
}

JointSystem assemble_joint(const PwaMode& mode, const AbstractionMode& abstraction, const RelationMaps& relation,
                           const Interface& iface, JointCell cell, std::size_t i, std::size_t j) {
  if (!relation.certified) {
    throw Error(ErrorCode::UncertifiedRelation, "relation for mode " + std::to_string(i + 1) + " is not certified");
  }
  const std::size_t n = mode.state_dim();
  const std::size_t m = abstraction.state_dim();
  const std::size_t q = abstraction.input_dim();
  const std::size_t k = mode.output_dim();
  const std::size_t d = n + m;

  const Matrix br_pg = mode.b * iface.r - relation.p * abstraction.g;
  Matrix a_prime = Matrix::block_diag(mode.a + mode.b * iface.k, abstraction.f + abstraction.g * abstraction.l);
  Matrix b1_prime = Matrix::vstack(br_pg * abstraction.l, Matrix(m, m));
  Matrix b2_prime = Matrix::vstack(br_pg, abstraction.g);
  Matrix d_prime = Matrix::vstack(Matrix::identity(n), Matrix(m, n));
  Matrix c_prime = Matrix::hstack(mode.c, Matrix(k, m));
  JointSystem js{
      .mode_i = i,
      .mode_j = j,
      .n = n,
      .m = m,
      .q = q,
      .a_prime = a_prime,
      .b1_prime = b1_prime,
      .b2_prime = b2_prime,
      .d_prime = d_prime,
      .c_prime = c_prime,
      .abar = Matrix::block_diag(a_prime, Matrix(1, 1)),
      .b1bar = Matrix::vstack(b1_prime, Matrix(1, m)),
      .b2bar = Matrix::vstack(b2_prime, Matrix(1, q)),
      .dbar = Matrix::vstack(d_prime, Matrix(1, n)),
      .cbar = Matrix::hstack(c_prime, Matrix(k, 1)),
      .cell = std::move(cell),
      .p = relation.p,
      .iface = iface,
  };
  if (js.cell.region.dim() != d) throw Error(ErrorCode::DimensionMismatch, "joint cell must live in (x~, x2) space");
  return js;
}

std::vector<JointSystem> assemble_joint_linear(const PwaSystem& system, const LinearAbstraction& abstraction,
                                               const std::vector<RelationMaps>& relations,
                                               const std::vector<Interface>& interfaces) {
  if (relations.size() != system.num_modes() || interfaces.size() != system.num_modes()) {
    throw Error(ErrorCode::DimensionMismatch, "one relation and interface per mode is required");
  }
  std::vector<Matrix> ps;
  for (const auto& r : relations) ps.push_back(r.p);
  auto cells = joint_partition_linear(system.partition(), ps);
  std::vector<JointSystem> out;
  for (std::size_t i = 0; i < system.num_modes(); ++i) {
    out.push_back(assemble_joint(system.mode(i), abstraction.mode(), relations[i], interfaces[i], cells[i], i, 0));
  }
  return out;
}

std::vector<JointSystem> assemble_joint_pwa(const PwaSystem& system, const PwaAbstraction& abstraction,
                                            const Pairing& pairing, const std::vector<Interface>& interfaces) {
  if (pairing.abstraction_mode.size() != system.num_modes() || interfaces.size() != system.num_modes()) {
    throw Error(ErrorCode::DimensionMismatch, "one pairing entry and interface per mode is required");
  }
  std::vector<JointSystem> out;
  for (std::size_t i = 0; i < system.num_modes(); ++i) {
    const std::size_t j = pairing.abstraction_mode[i];
    auto cell = joint_cell_pair(system.partition().cell(i), abstraction.concrete_space_cells().at(j), pairing.maps[i].p);
    out.push_back(assemble_joint(system.mode(i), abstraction.mode(j), pairing.maps[i], interfaces[i], std::move(cell),
                                 i, j));
  }
  return out;
}

}  // namespace pwahier
