#ifndef PWAHIER_TOY_JOINT_HPP
#define PWAHIER_TOY_JOINT_HPP

#include "pwahier/relation.hpp"

namespace pwahier::test {

/// Joint system over ω = (x̃, x₂) with n = m = dim/2 and the given blocks.
/// The cell is the whole space, tagged with the requested kind.
inline JointSystem toy_joint(const Matrix& a_prime, const Matrix& c_prime, CellKind kind,
                             const Matrix& b2_prime = Matrix()) {
  const std::size_t d = a_prime.rows();
  const std::size_t n = d - d / 2;
  const std::size_t m = d / 2;
  const std::size_t q = b2_prime.empty() ? 1 : b2_prime.cols();
  const Matrix b1(d, m);
  const Matrix b2 = b2_prime.empty() ? Matrix(d, q) : b2_prime;
  const Matrix dp = Matrix::vstack(Matrix::identity(n), Matrix(m, n));
  return JointSystem{.mode_i = 0,
                     .mode_j = 0,
                     .n = n,
                     .m = m,
                     .q = q,
                     .a_prime = a_prime,
                     .b1_prime = b1,
                     .b2_prime = b2,
                     .d_prime = dp,
                     .c_prime = c_prime,
                     .abar = Matrix::block_diag(a_prime, Matrix(1, 1)),
                     .b1bar = Matrix::vstack(b1, Matrix(1, m)),
                     .b2bar = Matrix::vstack(b2, Matrix(1, q)),
                     .dbar = Matrix::vstack(dp, Matrix(1, n)),
                     .cbar = Matrix::hstack(c_prime, Matrix(c_prime.rows(), 1)),
                     .cell = JointCell{Polyhedron(Matrix(1, d), Vector{0}), kind},
                     .p = Matrix(n, m),
                     .iface = Interface{}};
}

inline ModeCertificate conic_form(const Matrix& m) {
  ModeCertificate c;
  c.kind = CellKind::Conic;
  c.m = m;
  return c;
}

inline ModeCertificate affine_form(const Matrix& m, double m_scalar) {
  ModeCertificate c;
  c.kind = CellKind::Affine;
  c.m = m;
  c.m_scalar = m_scalar;
  return c;
}

}  // namespace pwahier::test

#endif  // PWAHIER_TOY_JOINT_HPP
