#include <gtest/gtest.h>

#include <cmath>

#include "pwahier/certificate.hpp"
#include "pwahier/pipeline.hpp"
#include "test_support.hpp"

namespace pwahier {
namespace {

TEST(CertificateProperty, OutputErrorIsDominated) {
  test::Rng rng(501);
  for (int which : {1, 2}) {
    const PreparedModel prep = prepare_model(test::load_case(which));
    const double kappa = prep.certificate.kappa;
    for (std::size_t i = 0; i < prep.joints.size(); ++i) {
      const JointSystem& js = prep.joints[i];
      const ModeCertificate& cert = prep.certificate.modes[i];
      ASSERT_TRUE(prep.lmi[i].feasible);
      const Matrix& c = cert.kind == CellKind::Affine ? js.cbar : js.c_prime;
      for (int k = 0; k < 1000; ++k) {
        const Vector z = test::random_vector(rng, cert.form_dim(), std::pow(10.0, test::uniform(rng, -3, 3)));
        ASSERT_LE((c * z).norm() / kappa, sim_fn_value(cert.mbar(), kappa, z) + 1e-9);
      }
    }
  }
}

TEST(CertificateProperty, VerdictInvariantUnderOrthonormalChangeOfBasis) {
  test::Rng rng(502);
  const PreparedModel prep = prepare_model(test::load_case(1));
  for (std::size_t i = 0; i < prep.joints.size(); ++i) {
    const JointSystem& js = prep.joints[i];
    for (double lambda : {prep.certificate.lambda, 50.0}) {
      const ModeCertificate& cert = prep.certificate.modes[i];
      const LmiReport base = verify_lmi(cert, lambda, js);
      for (int k = 0; k < 20; ++k) {
        const Matrix t = test::random_orthonormal(rng, js.omega_dim());
        JointSystem moved = js;
        moved.a_prime = t.transpose() * js.a_prime * t;
        moved.c_prime = js.c_prime * t;
        moved.cell = JointCell{Polyhedron(js.cell.region.e() * t, js.cell.region.f()), js.cell.kind};
        ModeCertificate mc = cert;
        mc.m = (t.transpose() * cert.m * t).symmetric_part();
        const LmiReport rep = verify_lmi(mc, lambda, moved);
        ASSERT_EQ(rep.feasible, base.feasible);
        const double scale = 1e-9 * (1.0 + cert.m.frobenius_norm() * (1.0 + js.a_prime.frobenius_norm()));
        EXPECT_NEAR(rep.output_margin, base.output_margin, scale);
        EXPECT_NEAR(rep.positivity_margin, base.positivity_margin, scale);
        EXPECT_NEAR(rep.decrease_margin, base.decrease_margin, scale);
      }
    }
  }
}

TEST(CertificateProperty, AffineVerdictInvariantUnderOrthonormalChangeOfState) {
  test::Rng rng(503);
  const PreparedModel prep = prepare_model(test::load_case(2));
  for (std::size_t i = 0; i < prep.joints.size(); ++i) {
    const JointSystem& js = prep.joints[i];
    const ModeCertificate& cert = prep.certificate.modes[i];
    const LmiReport base = verify_lmi(cert, prep.certificate.lambda, js);
    for (int k = 0; k < 20; ++k) {
      const std::size_t d = js.omega_dim();
      const Matrix t = test::random_orthonormal(rng, d);
      const Matrix tbar = Matrix::block_diag(t, Matrix::identity(1));
      JointSystem moved = js;
      moved.abar = tbar.transpose() * js.abar * tbar;
      moved.cbar = js.cbar * tbar;
      moved.cell = JointCell{Polyhedron(js.cell.region.e() * t, js.cell.region.f()), js.cell.kind};
      ModeCertificate mc = cert;
      mc.m = (t.transpose() * cert.m * t).symmetric_part();
      const LmiReport rep = verify_lmi(mc, prep.certificate.lambda, moved);
      ASSERT_EQ(rep.feasible, base.feasible);
      EXPECT_NEAR(rep.decrease_margin_state, base.decrease_margin_state, 1e-8);
      EXPECT_NEAR(rep.output_margin, base.output_margin, 1e-8);
    }
  }
}

TEST(CertificateProperty, DoublingTheFormScalesSlopesBySqrtTwo) {
  for (int which : {1, 2}) {
    const PreparedModel prep = prepare_model(test::load_case(which));
    for (std::size_t i = 0; i < prep.joints.size(); ++i) {
      const ModeCertificate& cert = prep.certificate.modes[i];
      ModeCertificate doubled = cert;
      doubled.m = 2.0 * cert.m;
      doubled.m_scalar = 2.0 * cert.m_scalar;
      const double lambda = prep.certificate.lambda;
      const Gains g = compute_gains(cert, lambda, prep.joints[i], 1.0, 1.0, 1.0);
      const Gains g2 = compute_gains(doubled, lambda, prep.joints[i], 1.0, 1.0, 1.0);
      for (auto [a, b] : {std::pair{g.gamma1, g2.gamma1}, std::pair{g.gamma2, g2.gamma2},
                          std::pair{g.gamma3, g2.gamma3}}) {
        EXPECT_GE(a, 0.0);
        EXPECT_NEAR(b, std::sqrt(2.0) * a, 1e-12 * (1.0 + a));
      }
      EXPECT_NEAR(g2.sqrt_m, std::sqrt(2.0) * g.sqrt_m, 1e-12);
      EXPECT_GE(g.b1, g.b0);
    }
  }
}

}  // namespace
}  // namespace pwahier
