#include <gtest/gtest.h>

#include "pwahier/error.hpp"
#include "pwahier/pipeline.hpp"
#include "pwahier/systems.hpp"
#include "test_support.hpp"

namespace pwahier {
namespace {

ErrorCode code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error raised";
  return ErrorCode::InvalidArgument;
}

TEST(Disturbance, SinusoidAtZeroIsOffset) {
  const auto d = DisturbanceSignal::sinusoid(-0.1, 0.05, Vector::ones(6));
  EXPECT_EQ(disturbance_value(d, 0.0), -0.1 * Vector::ones(6));
}

TEST(Disturbance, ZeroSignal) {
  const auto d = DisturbanceSignal::zero(3);
  EXPECT_EQ(disturbance_value(d, 17.3), Vector(3));
  EXPECT_EQ(disturbance_sup_norm(d), 0.0);
}

TEST(Disturbance, SupNorms) {
  EXPECT_NEAR(disturbance_sup_norm(DisturbanceSignal::sinusoid(-0.1, 0.05, Vector::ones(6))), 0.15, 1e-15);
  EXPECT_NEAR(disturbance_sup_norm(DisturbanceSignal::constant(0.2 * Vector::ones(4))), 0.2, 1e-15);
}

TEST(Disturbance, WithSupNormRescales) {
  const auto d = DisturbanceSignal::sinusoid(-0.1, 0.05, Vector::ones(2)).with_sup_norm(0.05);
  EXPECT_NEAR(disturbance_sup_norm(d), 0.05, 1e-15);
  EXPECT_NEAR(d.offset() / d.amplitude(), -2.0, 1e-12);
  EXPECT_EQ(disturbance_sup_norm(DisturbanceSignal::zero(2).with_sup_norm(1.0)), 0.0);
}

TEST(TransformedAbstraction, CaseOne) {
  EXPECT_EQ(transformed_abstraction_matrix(Matrix::zeros(2, 2), Matrix::identity(2), -Matrix::identity(2)),
            -Matrix::identity(2));
}

TEST(TransformedAbstraction, CaseTwoModeOne) {
  EXPECT_EQ(transformed_abstraction_matrix(Matrix::identity(2), Matrix::identity(2), -3.0 * Matrix::identity(2)),
            -2.0 * Matrix::identity(2));
}

TEST(TransformedAbstraction, StableFWithZeroGain) {
  EXPECT_EQ(transformed_abstraction_matrix(-Matrix::identity(3), Matrix::identity(3), Matrix::zeros(3, 3)),
            -Matrix::identity(3));
}

TEST(TransformedAbstraction, Errors) {
  EXPECT_EQ(code_of([] { transformed_abstraction_matrix(Matrix::identity(2), Matrix::identity(2), Matrix(2, 2)); }),
            ErrorCode::NotHurwitz);
  EXPECT_EQ(code_of([] { transformed_abstraction_matrix(Matrix(2, 2), Matrix(3, 2), Matrix(2, 2)); }),
            ErrorCode::DimensionMismatch);
}

TEST(Abstraction, ValidatesEveryMode) {
  const AbstractionMode good{Matrix(1, 1), Matrix{{1}}, Matrix{{1}}, Matrix{{-1}}};
  const AbstractionMode bad{Matrix{{1}}, Matrix{{1}}, Matrix{{1}}, Matrix{{0}}};
  EXPECT_NO_THROW(LinearAbstraction{good});
  EXPECT_EQ(code_of([&] { LinearAbstraction{bad}; }), ErrorCode::NotHurwitz);
  const Polyhedron cell(Matrix{{1}}, Vector{0});
  EXPECT_EQ(code_of([&] { PwaAbstraction({good, bad}, {cell, cell}); }), ErrorCode::NotHurwitz);
  EXPECT_EQ(code_of([&] { PwaAbstraction({good}, {cell, cell}); }), ErrorCode::DimensionMismatch);
}

TEST(PwaSystem, RejectsModeCellCountMismatch) {
  const PwaMode mode{Matrix{{0}}, Matrix{{1}}, Matrix{{1}}, 0.0};
  const Polyhedron cell(Matrix{{1}}, Vector{0});
  EXPECT_EQ(code_of([&] { PwaSystem({mode, mode}, Partition({cell})); }), ErrorCode::DimensionMismatch);
  EXPECT_EQ(code_of([&] { PwaSystem({PwaMode{Matrix{{0}}, Matrix{{1}}, Matrix{{1}}, -1.0}}, Partition({cell})); }),
            ErrorCode::InvalidArgument);
}

TEST(PwaSystem, DefaultContinuityIsIdentity) {
  const PwaSystem sys = build_system(test::load_case(2));
  EXPECT_EQ(sys.continuity(0).jbar, Matrix::identity(5));
  EXPECT_EQ(sys.continuity(0).kind, CellKind::Affine);
}

TEST(CaseStudies, EveryAbstractionModeIsHurwitz) {
  for (int which : {1, 2}) {
    for (const auto& mode : test::load_case(which).abstraction.modes) {
      EXPECT_NO_THROW(transformed_abstraction_matrix(mode.f, mode.g, mode.l));
    }
  }
}

}  // namespace
}  // namespace pwahier
