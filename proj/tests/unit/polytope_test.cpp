#include <gtest/gtest.h>

#include <cmath>

#include "pwahier/error.hpp"
#include "pwahier/pipeline.hpp"
#include "pwahier/polytope.hpp"
#include "test_support.hpp"

namespace pwahier {
namespace {

Partition case_partition(int which) { return build_system(test::load_case(which)).partition(); }

Vector padded(std::initializer_list<double> head, std::size_t n) {
  Vector v(n);
  std::size_t i = 0;
  for (double x : head) v[i++] = x;
  return v;
}

Polyhedron unit_square() { return Polyhedron(Matrix{{1, 0}, {0, 1}, {-1, 0}, {0, -1}}, Vector{0, 0, -1, -1}); }

TEST(ClassifyCell, Examples) {
  EXPECT_EQ(classify_cell(Polyhedron(Matrix{{-1, 1}, {-1, -1}}, Vector{0, 0})), CellKind::Conic);
  EXPECT_EQ(classify_cell(Polyhedron(Matrix{{-1, 0}}, Vector{1.5})), CellKind::Affine);
  EXPECT_EQ(classify_cell(Polyhedron(Matrix::identity(2), Vector{0, 0})), CellKind::Conic);
}

TEST(Polyhedron, RejectsInconsistentShapes) {
  EXPECT_THROW(Polyhedron(Matrix(2, 2), Vector{0}), Error);
  EXPECT_THROW(Polyhedron(Matrix(0, 2), Vector{}), Error);
  EXPECT_THROW(Polyhedron(Matrix{{INFINITY, 0}}, Vector{0}), Error);
}

TEST(CellBounding, AffineAppendsNegatedOffset) {
  const auto cb = cell_bounding(Polyhedron(Matrix{{-1, 0}}, Vector{1.5}));
  EXPECT_EQ(cb.kind, CellKind::Affine);
  EXPECT_EQ(cb.ebar, (Matrix{{-1, 0, -1.5}}));
  const auto conic = cell_bounding(Polyhedron(Matrix::identity(2), Vector{0, 0}));
  EXPECT_EQ(conic.ebar, Matrix::identity(2));
}

TEST(LocateMode, CaseOneLeftCorridor) {
  EXPECT_EQ(locate_mode(case_partition(1), padded({-2, 0}, 6)), 0u);
}

TEST(LocateMode, OriginKeepsPreviousMode) {
  EXPECT_EQ(locate_mode(case_partition(1), Vector(6), 1u), 1u);
  EXPECT_EQ(locate_mode(case_partition(1), Vector(6)), 0u);
}

TEST(LocateMode, CaseTwoSecondCell) {
  EXPECT_EQ(locate_mode(case_partition(2), Vector{-1.0, 7.0, 0, 0}), 1u);
}

TEST(LocateMode, OutsideEveryCellThrowsNoCell) {
  try {
    locate_mode(case_partition(1), padded({0, -1}, 6));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::NoCell);
  }
}

TEST(JointPartitionLinear, CaseOneModeOneBlocks) {
  const Partition part = case_partition(1);
  Matrix p(6, 2);
  p.set_block(0, 0, Matrix::identity(2));
  const auto cells = joint_partition_linear(Partition({part.cell(0)}), {p});
  ASSERT_EQ(cells.size(), 1u);
  const Matrix& e = cells[0].region.e();
  ASSERT_EQ(e.rows(), 6u);
  ASSERT_EQ(e.cols(), 8u);
  EXPECT_EQ(e.block(0, 0, 6, 6), part.cell(0).e());
  EXPECT_EQ(e.block(0, 6, 2, 2), (Matrix{{-1, 1}, {-1, -1}}));
  EXPECT_TRUE(e.block(2, 6, 4, 2).is_zero());
  EXPECT_EQ(cells[0].kind, CellKind::Conic);
}

TEST(JointPartitionLinear, IdentityMap) {
  const auto cells = joint_partition_linear(Partition({Polyhedron(Matrix::identity(2), Vector{0, 0})}),
                                            {Matrix::identity(2)});
  EXPECT_EQ(cells[0].region.e(), Matrix::hstack(Matrix::identity(2), Matrix::identity(2)));
  EXPECT_EQ(cells[0].region.f(), (Vector{0, 0}));
}

TEST(JointPartitionLinear, WholeSpaceStaysWholeSpace) {
  const auto cells = joint_partition_linear(Partition({Polyhedron(Matrix(1, 3), Vector{0})}), {Matrix::identity(3)});
  test::Rng rng(3);
  for (int k = 0; k < 20; ++k) EXPECT_TRUE(cells[0].region.contains(test::random_vector(rng, 6, 100.0)));
}

TEST(JointCellPair, CaseTwoPairOneOneTemplate) {
  const ModelFile model = test::load_case(2);
  const Partition part = build_system(model).partition();
  const auto abs_cells = build_abstraction_cells(model);
  Matrix p(4, 2);
  p.set_block(0, 0, Matrix::identity(2));
  const JointCell cell = joint_cell_pair(part.cell(0), abs_cells[0], p);
  EXPECT_EQ(cell.kind, CellKind::Affine);
  const Matrix eb = cell.ebar();
  const Matrix& e1 = part.cell(0).e();
  const Matrix& ec = abs_cells[0].e();
  ASSERT_EQ(eb.rows(), e1.rows() + ec.rows());
  ASSERT_EQ(eb.cols(), 4u + 2u + 1u);
  EXPECT_EQ(eb.block(0, 0, e1.rows(), 4), e1);
  EXPECT_EQ(eb.block(0, 4, e1.rows(), 2), e1 * p);
  EXPECT_EQ(eb(0, 6), -part.cell(0).f()[0]);
  EXPECT_EQ(eb.block(e1.rows(), 0, ec.rows(), 4), ec);
  EXPECT_EQ(eb.block(e1.rows(), 4, ec.rows(), 2), ec * p);
  EXPECT_EQ(eb(e1.rows(), 6), -abs_cells[0].f()[0]);
}

TEST(JointCellPair, VacuousAbstractionCellPadsLinearResult) {
  const Polyhedron concrete(Matrix{{1, 0}, {0, 1}}, Vector{0, 0});
  const Matrix p = Matrix{{1}, {2}};
  const auto linear = joint_partition_linear(Partition({concrete}), {p}).front();
  const auto pair = joint_cell_pair(concrete, Polyhedron(Matrix(1, 2), Vector{0}), p);
  EXPECT_EQ(pair.region.e().block(0, 0, 2, 3), linear.region.e());
  EXPECT_TRUE(pair.region.e().block(2, 0, 1, 3).is_zero());
  EXPECT_EQ(pair.region.f(), (Vector{0, 0, 0}));
  EXPECT_EQ(pair.kind, linear.kind);
}

TEST(JointCellPair, DuplicatedRowsKeepFeasibleSet) {
  const Polyhedron concrete(Matrix{{1, 1}, {1, -1}}, Vector{-0.5, 0.2});
  const Matrix p = Matrix{{1}, {0}};
  const auto linear = joint_partition_linear(Partition({concrete}), {p}).front();
  const auto pair = joint_cell_pair(concrete, concrete, p);
  EXPECT_EQ(pair.region.num_constraints(), 4u);
  test::Rng rng(11);
  for (int k = 0; k < 200; ++k) {
    const Vector w = test::random_vector(rng, 3, 2.0);
    EXPECT_EQ(pair.region.contains(w), linear.region.contains(w));
  }
}

TEST(JointPartitionPwa, RowMajorPairs) {
  const Polyhedron a(Matrix{{1, 0}}, Vector{0});
  const Polyhedron b(Matrix{{-1, 0}}, Vector{0});
  const auto cells = joint_partition_pwa(Partition({a, b}), {a, b}, {Matrix{{1}, {0}}, Matrix{{1}, {0}}});
  ASSERT_EQ(cells.size(), 4u);
  EXPECT_EQ(cells[1].region.e().row_vector(1), (Vector{-1, 0, -1}));
  EXPECT_EQ(cells[2].region.e().row_vector(0), (Vector{-1, 0, -1}));
}

TEST(AbstractionCellEstimate, ZeroOffsetKeepsCell) {
  const Polyhedron cell(Matrix{{1, 0, 0, 0}, {0, 1, 0, 0}}, Vector{0.5, -1});
  Matrix p(4, 2);
  p.set_block(0, 0, Matrix::identity(2));
  const Polyhedron est = abstraction_cell_estimate(cell, p, Vector(4));
  EXPECT_EQ(est.e(), Matrix::identity(2));
  EXPECT_EQ(est.f(), cell.f());
}

TEST(AbstractionCellEstimate, UnitOffsetShiftsFirstBound) {
  const Polyhedron cell(Matrix{{1, 0, 0, 0}, {0, 1, 0, 0}}, Vector{0.5, -1});
  Matrix p(4, 2);
  p.set_block(0, 0, Matrix::identity(2));
  const Polyhedron est = abstraction_cell_estimate(cell, p, Vector::unit(4, 0));
  EXPECT_EQ(est.f(), (Vector{-0.5, -1}));
}

TEST(AbstractionCellEstimate, ZeroCellIsWholeSpace) {
  const Polyhedron est = abstraction_cell_estimate(Polyhedron(Matrix(1, 3), Vector{0}), Matrix{{1}, {0}, {0}},
                                                   Vector{4, 5, 6});
  EXPECT_TRUE(est.contains(Vector{1e6}));
  EXPECT_TRUE(est.contains(Vector{-1e6}));
}

void expect_ccw_vertices(const std::vector<std::array<double, 2>>& got,
                         const std::vector<std::array<double, 2>>& want) {
  ASSERT_EQ(got.size(), want.size());
  std::size_t start = got.size();
  for (std::size_t i = 0; i < got.size(); ++i) {
    if (std::abs(got[i][0] - want[0][0]) < 1e-12 && std::abs(got[i][1] - want[0][1]) < 1e-12) start = i;
  }
  ASSERT_LT(start, got.size());
  for (std::size_t k = 0; k < want.size(); ++k) {
    const auto& g = got[(start + k) % got.size()];
    EXPECT_NEAR(g[0], want[k][0], 1e-12);
    EXPECT_NEAR(g[1], want[k][1], 1e-12);
  }
}

TEST(Vertices2d, UnitSquareCounterClockwise) {
  expect_ccw_vertices(vertices_2d(unit_square()), {{0, 0}, {1, 0}, {1, 1}, {0, 1}});
}

TEST(Vertices2d, Triangle) {
  expect_ccw_vertices(vertices_2d(Polyhedron(Matrix{{1, 0}, {0, 1}, {-1, -1}}, Vector{0, 0, -1})),
                      {{0, 0}, {1, 0}, {0, 1}});
}

TEST(Vertices2d, Errors) {
  auto code = [](auto&& fn) {
    try {
      fn();
    } catch (const Error& e) {
      return e.code();
    }
    return ErrorCode::InvalidArgument;
  };
  EXPECT_EQ(code([] { vertices_2d(Polyhedron(Matrix{{1, 0}}, Vector{0})); }), ErrorCode::Unbounded);
  EXPECT_EQ(code([] { vertices_2d(Polyhedron(Matrix{{1, 0, 0}}, Vector{0})); }), ErrorCode::NotTwoD);
  EXPECT_EQ(code([] { vertices_2d(Polyhedron(Matrix{{1, 0}, {-1, 0}, {0, 1}, {0, -1}}, Vector{1, 0, 0, -1})); }),
            ErrorCode::Empty);
}

TEST(ContainsMapped, Examples) {
  const Polyhedron lower(Matrix::identity(2), Vector{-1, -1});
  EXPECT_TRUE(contains_mapped(unit_square(), Matrix::identity(2), Vector{0, 0}, lower));
  EXPECT_FALSE(contains_mapped(unit_square(), 2.0 * Matrix::identity(2), Vector{0, 0}, unit_square()));
  EXPECT_TRUE(contains_mapped(unit_square(), Matrix::zeros(2, 2), Vector{0.5, 0.5}, unit_square()));
  EXPECT_FALSE(contains_mapped(unit_square(), Matrix::zeros(2, 2), Vector{2, 0.5}, unit_square()));
}

TEST(Continuity, IdentityMatchesAcrossCells) {
  const auto a = ContinuityMatrix::identity(2, CellKind::Affine);
  const auto b = ContinuityMatrix::identity(2, CellKind::Affine);
  EXPECT_EQ(a.jbar, Matrix::identity(3));
  EXPECT_EQ(a.apply(Vector{1, 2}), (Vector{1, 2, 1}));
  EXPECT_EQ(continuity_mismatch(a, b, {Vector{0, 1}, Vector{0, -1}}), 0.0);
  const ContinuityMatrix shifted{Matrix{{1, 0, 0.5}, {0, 1, 0}, {0, 0, 1}}, CellKind::Affine};
  EXPECT_NEAR(continuity_mismatch(a, shifted, {Vector{0, 1}}), 0.5, 1e-15);
}

}  // namespace
}  // namespace pwahier
