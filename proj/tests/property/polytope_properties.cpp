#include <gtest/gtest.h>

#include <cmath>

#include "containment_oracle.hpp"
#include "pwahier/pipeline.hpp"
#include "pwahier/polytope.hpp"
#include "test_support.hpp"

namespace pwahier {
namespace {

TEST(LocateModeProperty, KeepsQualifyingPrevious) {
  const Partition part = build_system(test::load_case(1)).partition();
  test::Rng rng(201);
  int kept = 0;
  for (int k = 0; k < 2000; ++k) {
    Vector x(6);
    x[0] = test::uniform(rng, -5, 5);
    x[1] = test::uniform(rng, -5, 5);
    if (k % 4 == 0) x[1] = (k % 8 == 0 ? 1.0 : -1.0) * x[0];  // on a shared facet
    for (std::size_t prev = 0; prev < 3; ++prev) {
      if (!part.cell(prev).contains(x)) continue;
      ASSERT_EQ(locate_mode(part, x, prev), prev);
      ++kept;
    }
  }
  EXPECT_GT(kept, 1000);
}

TEST(JointPartitionProperty, MembershipMatchesConcreteCell) {
  test::Rng rng(202);
  for (int trial = 0; trial < 10; ++trial) {
    const std::size_t n = 2 + trial % 3;
    const std::size_t m = 1 + trial % 2;
    Vector f = test::random_vector(rng, 3, 0.5);
    for (std::size_t r = 0; r < 3; ++r) f[r] = -std::abs(f[r]) - 0.1;
    const Polyhedron cell(test::random_matrix(rng, 3, n), f);
    const Matrix p = test::random_matrix(rng, n, m);
    const JointCell joint = joint_partition_linear(Partition({cell}), {p}).front();
    int inside = 0;
    for (int k = 0; k < 500; ++k) {
      const Vector xt = test::random_vector(rng, n, 2.0);
      const Vector x2 = test::random_vector(rng, m, 2.0);
      const bool in_joint = joint.region.contains(xt.append(x2));
      ASSERT_EQ(in_joint, cell.contains(xt + p * x2));
      inside += in_joint;
    }
    EXPECT_GT(inside, 0);
  }
}

TEST(ContainsMappedProperty, AgreesWithGridOracle) {
  test::Rng rng(203);
  int contained = 0;
  for (int trial = 0; trial < 50; ++trial) {
    const auto in = test::random_containment(rng);
    const bool fast = contains_mapped(in.z, in.p, in.yhat, in.x);
    ASSERT_EQ(fast, test::grid_contains(in)) << "instance " << trial;
    contained += fast;
  }
  EXPECT_GT(contained, 5);
  EXPECT_LT(contained, 45);
}

// The three corridor cells are the left, upper and right wedges
// |y| ≤ −x, y ≥ |x| and |y| ≤ x. The lower wedge y < −|x| belongs to none.
TEST(CaseOneCoverage, GridCoveredExactlyOutsideLowerWedge) {
  const Partition part = build_system(test::load_case(1)).partition();
  int uncovered = 0;
  for (int i = 0; i < 200; ++i) {
    for (int j = 0; j < 200; ++j) {
      Vector x(6);
      x[0] = -5.0 + 10.0 * i / 199.0;
      x[1] = -5.0 + 10.0 * j / 199.0;
      const bool covered = part.cell(0).contains(x) || part.cell(1).contains(x) || part.cell(2).contains(x);
      const bool lower_wedge = x[1] < -std::abs(x[0]) - kMembershipSlack;
      ASSERT_EQ(covered, !lower_wedge) << x[0] << ", " << x[1];
      uncovered += !covered;
    }
  }
  EXPECT_GT(uncovered, 0);
}

TEST(CaseTwoCoverage, CellsTileThePositionAxis) {
  const ModelFile model = test::load_case(2);
  const Partition part = build_system(model).partition();
  const auto abs_cells = build_abstraction_cells(model);
  for (int i = 0; i <= 2000; ++i) {
    const Vector x{-10.0 + 20.0 * i / 2000.0, 0.3, -1.0, 2.0};
    bool covered = false;
    for (const auto& c : part.cells()) covered = covered || c.contains(x);
    bool abs_covered = false;
    for (const auto& c : abs_cells) abs_covered = abs_covered || c.contains(x);
    ASSERT_TRUE(covered && abs_covered) << x[0];
  }
}

}  // namespace
}  // namespace pwahier
