#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "dagmf/error.hpp"
#include "dagmf/solver/diff_ops.hpp"
#include "support/test_support.hpp"

namespace dagmf {
namespace {

TEST(GradientTest, ConstantFieldHasZeroGradient) {
  const Lattice lat{3, 4};
  const auto g = gradient(ScalarField(lat, 3.0));
  for (int a = 0; a < 2; ++a) {
    for (double v : g.component(a)) EXPECT_EQ(v, 0.0);
  }
}

TEST(GradientTest, TwoVoxelExample) {
  const Lattice lat{2};
  const auto g = gradient(ScalarField(lat, {0.0, 1.0}));
  EXPECT_EQ(std::vector<double>(g.component(0).begin(), g.component(0).end()), (std::vector<double>{1.0, 0.0}));

  VectorField q(lat);
  q.component(0)[0] = 1.0;
  const auto d = divergence(q);
  EXPECT_EQ(d[0], 1.0);
  EXPECT_EQ(d[1], -1.0);
  // 1*1 == -(0*1 + 1*(-1))
  EXPECT_EQ(g.component(0)[0] * q.component(0)[0], -(0.0 * d[0] + 1.0 * d[1]));
}

TEST(GradientTest, RowMajorAxes) {
  // 2 x 3, last axis fastest: u(i, j) = 10 i + j.
  const Lattice lat{2, 3};
  const auto g = gradient(ScalarField(lat, {0, 1, 2, 10, 11, 12}));
  EXPECT_EQ(std::vector<double>(g.component(0).begin(), g.component(0).end()),
            (std::vector<double>{10, 10, 10, 0, 0, 0}));
  EXPECT_EQ(std::vector<double>(g.component(1).begin(), g.component(1).end()),
            (std::vector<double>{1, 1, 0, 1, 1, 0}));
}

TEST(DivergenceProperty, NegativeAdjointOfGradient) {
  std::mt19937 rng(3);
  const std::vector<Lattice> lattices{Lattice{4, 4}, Lattice{7}, Lattice{3, 2, 5}, Lattice{1, 6}};
  for (const auto& lat : lattices) {
    for (int trial = 0; trial < 20; ++trial) {
      const ScalarField u(lat, testing::uniform_values(rng, lat.size(), -1, 1));
      VectorField q(lat);
      for (int a = 0; a < lat.rank(); ++a) {
        const auto vals = testing::uniform_values(rng, lat.size(), -1, 1);
        std::copy(vals.begin(), vals.end(), q.component(a).begin());
      }
      const auto gu = gradient(u);
      const auto dq = divergence(q);
      double lhs = 0.0, rhs = 0.0;
      for (std::size_t x = 0; x < lat.size(); ++x) {
        for (int a = 0; a < lat.rank(); ++a) lhs += gu.component(a)[x] * q.component(a)[x];
        rhs += u[x] * dq[x];
      }
      EXPECT_LT(std::abs(lhs + rhs), 1e-10);
    }
  }
}

TEST(ProjectFlowTest, RadialScaling) {
  const Lattice lat{1, 1};
  VectorField q(lat);
  q.component(0)[0] = 3.0;
  q.component(1)[0] = 4.0;
  const auto p = project_flow(q, ScalarField(lat, 1.0));
  EXPECT_NEAR(p.component(0)[0], 0.6, 1e-15);
  EXPECT_NEAR(p.component(1)[0], 0.8, 1e-15);
}

TEST(ProjectFlowTest, InsideBallUnchanged) {
  const Lattice lat{1, 1};
  VectorField q(lat);
  q.component(0)[0] = 0.1;
  EXPECT_EQ(project_flow(q, ScalarField(lat, 1.0)), q);
}

TEST(ProjectFlowTest, ZeroCapZeroesFlow) {
  const Lattice lat{1, 1};
  VectorField q(lat);
  q.component(0)[0] = -2.0;
  q.component(1)[0] = 5.0;
  const auto p = project_flow(q, ScalarField(lat, 0.0));
  EXPECT_EQ(p.component(0)[0], 0.0);
  EXPECT_EQ(p.component(1)[0], 0.0);
}

TEST(ProjectFlowTest, LatticeMismatchThrows) {
  EXPECT_THROW(project_flow(VectorField(Lattice{2}), ScalarField(Lattice{3}, 1.0)), ProblemError);
}

TEST(FieldTest, RejectsNonFiniteAndBadShapes) {
  EXPECT_THROW(ScalarField(Lattice{2}, {1.0, std::nan("")}), ProblemError);
  EXPECT_THROW(ScalarField(Lattice{2}, std::vector<double>{1.0}), ProblemError);
  EXPECT_THROW(Lattice({0}), ProblemError);
  EXPECT_THROW(Lattice({1, 1, 1, 1}), ProblemError);
  EXPECT_EQ(Lattice({2, 3, 4}).size(), 24u);
  EXPECT_EQ(Lattice({2, 3, 4}).stride(0), 12u);
}

}  // namespace
}  // namespace dagmf
