#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "dagmf/dag/superobject.hpp"
#include "dagmf/error.hpp"
#include "dagmf/oracle/brute_force.hpp"
#include "dagmf/oracle/reference_solvers.hpp"
#include "dagmf/solver/solver.hpp"
#include "support/test_support.hpp"

namespace dagmf {
namespace {

using namespace dagmf::testing;
using oracle::DiscreteLabeling;

Labeling indicators(const DiscreteLabeling& l, const ProblemSpec& p) {
  std::map<LabelId, ScalarField> u;
  for (LabelId id : p.graph.end_labels()) {
    ScalarField f(p.lattice);
    for (std::size_t x = 0; x < f.size(); ++x) f[x] = l.labels[x] == id ? 1.0 : 0.0;
    u.emplace(id, std::move(f));
  }
  return complete_labeling(u, p);
}

DiscreteLabeling random_labeling(std::mt19937& rng, const ProblemSpec& p) {
  const auto ends = p.graph.end_labels();
  std::uniform_int_distribution<std::size_t> pick(0, ends.size() - 1);
  DiscreteLabeling l{p.lattice, std::vector<LabelId>(p.lattice.size())};
  for (auto& v : l.labels) v = ends[pick(rng)];
  return l;
}

TEST(DiscreteEnergyTest, SingleVoxel) {
  ProblemSpec p;
  p.graph = potts_graph(2);
  p.lattice = Lattice{1};
  p.data.emplace(A, ScalarField(p.lattice, 0.25));
  p.data.emplace(B, ScalarField(p.lattice, 0.75));
  p = with_uniform_smoothness(p, 3.0);
  EXPECT_DOUBLE_EQ(oracle::discrete_energy({p.lattice, {A}}, p), 0.25);
}

TEST(DiscreteEnergyTest, UniformLabelingHasNoGradient) {
  std::mt19937 rng(3);
  const auto built = build_superobject_dag(chain_groups_spec());
  auto p = random_problem(rng, built.graph, Lattice{3, 4}, 2.0);
  double sum = 0.0;
  for (double v : p.data.at(C).values()) sum += v;
  EXPECT_NEAR(oracle::discrete_energy({p.lattice, std::vector<LabelId>(12, C)}, p), sum, 1e-12);
}

TEST(DiscreteEnergyTest, GroupTermsInTwoVoxelLine) {
  // u_AB = [1/2, 1/2], u_BC = [0, 1/2], u_CD = 0; |grad u_A| = |grad u_B| = 1.
  // Group smoothness is scaled by r = 2: 1 + 1 + 2 * 1/2 = 3.
  const auto built = build_superobject_dag(chain_groups_spec());
  ASSERT_EQ(built.r, 2);
  ProblemSpec p;
  p.graph = built.graph;
  p.lattice = Lattice{2};
  for (LabelId id : p.graph.end_labels()) p.data.emplace(id, ScalarField(p.lattice, 0.0));
  p = with_uniform_smoothness(p, 1.0);
  apply_smoothness_scale(p, built.smoothness_scale);
  EXPECT_DOUBLE_EQ(oracle::discrete_energy({p.lattice, {A, B}}, p), 3.0);
  EXPECT_DOUBLE_EQ(oracle::discrete_energy({p.lattice, {A, D}}, p), 1.0 + 1.0 + 2 * 0.5 + 2 * 0.5);
}

TEST(BruteForceTest, Examples) {
  ProblemSpec one;
  one.graph = potts_graph(2);
  one.lattice = Lattice{1};
  one.data.emplace(A, ScalarField(one.lattice, 0.5));
  one.data.emplace(B, ScalarField(one.lattice, 1.0));
  const auto r = oracle::brute_force_min(one);
  EXPECT_EQ(r.min_energy, 0.5);
  ASSERT_EQ(r.minimizers.size(), 1u);
  EXPECT_EQ(r.minimizers[0].labels, std::vector<LabelId>{A});
  EXPECT_EQ(r.evaluated, 2u);

  ProblemSpec two;
  two.graph = potts_graph(2);
  two.lattice = Lattice{2};
  two.data.emplace(A, ScalarField(two.lattice, std::vector<double>{0.1, 0.9}));
  two.data.emplace(B, ScalarField(two.lattice, std::vector<double>{0.6, 0.2}));
  EXPECT_NEAR(oracle::brute_force_min(two).min_energy, 0.3, 1e-15);
}

TEST(BruteForceTest, AllTiesReturnedInOrder) {
  ProblemSpec p;
  p.graph = potts_graph(2);
  p.lattice = Lattice{2};
  p.data.emplace(A, ScalarField(p.lattice, 0.0));
  p.data.emplace(B, ScalarField(p.lattice, 0.0));
  const auto r = oracle::brute_force_min(p);
  ASSERT_EQ(r.minimizers.size(), 4u);
  EXPECT_EQ(r.minimizers[0].labels, (std::vector<LabelId>{A, A}));
  EXPECT_EQ(r.minimizers[1].labels, (std::vector<LabelId>{A, B}));
  EXPECT_EQ(r.minimizers[3].labels, (std::vector<LabelId>{B, B}));
}

TEST(BruteForceTest, GuardsAgainstLargeInstances) {
  ProblemSpec p;
  p.graph = potts_graph(4);
  p.lattice = Lattice{11};  // 4^11 > 1e6
  for (LabelId id : p.graph.end_labels()) p.data.emplace(id, ScalarField(p.lattice, 0.0));
  EXPECT_THROW(oracle::brute_force_min(p), ProblemError);
}

TEST(BruteForceTest, ReferenceValueForFixedSeed) {
  std::mt19937 rng(20);
  auto p = with_uniform_smoothness(random_problem(rng, potts_graph(3), Lattice{2, 2}, 0.0), 0.5);
  const auto r = oracle::brute_force_min(p);
  EXPECT_EQ(r.evaluated, 81u);
  for (const auto& m : r.minimizers) EXPECT_NEAR(oracle::discrete_energy(m, p), r.min_energy, 1e-12);
  std::mt19937 g(1);
  for (int i = 0; i < 50; ++i) EXPECT_GE(oracle::discrete_energy(random_labeling(g, p), p), r.min_energy);
}

TEST(OracleProperty, AgreesWithSolverEnergyOnIndicators) {
  std::mt19937 rng(31);
  for (int trial = 0; trial < 40; ++trial) {
    const auto built = build_superobject_dag(random_spec(rng, 5, 3));
    const Lattice lattice = trial % 3 == 0 ? Lattice{7} : trial % 3 == 1 ? Lattice{4, 5} : Lattice{3, 2, 4};
    auto p = random_problem(rng, built.graph, lattice, 1.5);
    apply_smoothness_scale(p, built.smoothness_scale);
    const auto l = random_labeling(rng, p);
    EXPECT_NEAR(oracle::discrete_energy(l, p), energy(indicators(l, p), p), 1e-12);
  }
}

TEST(OracleProperty, MonotoneUnderSmoothnessDoubling) {
  std::mt19937 rng(32);
  for (int trial = 0; trial < 15; ++trial) {
    const auto built = build_superobject_dag(random_spec(rng, 3, 2));
    auto p = random_problem(rng, built.graph, Lattice{2, 3}, 1.0);
    auto doubled = p;
    for (auto& [id, f] : doubled.smoothness) {
      for (double& v : f.values()) v *= 2.0;
    }
    EXPECT_GE(oracle::brute_force_min(doubled).min_energy, oracle::brute_force_min(p).min_energy);
  }
}

// Boundary of a union of regions, counted per voxel on forward neighbours.
double region_boundary(const Lattice& lattice, const std::vector<bool>& in, double s) {
  double total = 0.0;
  const int nx = static_cast<int>(lattice.extent(0)), ny = static_cast<int>(lattice.extent(1));
  for (int i = 0; i < nx; ++i) {
    for (int j = 0; j < ny; ++j) {
      const bool here = in[static_cast<std::size_t>(i * ny + j)];
      int crossings = 0;
      if (i + 1 < nx && in[static_cast<std::size_t>((i + 1) * ny + j)] != here) ++crossings;
      if (j + 1 < ny && in[static_cast<std::size_t>(i * ny + j + 1)] != here) ++crossings;
      total += s * std::sqrt(static_cast<double>(crossings));
    }
  }
  return total;
}

TEST(OracleProperty, HierarchyMatchesSetTheoreticBoundaries) {
  // S -> {AB, C}, AB -> {A, B}; every vertex has a single unit-weight parent.
  const LabelId ab{6};
  auto labels = letters(3);
  labels.push_back({ab, "AB"});
  const std::vector<WeightedEdge> edges{{S, ab, 1.0}, {S, C, 1.0}, {ab, A, 1.0}, {ab, B, 1.0}};
  const auto graph = LabelGraph::from_edges(labels, S, edges);
  std::mt19937 rng(33);
  for (int trial = 0; trial < 20; ++trial) {
    auto p = random_problem(rng, graph, Lattice{4, 5}, 1.0);
    const auto l = random_labeling(rng, p);
    double expected = 0.0;
    auto region = [&](std::initializer_list<LabelId> ids) {
      std::vector<bool> in(l.labels.size());
      for (std::size_t x = 0; x < in.size(); ++x) {
        for (LabelId id : ids) in[x] = in[x] || l.labels[x] == id;
      }
      return in;
    };
    for (std::size_t x = 0; x < l.labels.size(); ++x) expected += p.data.at(l.labels[x])[x];
    expected += region_boundary(p.lattice, region({A}), p.alpha.at(A));
    expected += region_boundary(p.lattice, region({B}), p.alpha.at(B));
    expected += region_boundary(p.lattice, region({C}), p.alpha.at(C));
    expected += region_boundary(p.lattice, region({A, B}), p.alpha.at(ab));
    EXPECT_NEAR(oracle::discrete_energy(l, p), expected, 1e-12);
  }
}

TEST(ReferenceSolverTest, WeightedTotalVariation) {
  const Lattice lattice{2, 2};
  EXPECT_NEAR(oracle::weighted_tv(lattice, {0, 1, 1, 1}, {2, 2, 2, 2}), 2 * std::sqrt(2.0), 1e-15);
}

TEST(ReferenceSolverTest, TwoLabelPottsIsExactOnTinyGrids) {
  std::mt19937 rng(34);
  for (int trial = 0; trial < 5; ++trial) {
    auto p = with_uniform_smoothness(random_problem(rng, potts_graph(2), Lattice{3, 3}, 0.0), 0.4);
    const auto exact = oracle::brute_force_min(p).min_energy;
    auto values = [&](LabelId id) {
      const auto v = p.data.at(id).values();
      return std::vector<double>(v.begin(), v.end());
    };
    const auto r = oracle::potts_max_flow(p.lattice, {values(A), values(B)},
                                          std::vector<std::vector<double>>(2, std::vector<double>(9, 0.4)));
    ASSERT_TRUE(r.converged);
    EXPECT_NEAR(r.energy, exact, 1e-3);
    EXPECT_NEAR(r.dual, r.energy, 1e-3);
  }
}

TEST(ReferenceSolverTest, TwoLevelIshikawaMatchesPottsAtHalfWeight) {
  const auto data = phantom_data(12, 2, 5);
  const Lattice lattice{12, 12};
  const auto ish = oracle::ishikawa_max_flow(lattice, data, {std::vector<double>(144, 0.6)});
  const auto potts = oracle::potts_max_flow(lattice, data, std::vector<std::vector<double>>(2, std::vector<double>(144, 0.3)));
  ASSERT_TRUE(ish.converged);
  ASSERT_TRUE(potts.converged);
  EXPECT_NEAR(ish.energy, potts.energy, 1e-4);
}

}  // namespace
}  // namespace dagmf
