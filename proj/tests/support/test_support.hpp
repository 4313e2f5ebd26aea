#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "dagmf/dag/label_graph.hpp"
#include "dagmf/dag/superobject.hpp"
#include "dagmf/solver/problem.hpp"

namespace dagmf::testing {

constexpr LabelId S{0}, A{1}, B{2}, C{3}, D{4}, E{5};

inline std::vector<Label> letters(int count) {
  std::vector<Label> out{{S, "S"}};
  for (int i = 1; i <= count; ++i) out.push_back({LabelId{i}, std::string(1, char('A' + i - 1))});
  return out;
}

/// The five-label example DAG. A -> E is included so that E.P = {A, B, S}
/// holds with a symmetric child operator.
inline LabelGraph five_label_graph() {
  const double third = 1.0 / 3.0;
  std::vector<WeightedEdge> edges{
      {S, A, 1.0}, {S, B, 1.0}, {S, E, third}, {A, C, 0.5},   {A, D, 0.5},
      {A, E, third}, {B, C, 0.5}, {B, D, 0.5}, {B, E, third},
  };
  return LabelGraph::from_edges(letters(5), S, edges);
}

/// L = {A..E}, G = {AB, BC, CD}.
inline SuperObjectSpec chain_groups_spec() {
  SuperObjectSpec spec;
  spec.source = {S, "S"};
  for (int i = 1; i <= 5; ++i) spec.end_labels.push_back({LabelId{i}, std::string(1, char('A' + i - 1))});
  spec.groups = {{A, B}, {B, C}, {C, D}};
  return spec;
}

/// Star graph S -> each of `count` end labels.
inline LabelGraph potts_graph(int count) {
  std::vector<EdgeMultiplicity> edges;
  for (int i = 1; i <= count; ++i) edges.push_back({S, LabelId{i}, 1});
  return normalize(letters(count), S, edges);
}

/// Random valid group spec: 2..max_labels end labels and up to max_groups
/// distinct strict subsets of size >= 2.
inline SuperObjectSpec random_spec(std::mt19937& rng, int max_labels, int max_groups) {
  std::uniform_int_distribution<int> nl(2, max_labels);
  const int labels = nl(rng);
  SuperObjectSpec spec;
  spec.source = {S, "S"};
  for (int i = 1; i <= labels; ++i) spec.end_labels.push_back({LabelId{i}, std::string(1, char('A' + i - 1))});
  std::uniform_int_distribution<int> ng(0, max_groups);
  const int wanted = ng(rng);
  std::vector<std::vector<LabelId>> seen;
  for (int attempt = 0; attempt < 50 && static_cast<int>(spec.groups.size()) < wanted; ++attempt) {
    std::vector<LabelId> g;
    std::bernoulli_distribution pick(0.5);
    for (int i = 1; i <= labels; ++i) {
      if (pick(rng)) g.push_back(LabelId{i});
    }
    if (g.size() < 2 || static_cast<int>(g.size()) == labels) continue;
    if (std::find(seen.begin(), seen.end(), g) != seen.end()) continue;
    seen.push_back(g);
    spec.groups.push_back(g);
  }
  return spec;
}

inline std::vector<double> uniform_values(std::mt19937& rng, std::size_t n, double lo = 0.0, double hi = 1.0) {
  std::uniform_real_distribution<double> d(lo, hi);
  std::vector<double> out(n);
  for (auto& v : out) v = d(rng);
  return out;
}

/// Random data terms on the end labels and uniform random smoothness in
/// [0, alpha_max] on every other non-source label.
inline ProblemSpec random_problem(std::mt19937& rng, const LabelGraph& graph, const Lattice& lattice,
                                  double alpha_max) {
  ProblemSpec p;
  p.graph = graph;
  p.lattice = lattice;
  for (LabelId id : graph.end_labels()) p.data.emplace(id, ScalarField(lattice, uniform_values(rng, lattice.size())));
  std::uniform_real_distribution<double> a(0.0, alpha_max);
  for (const auto& l : graph.labels()) {
    if (l.id == graph.source()) continue;
    const double alpha = a(rng);
    p.smoothness.emplace(l.id, ScalarField(lattice, alpha));
    p.alpha[l.id] = alpha;
  }
  return p;
}

inline ProblemSpec with_uniform_smoothness(ProblemSpec p, double alpha) {
  p.smoothness.clear();
  p.alpha.clear();
  for (const auto& l : p.graph.labels()) {
    if (l.id == p.graph.source()) continue;
    p.smoothness.emplace(l.id, ScalarField(p.lattice, alpha));
    p.alpha[l.id] = alpha;
  }
  return p;
}

/// Noisy piecewise-constant image with `regions` intensity levels laid out
/// as vertical bands plus a disc, and L1 data terms |I - level_k|.
inline std::vector<std::vector<double>> phantom_data(int n, int regions, std::uint32_t seed,
                                                     double noise = 0.15) {
  std::mt19937 rng(seed);
  std::normal_distribution<double> g(0.0, noise);
  std::vector<double> image(static_cast<std::size_t>(n) * n);
  const double cx = n * (0.3 + 0.4 * (seed % 7) / 7.0), cy = n * 0.5, r = n * 0.22;
  for (int y = 0; y < n; ++y) {
    for (int x = 0; x < n; ++x) {
      int k = std::min(regions - 1, (x * regions) / n);
      if ((x - cx) * (x - cx) + (y - cy) * (y - cy) < r * r) k = (k + regions / 2 + 1) % regions;
      image[static_cast<std::size_t>(y) * n + x] = double(k) / std::max(1, regions - 1) + g(rng);
    }
  }
  std::vector<std::vector<double>> data(regions, std::vector<double>(image.size()));
  for (int k = 0; k < regions; ++k) {
    const double level = double(k) / std::max(1, regions - 1);
    for (std::size_t i = 0; i < image.size(); ++i) data[k][i] = std::abs(image[i] - level);
  }
  return data;
}

inline ProblemSpec problem_from(const LabelGraph& graph, const Lattice& lattice,
                                const std::vector<std::vector<double>>& data) {
  ProblemSpec p;
  p.graph = graph;
  p.lattice = lattice;
  const auto ends = graph.end_labels();
  for (std::size_t i = 0; i < ends.size(); ++i) p.data.emplace(ends[i], ScalarField(lattice, data.at(i)));
  return p;
}

}  // namespace dagmf::testing
