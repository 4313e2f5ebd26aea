#pragma once

#include <cstddef>
#include <vector>

#include "dagmf/dag/label_graph.hpp"
#include "dagmf/solver/problem.hpp"

namespace dagmf::oracle {

/// One end label per voxel.
struct DiscreteLabeling {
  Lattice lattice;
  std::vector<LabelId> labels;

  bool operator==(const DiscreteLabeling&) const = default;
};

/// Energy of the indicator labeling, with every internal label derived from
/// its children. Uses a stencil of its own rather than the solver's.
double discrete_energy(const DiscreteLabeling& labeling, const ProblemSpec& problem);

struct BruteForceResult {
  double min_energy = 0.0;
  /// Every labeling within kTieTolerance of the minimum, in enumeration order.
  std::vector<DiscreteLabeling> minimizers;
  std::size_t evaluated = 0;
};

inline constexpr std::size_t kMaxEnumeration = 1'000'000;
inline constexpr double kTieTolerance = 1e-12;

/// Exhaustive minimum over all |end labels|^N labelings, enumerated
/// lexicographically (voxel 0 most significant, labels by ascending id).
/// Throws ProblemError when the count exceeds kMaxEnumeration.
BruteForceResult brute_force_min(const ProblemSpec& problem);

}  // namespace dagmf::oracle
