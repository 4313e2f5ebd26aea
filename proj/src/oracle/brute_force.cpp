#include "dagmf/oracle/brute_force.hpp"

#include <cmath>
#include <functional>
#include <limits>
#include <map>

#include "dagmf/error.hpp"

namespace dagmf::oracle {

namespace {

// Coordinate-based forward differences, written independently of the solver's
// stride/mask stencil.
double tv_term(const Lattice& lat, const std::vector<double>& f, const std::vector<double>& w) {
  const int e0 = lat.extent(0), e1 = lat.extent(1), e2 = lat.extent(2);
  auto at = [&](int i, int j, int k) { return (static_cast<std::size_t>(i) * e1 + j) * e2 + k; };
  double total = 0.0;
  for (int i = 0; i < e0; ++i) {
    for (int j = 0; j < e1; ++j) {
      for (int k = 0; k < e2; ++k) {
        const std::size_t x = at(i, j, k);
        const double d0 = i + 1 < e0 ? f[at(i + 1, j, k)] - f[x] : 0.0;
        const double d1 = j + 1 < e1 ? f[at(i, j + 1, k)] - f[x] : 0.0;
        const double d2 = k + 1 < e2 ? f[at(i, j, k + 1)] - f[x] : 0.0;
        total += w[x] * std::sqrt(d0 * d0 + d1 * d1 + d2 * d2);
      }
    }
  }
  return total;
}

}  // namespace

double discrete_energy(const DiscreteLabeling& labeling, const ProblemSpec& problem) {
  const auto& g = problem.graph;
  const std::size_t voxels = labeling.lattice.size();
  if (!(labeling.lattice == problem.lattice) || labeling.labels.size() != voxels) {
    throw ProblemError("labeling does not cover the problem lattice");
  }

  std::map<LabelId, std::vector<double>> u;
  std::function<const std::vector<double>&(LabelId)> indicator = [&](LabelId id) -> const std::vector<double>& {
    if (auto it = u.find(id); it != u.end()) return it->second;
    std::vector<double> f(voxels, 0.0);
    auto kids = g.children(id);
    if (kids.empty()) {
      for (std::size_t x = 0; x < voxels; ++x) f[x] = labeling.labels[x] == id ? 1.0 : 0.0;
    } else {
      for (const auto& arc : kids) {
        const auto& child = indicator(arc.other);
        for (std::size_t x = 0; x < voxels; ++x) f[x] += arc.weight * child[x];
      }
    }
    return u.emplace(id, std::move(f)).first->second;
  };

  double total = 0.0;
  for (std::size_t x = 0; x < voxels; ++x) {
    auto it = problem.data.find(labeling.labels[x]);
    if (it == problem.data.end()) throw ProblemError("labeling uses a label without a data term");
    total += it->second[x];
  }
  for (const auto& [id, field] : problem.smoothness) {
    const std::vector<double> w(field.values().begin(), field.values().end());
    total += tv_term(problem.lattice, indicator(id), w);
  }
  return total;
}

BruteForceResult brute_force_min(const ProblemSpec& problem) {
  const auto ends = problem.graph.end_labels();
  const std::size_t voxels = problem.lattice.size();
  std::size_t count = 1;
  for (std::size_t x = 0; x < voxels; ++x) {
    if (count > kMaxEnumeration / ends.size()) {
      throw ProblemError("instance too large for exhaustive enumeration");
    }
    count *= ends.size();
  }

  BruteForceResult result;
  result.min_energy = std::numeric_limits<double>::infinity();
  std::vector<std::size_t> digits(voxels, 0);
  DiscreteLabeling current{problem.lattice, std::vector<LabelId>(voxels, ends.front())};
  for (std::size_t n = 0; n < count; ++n) {
    for (std::size_t x = 0; x < voxels; ++x) current.labels[x] = ends[digits[x]];
    const double e = discrete_energy(current, problem);
    ++result.evaluated;
    const double slack = kTieTolerance * std::max(1.0, std::abs(result.min_energy));
    if (e < result.min_energy - slack) {
      result.min_energy = e;
      result.minimizers.assign(1, current);
    } else if (std::abs(e - result.min_energy) <= slack) {
      result.minimizers.push_back(current);
      result.min_energy = std::min(result.min_energy, e);
    }
    // Odometer: the last voxel turns fastest.
    for (std::size_t x = voxels; x-- > 0;) {
      if (++digits[x] < ends.size()) break;
      digits[x] = 0;
    }
  }
  return result;
}

}  // namespace dagmf::oracle
