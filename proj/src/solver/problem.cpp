#include "dagmf/solver/problem.hpp"

#include <string>

#include "dagmf/dag/validate.hpp"
#include "dagmf/error.hpp"

namespace dagmf {

namespace {

std::string describe(const LabelGraph& g, LabelId id) {
  if (!g.contains(id)) return "label id " + std::to_string(id.value);
  return "label '" + g.label(id).name + "' (id " + std::to_string(id.value) + ")";
}

}  // namespace

void validate_problem(const ProblemSpec& problem) {
  const auto& g = problem.graph;
  require_valid(g);

  for (LabelId id : g.end_labels()) {
    if (!problem.data.contains(id)) {
      throw ProblemError("missing data field for end label " + describe(g, id));
    }
  }
  for (const auto& [id, field] : problem.data) {
    if (!g.contains(id)) throw ProblemError("data field for unknown " + describe(g, id));
    if (!g.is_end_label(id)) {
      throw ProblemError("data field given for non-end " + describe(g, id));
    }
    if (!(field.lattice() == problem.lattice)) {
      throw ProblemError("data field for " + describe(g, id) + " is on a different lattice");
    }
  }
  for (const auto& [id, field] : problem.smoothness) {
    if (!g.contains(id)) throw ProblemError("smoothness field for unknown " + describe(g, id));
    if (id == g.source()) throw ProblemError("the source carries no smoothness");
    if (!(field.lattice() == problem.lattice)) {
      throw ProblemError("smoothness field for " + describe(g, id) + " is on a different lattice");
    }
    for (double v : field.values()) {
      if (v < 0.0) throw ProblemError("smoothness field for " + describe(g, id) + " is negative");
    }
  }
}

void apply_smoothness_scale(ProblemSpec& problem, const std::map<LabelId, int>& scale) {
  for (const auto& [id, factor] : scale) {
    auto it = problem.smoothness.find(id);
    if (it == problem.smoothness.end()) continue;
    for (double& v : it->second.values()) v *= factor;
  }
}

}  // namespace dagmf
