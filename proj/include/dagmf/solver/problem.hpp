#pragma once

#include <map>

#include "dagmf/dag/label_graph.hpp"
#include "dagmf/solver/field.hpp"

namespace dagmf {

/// A segmentation problem: a label DAG over a lattice with data terms on the
/// end labels and boundary-cost fields on the remaining non-source labels.
struct ProblemSpec {
  LabelGraph graph;
  Lattice lattice;
  /// D_L for every end label, and only for end labels.
  std::map<LabelId, ScalarField> data;
  /// The full product alpha_L * S_L (super-object scaling already applied).
  /// Labels without an entry have zero smoothness.
  std::map<LabelId, ScalarField> smoothness;
  /// The scalar alpha_L that went into `smoothness`, kept for reporting.
  std::map<LabelId, double> alpha;
};

/// Throws ProblemError (or GraphError) describing the first inconsistency.
void validate_problem(const ProblemSpec& problem);

/// Multiplies the smoothness field of each listed label by its factor.
void apply_smoothness_scale(ProblemSpec& problem, const std::map<LabelId, int>& scale);

}  // namespace dagmf
