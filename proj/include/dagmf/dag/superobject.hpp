#pragma once

#include <map>
#include <string>
#include <vector>

#include "dagmf/dag/label_graph.hpp"

namespace dagmf {

/// End labels plus the super-objects (groups of end labels) that receive their
/// own boundary regularization.
struct SuperObjectSpec {
  Label source{LabelId{0}, "S"};
  std::vector<Label> end_labels;
  std::vector<std::vector<LabelId>> groups;
  /// Optional vertex names per group; missing entries use the concatenated
  /// member names.
  std::vector<std::string> group_names;
};

struct ConstructionResult {
  LabelGraph graph;  // normalized
  int r = 1;         // common parent count of every end label
  /// Factor applied to the intended smoothness of each group vertex.
  std::map<LabelId, int> smoothness_scale;
  std::vector<LabelId> group_vertices;  // in group order
  /// The unit-multiplicity multigraph before merging, padding included.
  std::vector<EdgeMultiplicity> unit_edges;
  /// The S -> end-label edges added so every end label has r parents.
  std::vector<EdgeMultiplicity> padding;
  std::vector<ExactEdge> exact_weights;
};

/// Compiles a group specification into a normalized rooted DAG.
///
/// Every group becomes a vertex whose sole parent is the source and whose
/// children are its members. End labels are then padded with source edges
/// until each has r parents, r being the largest number of groups that
/// contain a single end label. Group vertex ids follow the largest id in the
/// spec, in group order. Throws SpecError on invalid input.
ConstructionResult build_superobject_dag(const SuperObjectSpec& spec);

}  // namespace dagmf
