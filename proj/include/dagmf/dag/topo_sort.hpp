#pragma once

#include <vector>

#include "dagmf/dag/label_graph.hpp"

namespace dagmf {

struct TopoOrdering {
  std::vector<LabelId> order;    // parents before children
  std::vector<LabelId> inverse;  // exact reversal of order
};

/// Kahn's algorithm over the child operator, ties broken by ascending id.
/// Throws GraphError if the graph fails validation.
TopoOrdering topo_sort(const LabelGraph& graph);

}  // namespace dagmf
