#include "dagmf/dag/topo_sort.hpp"

#include <functional>
#include <map>
#include <queue>

#include "dagmf/dag/validate.hpp"

namespace dagmf {

TopoOrdering topo_sort(const LabelGraph& graph) {
  require_valid(graph);

  std::map<LabelId, std::size_t> pending;
  std::priority_queue<LabelId, std::vector<LabelId>, std::greater<>> ready;
  for (const auto& l : graph.labels()) {
    pending[l.id] = graph.parents(l.id).size();
    if (pending[l.id] == 0) ready.push(l.id);
  }

  TopoOrdering out;
  out.order.reserve(graph.size());
  while (!ready.empty()) {
    LabelId v = ready.top();
    ready.pop();
    out.order.push_back(v);
    for (const auto& arc : graph.children(v)) {
      if (--pending[arc.other] == 0) ready.push(arc.other);
    }
  }
  out.inverse.assign(out.order.rbegin(), out.order.rend());
  return out;
}

}  // namespace dagmf
