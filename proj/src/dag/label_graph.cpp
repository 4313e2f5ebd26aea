#include "dagmf/dag/label_graph.hpp"

#include <algorithm>
#include <numeric>

#include "dagmf/error.hpp"

namespace dagmf {

namespace {

std::string describe(LabelId id) { return "label id " + std::to_string(id.value); }

void sort_arcs(std::vector<LabelGraph::Arc>& arcs) {
  std::stable_sort(arcs.begin(), arcs.end(),
                   [](const auto& a, const auto& b) { return a.other < b.other; });
}

}  // namespace

LabelGraph LabelGraph::from_edges(std::vector<Label> labels, LabelId source,
                                  std::span<const WeightedEdge> edges) {
  OperatorTable children;
  OperatorTable parents;
  for (const auto& e : edges) {
    children[e.parent].push_back({e.child, e.weight});
    parents[e.child].push_back({e.parent, e.weight});
  }
  return from_operators(std::move(labels), source, children, parents);
}

LabelGraph LabelGraph::from_operators(std::vector<Label> labels, LabelId source,
                                      const OperatorTable& children,
                                      const OperatorTable& parents) {
  LabelGraph g;
  std::sort(labels.begin(), labels.end(),
            [](const Label& a, const Label& b) { return a.id < b.id; });
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (!g.index_.emplace(labels[i].id, i).second) {
      throw GraphError("duplicate " + describe(labels[i].id));
    }
  }
  g.labels_ = std::move(labels);
  if (!g.labels_.empty() && !g.contains(source)) {
    throw GraphError("source " + describe(source) + " is not a label");
  }
  g.source_ = source;
  g.children_.resize(g.labels_.size());
  g.parents_.resize(g.labels_.size());

  auto fill = [&g](const OperatorTable& table, std::vector<std::vector<Arc>>& out) {
    for (const auto& [id, arcs] : table) {
      if (!g.contains(id)) throw GraphError("unknown " + describe(id) + " in edge");
      for (const auto& arc : arcs) {
        if (!g.contains(arc.other)) {
          throw GraphError("unknown " + describe(arc.other) + " in edge");
        }
      }
      auto& dst = out[g.slot(id)];
      dst.insert(dst.end(), arcs.begin(), arcs.end());
      sort_arcs(dst);
    }
  };
  fill(children, g.children_);
  fill(parents, g.parents_);
  return g;
}

bool LabelGraph::contains(LabelId id) const { return index_.contains(id); }

std::size_t LabelGraph::slot(LabelId id) const {
  auto it = index_.find(id);
  if (it == index_.end()) throw GraphError("unknown " + describe(id));
  return it->second;
}

const Label& LabelGraph::label(LabelId id) const { return labels_[slot(id)]; }

std::span<const LabelGraph::Arc> LabelGraph::children(LabelId id) const {
  return children_[slot(id)];
}

std::span<const LabelGraph::Arc> LabelGraph::parents(LabelId id) const {
  return parents_[slot(id)];
}

double LabelGraph::weight(LabelId parent, LabelId child) const {
  double total = 0.0;
  bool found = false;
  for (const auto& arc : children(parent)) {
    if (arc.other == child) {
      total += arc.weight;
      found = true;
    }
  }
  if (!found) throw GraphError("no edge from " + describe(parent) + " to " + describe(child));
  return total;
}

std::vector<LabelId> LabelGraph::end_labels() const {
  std::vector<LabelId> out;
  for (std::size_t i = 0; i < labels_.size(); ++i) {
    if (children_[i].empty()) out.push_back(labels_[i].id);
  }
  return out;
}

std::vector<WeightedEdge> LabelGraph::edges() const {
  std::vector<WeightedEdge> out;
  for (std::size_t i = 0; i < labels_.size(); ++i) {
    for (const auto& arc : children_[i]) out.push_back({labels_[i].id, arc.other, arc.weight});
  }
  return out;
}

std::vector<ExactEdge> normalize_exact(std::span<const EdgeMultiplicity> edges) {
  std::map<std::pair<LabelId, LabelId>, int> merged;  // keyed (child, parent)
  std::map<LabelId, std::int64_t> incoming;
  for (const auto& e : edges) {
    if (e.multiplicity <= 0) {
      throw GraphError("edge " + std::to_string(e.parent.value) + "->" +
                       std::to_string(e.child.value) + " has non-positive multiplicity");
    }
    merged[{e.child, e.parent}] += e.multiplicity;
    incoming[e.child] += e.multiplicity;
  }
  std::vector<ExactEdge> out;
  out.reserve(merged.size());
  for (const auto& [key, mult] : merged) {
    out.push_back({key.second, key.first, mult, Rational(mult, incoming[key.first])});
  }
  std::sort(out.begin(), out.end(), [](const ExactEdge& a, const ExactEdge& b) {
    return std::pair(a.parent, a.child) < std::pair(b.parent, b.child);
  });
  return out;
}

LabelGraph normalize(std::vector<Label> labels, LabelId source,
                     std::span<const EdgeMultiplicity> edges) {
  std::vector<WeightedEdge> weighted;
  for (const auto& e : normalize_exact(edges)) {
    weighted.push_back({e.parent, e.child, boost::rational_cast<double>(e.weight)});
  }
  return LabelGraph::from_edges(std::move(labels), source, weighted);
}

std::vector<LabelId> end_labels(const LabelGraph& graph) { return graph.end_labels(); }

}  // namespace dagmf
