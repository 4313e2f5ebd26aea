#include "dagmf/dag/validate.hpp"

#include <cmath>
#include <map>
#include <set>
#include <sstream>

#include "dagmf/error.hpp"

namespace dagmf {

namespace {

std::string name_of(const LabelGraph& g, LabelId id) {
  const auto& name = g.label(id).name;
  return name.empty() ? "#" + std::to_string(id.value) : name;
}

using PairWeights = std::map<std::pair<LabelId, LabelId>, double>;

void check_symmetry(const LabelGraph& g, ValidationReport& report) {
  PairWeights from_children;
  PairWeights from_parents;
  for (const auto& l : g.labels()) {
    for (const auto& arc : g.children(l.id)) from_children[{l.id, arc.other}] += arc.weight;
    for (const auto& arc : g.parents(l.id)) from_parents[{arc.other, l.id}] += arc.weight;
  }
  for (const auto& [edge, w] : from_children) {
    auto it = from_parents.find(edge);
    if (it == from_parents.end()) {
      report.violations.push_back(
          {Rule::kParentChildSymmetry, edge.second, edge.first,
           "parent/child relationship: " + name_of(g, edge.first) + " lists " +
               name_of(g, edge.second) + " as child but " + name_of(g, edge.second) +
               " does not list " + name_of(g, edge.first) + " as parent"});
    } else if (it->second != w) {
      report.violations.push_back(
          {Rule::kParentChildSymmetry, edge.second, edge.first,
           "parent/child relationship: weight of " + name_of(g, edge.first) + "->" +
               name_of(g, edge.second) + " differs between operators"});
    }
  }
  for (const auto& [edge, w] : from_parents) {
    if (!from_children.contains(edge)) {
      report.violations.push_back(
          {Rule::kParentChildSymmetry, edge.second, edge.first,
           "parent/child relationship: " + name_of(g, edge.second) + " lists " +
               name_of(g, edge.first) + " as parent but " + name_of(g, edge.first) +
               " does not list " + name_of(g, edge.second) + " as child"});
    }
  }
}

void check_cycles(const LabelGraph& g, ValidationReport& report) {
  enum class Mark { kNew, kActive, kDone };
  std::map<LabelId, Mark> mark;
  for (const auto& l : g.labels()) mark[l.id] = Mark::kNew;
  std::set<LabelId> reported;

  // Iterative DFS so deep chains cannot overflow the stack.
  for (const auto& root : g.labels()) {
    if (mark[root.id] != Mark::kNew) continue;
    std::vector<std::pair<LabelId, std::size_t>> stack{{root.id, 0}};
    mark[root.id] = Mark::kActive;
    while (!stack.empty()) {
      auto& [v, next] = stack.back();
      auto kids = g.children(v);
      if (next == kids.size()) {
        mark[v] = Mark::kDone;
        stack.pop_back();
        continue;
      }
      LabelId w = kids[next++].other;
      if (mark[w] == Mark::kActive) {
        if (reported.insert(w).second) {
          report.violations.push_back(
              {Rule::kAcyclic, w, v, "cycle through " + name_of(g, w)});
        }
      } else if (mark[w] == Mark::kNew) {
        mark[w] = Mark::kActive;
        stack.emplace_back(w, 0);
      }
    }
  }
}

void check_reachability(const LabelGraph& g, ValidationReport& report) {
  std::set<LabelId> seen{g.source()};
  std::vector<LabelId> frontier{g.source()};
  while (!frontier.empty()) {
    LabelId v = frontier.back();
    frontier.pop_back();
    for (const auto& arc : g.children(v)) {
      if (seen.insert(arc.other).second) frontier.push_back(arc.other);
    }
  }
  for (const auto& l : g.labels()) {
    if (!seen.contains(l.id)) {
      report.violations.push_back(
          {Rule::kConnected, l.id, std::nullopt, name_of(g, l.id) + " is not reachable from the source"});
    }
  }
}

}  // namespace

std::string_view to_string(Rule rule) {
  switch (rule) {
    case Rule::kEmpty: return "empty";
    case Rule::kSingleRoot: return "single-root";
    case Rule::kParentChildSymmetry: return "parent/child relationship";
    case Rule::kAcyclic: return "acyclic";
    case Rule::kConnected: return "connected";
    case Rule::kNegativeWeight: return "non-negative weights";
    case Rule::kNormalization: return "normalized weights";
  }
  return "unknown";
}

bool ValidationReport::has(Rule rule) const {
  for (const auto& v : violations) {
    if (v.rule == rule) return true;
  }
  return false;
}

std::string ValidationReport::summary() const {
  std::string out;
  for (const auto& v : violations) {
    if (!out.empty()) out += "; ";
    out += v.message;
  }
  return out;
}

ValidationReport validate(const LabelGraph& g) {
  ValidationReport report;
  if (g.empty()) {
    report.violations.push_back({Rule::kEmpty, LabelId{}, std::nullopt, "graph has no labels"});
    return report;
  }

  if (!g.parents(g.source()).empty()) {
    report.violations.push_back({Rule::kSingleRoot, g.source(), std::nullopt,
                                 "source " + name_of(g, g.source()) + " has parents"});
  }
  for (const auto& l : g.labels()) {
    if (l.id != g.source() && g.parents(l.id).empty()) {
      report.violations.push_back({Rule::kSingleRoot, l.id, std::nullopt,
                                   name_of(g, l.id) + " has no parent but is not the source"});
    }
  }

  check_symmetry(g, report);

  for (const auto& e : g.edges()) {
    if (!(e.weight >= 0.0) || !std::isfinite(e.weight)) {
      report.violations.push_back({Rule::kNegativeWeight, e.child, e.parent,
                                   "invalid weight on edge " + name_of(g, e.parent) + "->" +
                                       name_of(g, e.child)});
    }
  }

  check_cycles(g, report);
  check_reachability(g, report);

  for (const auto& l : g.labels()) {
    auto in = g.parents(l.id);
    if (l.id == g.source() || in.empty()) continue;
    double sum = 0.0;
    for (const auto& arc : in) sum += arc.weight;
    if (std::abs(sum - 1.0) > kNormalizationTolerance) {
      std::ostringstream msg;
      msg.precision(12);
      msg << "weights sum " << sum << " ≠ 1 at " << name_of(g, l.id);
      report.violations.push_back({Rule::kNormalization, l.id, std::nullopt, msg.str()});
    }
  }
  return report;
}

void require_valid(const LabelGraph& graph) {
  auto report = validate(graph);
  if (!report.ok()) throw GraphError("invalid label graph: " + report.summary());
}

}  // namespace dagmf
