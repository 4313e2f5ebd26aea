#include "dagmf/dag/superobject.hpp"

#include <algorithm>
#include <set>

#include "dagmf/error.hpp"

namespace dagmf {

namespace {

std::vector<LabelId> checked_group(const std::vector<LabelId>& group,
                                   const std::map<LabelId, std::string>& names,
                                   std::size_t index) {
  std::vector<LabelId> sorted = group;
  std::sort(sorted.begin(), sorted.end());
  const std::string where = "group " + std::to_string(index);
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
    throw SpecError(where + " repeats a member");
  }
  for (LabelId id : sorted) {
    if (!names.contains(id)) {
      throw SpecError(where + " references unknown end label id " + std::to_string(id.value));
    }
  }
  if (sorted.size() < 2) {
    throw SpecError(where + " has fewer than two members; set that label's smoothness directly");
  }
  if (sorted.size() == names.size()) {
    throw SpecError(where + " contains every end label; regularize the source instead");
  }
  return sorted;
}

}  // namespace

ConstructionResult build_superobject_dag(const SuperObjectSpec& spec) {
  if (spec.end_labels.empty()) throw SpecError("super-object spec has no end labels");

  std::map<LabelId, std::string> names;
  for (const auto& l : spec.end_labels) {
    if (l.id == spec.source.id) throw SpecError("end label id equals the source id");
    if (!names.emplace(l.id, l.name).second) {
      throw SpecError("duplicate end label id " + std::to_string(l.id.value));
    }
  }

  std::vector<std::vector<LabelId>> groups;
  std::set<std::vector<LabelId>> distinct;
  for (std::size_t i = 0; i < spec.groups.size(); ++i) {
    auto g = checked_group(spec.groups[i], names, i);
    if (!distinct.insert(g).second) throw SpecError("group " + std::to_string(i) + " is a duplicate");
    groups.push_back(std::move(g));
  }

  std::int32_t next_id = spec.source.id.value;
  for (const auto& l : spec.end_labels) next_id = std::max(next_id, l.id.value);
  ++next_id;

  ConstructionResult result;
  std::vector<Label> labels{spec.source};
  labels.insert(labels.end(), spec.end_labels.begin(), spec.end_labels.end());

  std::map<LabelId, int> parent_count;
  for (const auto& l : spec.end_labels) parent_count[l.id] = 0;

  for (std::size_t i = 0; i < groups.size(); ++i) {
    LabelId gid{next_id++};
    std::string name;
    if (i < spec.group_names.size() && !spec.group_names[i].empty()) {
      name = spec.group_names[i];
    } else {
      for (LabelId m : groups[i]) name += names[m];
    }
    labels.push_back({gid, name});
    result.group_vertices.push_back(gid);
    result.unit_edges.push_back({spec.source.id, gid, 1});
    for (LabelId m : groups[i]) {
      result.unit_edges.push_back({gid, m, 1});
      ++parent_count[m];
    }
  }

  int r = 1;
  for (const auto& [id, count] : parent_count) r = std::max(r, count);
  result.r = r;

  for (const auto& [id, count] : parent_count) {
    for (int k = count; k < r; ++k) {
      result.padding.push_back({spec.source.id, id, 1});
      result.unit_edges.push_back({spec.source.id, id, 1});
    }
  }

  for (LabelId gid : result.group_vertices) result.smoothness_scale[gid] = r;

  result.exact_weights = normalize_exact(result.unit_edges);
  std::vector<WeightedEdge> weighted;
  for (const auto& e : result.exact_weights) {
    weighted.push_back({e.parent, e.child, boost::rational_cast<double>(e.weight)});
  }
  result.graph = LabelGraph::from_edges(std::move(labels), spec.source.id, weighted);
  return result;
}

}  // namespace dagmf
