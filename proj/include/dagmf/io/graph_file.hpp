#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "dagmf/dag/label_graph.hpp"
#include "dagmf/dag/superobject.hpp"

namespace dagmf::io {

struct GraphFileEdge {
  LabelId parent;
  LabelId child;
  int multiplicity = 1;
  /// Present in compiled graphs; when set, used instead of normalizing.
  std::optional<double> weight;

  bool operator==(const GraphFileEdge&) const = default;
};

/// In-memory form of the graph spec JSON. Either `edges` or `groups` drives
/// the graph; `r` and `smoothness_scale` are written for compiled
/// super-object graphs.
struct GraphFile {
  std::vector<Label> labels;
  LabelId source;
  std::vector<GraphFileEdge> edges;
  std::optional<std::vector<std::vector<LabelId>>> groups;
  std::optional<int> r;
  std::map<LabelId, int> smoothness_scale;

  bool operator==(const GraphFile&) const = default;
};

GraphFile parse_graph_json(std::string_view text);
std::string write_graph_json(const GraphFile& file);

GraphFile read_graph_file(const std::filesystem::path& path);
void write_graph_file(const std::filesystem::path& path, const GraphFile& file);

struct LoadedGraph {
  LabelGraph graph;
  std::map<LabelId, int> smoothness_scale;
  std::optional<ConstructionResult> construction;
};

/// Builds and validates the graph described by a file: groups go through
/// build_superobject_dag, explicit weights are used as given, and bare
/// multiplicities are normalized. Throws IoError or GraphError.
LoadedGraph compile_graph(const GraphFile& file);

/// Compiled form with merged multiplicities and explicit weights.
GraphFile to_graph_file(const ConstructionResult& construction);
GraphFile to_graph_file(const LabelGraph& graph);

/// "L.P = {..}    L.C = {..}" lines in id order.
std::string operator_table(const LabelGraph& graph);

}  // namespace dagmf::io
