#include "dagmf/io/graph_file.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include "dagmf/dag/validate.hpp"
#include "dagmf/error.hpp"
#include "json.hpp"

namespace dagmf::io {

using Json = nlohmann::ordered_json;

namespace {

template <class T>
T field(const Json& obj, const char* key, const char* where) {
  if (!obj.is_object() || !obj.contains(key)) {
    throw IoError(std::string("malformed graph file: ") + where + " lacks \"" + key + "\"");
  }
  try {
    return obj.at(key).get<T>();
  } catch (const Json::exception&) {
    throw IoError(std::string("malformed graph file: ") + where + " has a mistyped \"" + key + "\"");
  }
}

LabelId id_field(const Json& obj, const char* key, const char* where) {
  return LabelId{field<std::int32_t>(obj, key, where)};
}

void require_known(const std::set<LabelId>& known, LabelId id, const std::string& where) {
  if (!known.contains(id)) {
    throw IoError("unknown label id " + std::to_string(id.value) + " referenced by " + where);
  }
}

}  // namespace

GraphFile parse_graph_json(std::string_view text) {
  Json root;
  try {
    root = Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw IoError(std::string("malformed graph file: ") + e.what());
  }
  if (!root.is_object()) throw IoError("malformed graph file: top level is not an object");

  GraphFile out;
  std::set<LabelId> known;
  const auto labels = field<Json>(root, "labels", "graph");
  if (!labels.is_array()) throw IoError("malformed graph file: \"labels\" is not an array");
  for (const auto& l : labels) {
    Label label{id_field(l, "id", "label"), field<std::string>(l, "name", "label")};
    if (!known.insert(label.id).second) {
      throw IoError("malformed graph file: duplicate label id " + std::to_string(label.id.value));
    }
    out.labels.push_back(std::move(label));
  }
  out.source = id_field(root, "source", "graph");
  require_known(known, out.source, "\"source\"");

  if (root.contains("edges")) {
    const auto& edges = root.at("edges");
    if (!edges.is_array()) throw IoError("malformed graph file: \"edges\" is not an array");
    for (const auto& e : edges) {
      GraphFileEdge edge{id_field(e, "parent", "edge"), id_field(e, "child", "edge"), 1, std::nullopt};
      if (e.contains("multiplicity")) edge.multiplicity = field<int>(e, "multiplicity", "edge");
      if (e.contains("weight")) edge.weight = field<double>(e, "weight", "edge");
      if (edge.multiplicity < 1) throw IoError("malformed graph file: edge multiplicity must be >= 1");
      const std::string where =
          "edge " + std::to_string(edge.parent.value) + "->" + std::to_string(edge.child.value);
      require_known(known, edge.parent, where);
      require_known(known, edge.child, where);
      out.edges.push_back(edge);
    }
  }
  if (root.contains("groups")) {
    const auto& groups = root.at("groups");
    if (!groups.is_array()) throw IoError("malformed graph file: \"groups\" is not an array");
    std::vector<std::vector<LabelId>> parsed;
    for (const auto& g : groups) {
      if (!g.is_array()) throw IoError("malformed graph file: a group is not an array");
      std::vector<LabelId> members;
      for (const auto& m : g) {
        if (!m.is_number_integer()) throw IoError("malformed graph file: group member is not an integer");
        LabelId id{m.get<std::int32_t>()};
        require_known(known, id, "group " + std::to_string(parsed.size()));
        members.push_back(id);
      }
      parsed.push_back(std::move(members));
    }
    out.groups = std::move(parsed);
  }
  if (root.contains("r")) out.r = field<int>(root, "r", "graph");
  if (root.contains("smoothness_scale")) {
    const auto& scale = root.at("smoothness_scale");
    if (!scale.is_object()) throw IoError("malformed graph file: \"smoothness_scale\" is not an object");
    for (const auto& [key, value] : scale.items()) {
      LabelId id;
      try {
        id = LabelId{std::stoi(key)};
      } catch (const std::exception&) {
        throw IoError("malformed graph file: smoothness_scale key '" + key + "' is not an id");
      }
      require_known(known, id, "\"smoothness_scale\"");
      if (!value.is_number_integer()) throw IoError("malformed graph file: smoothness_scale value is not an integer");
      out.smoothness_scale[id] = value.get<int>();
    }
  }
  return out;
}

std::string write_graph_json(const GraphFile& file) {
  Json root = Json::object();
  Json labels = Json::array();
  for (const auto& l : file.labels) labels.push_back({{"id", l.id.value}, {"name", l.name}});
  root["labels"] = std::move(labels);
  root["source"] = file.source.value;
  if (!file.groups || !file.edges.empty()) {
    Json edges = Json::array();
    for (const auto& e : file.edges) {
      Json j = {{"parent", e.parent.value}, {"child", e.child.value}, {"multiplicity", e.multiplicity}};
      if (e.weight) j["weight"] = *e.weight;
      edges.push_back(std::move(j));
    }
    root["edges"] = std::move(edges);
  }
  if (file.groups) {
    Json groups = Json::array();
    for (const auto& g : *file.groups) {
      Json members = Json::array();
      for (LabelId m : g) members.push_back(m.value);
      groups.push_back(std::move(members));
    }
    root["groups"] = std::move(groups);
  }
  if (file.r) root["r"] = *file.r;
  if (!file.smoothness_scale.empty()) {
    Json scale = Json::object();
    for (const auto& [id, f] : file.smoothness_scale) scale[std::to_string(id.value)] = f;
    root["smoothness_scale"] = std::move(scale);
  }
  return root.dump(2) + "\n";
}

GraphFile read_graph_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open graph file " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_graph_json(buf.str());
}

void write_graph_file(const std::filesystem::path& path, const GraphFile& file) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write graph file " + path.string());
  out << write_graph_json(file);
  if (!out) throw IoError("failed writing graph file " + path.string());
}

LoadedGraph compile_graph(const GraphFile& file) {
  LoadedGraph out;
  if (file.groups) {
    if (!file.edges.empty()) throw IoError("graph file gives both \"edges\" and \"groups\"");
    SuperObjectSpec spec;
    for (const auto& l : file.labels) {
      if (l.id == file.source) {
        spec.source = l;
      } else {
        spec.end_labels.push_back(l);
      }
    }
    spec.groups = *file.groups;
    auto construction = build_superobject_dag(spec);
    out.graph = construction.graph;
    out.smoothness_scale = construction.smoothness_scale;
    out.construction = std::move(construction);
  } else {
    std::size_t weighted = 0;
    for (const auto& e : file.edges) weighted += e.weight ? 1 : 0;
    if (weighted != 0 && weighted != file.edges.size()) {
      throw IoError("graph file mixes weighted and multiplicity-only edges");
    }
    if (weighted != 0) {
      std::vector<WeightedEdge> edges;
      for (const auto& e : file.edges) edges.push_back({e.parent, e.child, *e.weight});
      out.graph = LabelGraph::from_edges(file.labels, file.source, edges);
    } else {
      std::vector<EdgeMultiplicity> edges;
      for (const auto& e : file.edges) edges.push_back({e.parent, e.child, e.multiplicity});
      out.graph = normalize(file.labels, file.source, edges);
    }
    out.smoothness_scale = file.smoothness_scale;
  }
  require_valid(out.graph);
  return out;
}

GraphFile to_graph_file(const ConstructionResult& construction) {
  GraphFile out;
  out.labels = construction.graph.labels();
  out.source = construction.graph.source();
  for (const auto& e : construction.exact_weights) {
    out.edges.push_back({e.parent, e.child, e.multiplicity, boost::rational_cast<double>(e.weight)});
  }
  out.r = construction.r;
  out.smoothness_scale = construction.smoothness_scale;
  return out;
}

GraphFile to_graph_file(const LabelGraph& graph) {
  GraphFile out;
  out.labels = graph.labels();
  out.source = graph.source();
  for (const auto& e : graph.edges()) out.edges.push_back({e.parent, e.child, 1, e.weight});
  return out;
}

std::string operator_table(const LabelGraph& graph) {
  auto names = [&graph](std::span<const LabelGraph::Arc> arcs) {
    std::string s = "{";
    for (std::size_t i = 0; i < arcs.size(); ++i) {
      if (i) s += ", ";
      s += graph.label(arcs[i].other).name;
    }
    return s + "}";
  };
  std::ostringstream out;
  for (const auto& l : graph.labels()) {
    out << l.name << ".P = " << names(graph.parents(l.id)) << "    " << l.name
        << ".C = " << names(graph.children(l.id)) << "\n";
  }
  return out.str();
}

}  // namespace dagmf::io
