#include <iostream>
#include <map>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "dagmf/dag/validate.hpp"
#include "dagmf/error.hpp"
#include "dagmf/io/graph_file.hpp"
#include "dagmf/io/run.hpp"

namespace {

int cmd_validate(const std::string& path) {
  try {
    const auto file = dagmf::io::read_graph_file(path);
    dagmf::LabelGraph graph;
    if (file.groups) {
      graph = dagmf::io::compile_graph(file).graph;
    } else {
      // Build without throwing on rule violations so they can be listed.
      std::size_t weighted = 0;
      for (const auto& e : file.edges) weighted += e.weight ? 1 : 0;
      if (weighted == file.edges.size() && weighted > 0) {
        std::vector<dagmf::WeightedEdge> edges;
        for (const auto& e : file.edges) edges.push_back({e.parent, e.child, *e.weight});
        graph = dagmf::LabelGraph::from_edges(file.labels, file.source, edges);
      } else if (weighted == 0) {
        std::vector<dagmf::EdgeMultiplicity> edges;
        for (const auto& e : file.edges) edges.push_back({e.parent, e.child, e.multiplicity});
        graph = dagmf::normalize(file.labels, file.source, edges);
      } else {
        throw dagmf::IoError("graph file mixes weighted and multiplicity-only edges");
      }
    }
    std::cout << dagmf::io::operator_table(graph);
    const auto report = dagmf::validate(graph);
    if (report.ok()) {
      std::cout << "ok\n";
      return 0;
    }
    for (const auto& v : report.violations) {
      std::cout << "violation [" << dagmf::to_string(v.rule) << "]: " << v.message << "\n";
    }
    return 1;
  } catch (const dagmf::Error& e) {
    std::cerr << "dagmf: " << e.what() << "\n";
    return 1;
  }
}

int cmd_build_dag(const std::string& groups, const std::string& out) {
  try {
    const auto file = dagmf::io::read_graph_file(groups);
    if (!file.groups) throw dagmf::IoError(groups + " has no \"groups\" list");
    const auto loaded = dagmf::io::compile_graph(file);
    const auto& c = *loaded.construction;
    dagmf::io::write_graph_file(out, dagmf::io::to_graph_file(c));
    std::cout << "r=" << c.r << "\n";
    for (const auto& e : c.exact_weights) {
      std::cout << c.graph.label(e.parent).name << "->" << c.graph.label(e.child).name
                << " multiplicity=" << e.multiplicity << " weight=" << e.weight.numerator();
      if (e.weight.denominator() != 1) std::cout << "/" << e.weight.denominator();
      std::cout << "\n";
    }
    return 0;
  } catch (const dagmf::Error& e) {
    std::cerr << "dagmf: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Directed acyclic graphical max-flow segmentation"};
  app.require_subcommand(1);

  dagmf::io::RunConfig config;
  std::string graph, data, smooth, out, report, mode = "prob";
  std::vector<std::string> alpha;

  auto* solve = app.add_subcommand("solve", "solve a segmentation problem");
  solve->add_option("--graph", graph, "graph or groups JSON")->required();
  solve->add_option("--data", data, "data-term volume (one field per end label)")->required();
  solve->add_option("--smooth", smooth, "smoothness volume (one field per regularized label)");
  solve->add_option("--alpha", alpha, "per-label smoothness weight, LABEL=VALUE ('*' for all)");
  solve->add_option("--out", out, "output volume")->required();
  solve->add_option("--mode", mode, "prob or argmax")->check(CLI::IsMember({"prob", "argmax"}));
  solve->add_option("--c", config.params.c, "augmented-Lagrangian penalty");
  solve->add_option("--tau", config.params.tau, "spatial-flow step");
  solve->add_option("--tol", config.params.tol, "tolerance on max conservation residual");
  solve->add_option("--max-iters", config.params.max_iters, "iteration cap");
  solve->add_option("--check-interval", config.params.check_interval, "iterations between checks");
  solve->add_option("--workers", config.params.workers, "parallel voxel partitions");
  solve->add_option("--report", report, "write the key=value report here instead of stdout");

  std::string validate_graph;
  auto* validate = app.add_subcommand("validate", "check a graph file and print its operators");
  validate->add_option("--graph", validate_graph, "graph JSON")->required();

  std::string groups, graph_out;
  auto* build = app.add_subcommand("build-dag", "compile a groups file into a weighted graph");
  build->add_option("--groups", groups, "groups JSON")->required();
  build->add_option("--out", graph_out, "compiled graph JSON")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : dagmf::io::kExitInputError;
  }

  if (*validate) return cmd_validate(validate_graph);
  if (*build) return cmd_build_dag(groups, graph_out);

  config.graph = graph;
  config.data = data;
  config.out = out;
  if (!smooth.empty()) config.smooth = smooth;
  if (!report.empty()) config.report = report;
  config.mode = mode == "argmax" ? dagmf::io::OutputMode::kArgmax : dagmf::io::OutputMode::kProbabilistic;
  for (const auto& a : alpha) {
    const auto eq = a.rfind('=');
    if (eq == std::string::npos || eq == 0) {
      std::cerr << "dagmf: --alpha expects LABEL=VALUE, got '" << a << "'\n";
      return dagmf::io::kExitInputError;
    }
    try {
      config.alpha.emplace_back(a.substr(0, eq), std::stod(a.substr(eq + 1)));
    } catch (const std::exception&) {
      std::cerr << "dagmf: bad --alpha value in '" << a << "'\n";
      return dagmf::io::kExitInputError;
    }
  }
  return dagmf::io::run(config, std::cout, std::cerr);
}
