#include "dagmf/io/run.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <set>
#include <sstream>

#include "dagmf/error.hpp"

namespace dagmf::io {

namespace {

std::string describe(const LabelGraph& g, LabelId id) {
  return "'" + g.label(id).name + "' (id " + std::to_string(id.value) + ")";
}

ScalarField to_field(const Lattice& lattice, const std::vector<float>& values) {
  return ScalarField(lattice, std::vector<double>(values.begin(), values.end()));
}

/// Resolves an --alpha key to label ids: "*" means every non-source label.
std::vector<LabelId> resolve_alpha_key(const LabelGraph& g, const std::string& key) {
  std::vector<LabelId> out;
  if (key == "*") {
    for (const auto& l : g.labels()) {
      if (l.id != g.source()) out.push_back(l.id);
    }
    return out;
  }
  for (const auto& l : g.labels()) {
    if (l.name == key) out.push_back(l.id);
  }
  if (out.empty()) {
    std::int32_t value = 0;
    auto [ptr, ec] = std::from_chars(key.data(), key.data() + key.size(), value);
    if (ec == std::errc() && ptr == key.data() + key.size() && g.contains(LabelId{value})) {
      out.push_back(LabelId{value});
    }
  }
  if (out.empty()) throw IoError("unknown label '" + key + "' in --alpha");
  for (LabelId id : out) {
    if (id == g.source()) throw IoError("--alpha cannot target the source");
  }
  return out;
}

std::string fmt_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

ProblemSpec build_problem(const LoadedGraph& loaded, const Volume& data, const Volume* smooth,
                          const std::vector<std::pair<std::string, double>>& alpha) {
  const auto& g = loaded.graph;
  ProblemSpec problem;
  problem.graph = g;
  problem.lattice = lattice_of(data);

  for (std::size_t i = 0; i < data.label_ids.size(); ++i) {
    LabelId id{data.label_ids[i]};
    if (!g.contains(id)) {
      throw IoError("unknown label id " + std::to_string(id.value) + " in data volume");
    }
    if (!g.is_end_label(id)) throw IoError("data volume has a field for non-end label " + describe(g, id));
    if (!problem.data.emplace(id, to_field(problem.lattice, data.fields[i])).second) {
      throw IoError("data volume repeats label " + describe(g, id));
    }
  }
  for (LabelId id : g.end_labels()) {
    if (!problem.data.contains(id)) throw IoError("missing data field for end label " + describe(g, id));
  }

  std::map<LabelId, ScalarField> shape;
  if (smooth != nullptr) {
    if (smooth->dims != data.dims) throw IoError("smoothness volume dims differ from the data volume");
    for (std::size_t i = 0; i < smooth->label_ids.size(); ++i) {
      LabelId id{smooth->label_ids[i]};
      if (!g.contains(id)) {
        throw IoError("unknown label id " + std::to_string(id.value) + " in smoothness volume");
      }
      if (id == g.source()) throw IoError("smoothness volume has a field for the source");
      shape.emplace(id, to_field(problem.lattice, smooth->fields[i]));
    }
  }

  std::map<LabelId, double> alpha_of;
  for (const auto& [key, value] : alpha) {
    if (!(value >= 0.0)) throw IoError("--alpha " + key + " must be non-negative");
    if (key == "*") {
      for (LabelId id : resolve_alpha_key(g, key)) alpha_of.try_emplace(id, value);
    }
  }
  for (const auto& [key, value] : alpha) {
    if (key == "*") continue;
    for (LabelId id : resolve_alpha_key(g, key)) alpha_of[id] = value;
  }

  for (const auto& l : g.labels()) {
    if (l.id == g.source()) continue;
    const auto a = alpha_of.find(l.id);
    const auto s = shape.find(l.id);
    if (a == alpha_of.end() && s == shape.end()) continue;
    const double factor = a == alpha_of.end() ? 1.0 : a->second;
    ScalarField field = s == shape.end() ? ScalarField(problem.lattice, 1.0) : s->second;
    for (double& v : field.values()) v *= factor;
    problem.smoothness.emplace(l.id, std::move(field));
    problem.alpha[l.id] = factor;
  }
  apply_smoothness_scale(problem, loaded.smoothness_scale);
  validate_problem(problem);
  return problem;
}

Volume output_volume(const SolveResult& result, const ProblemSpec& problem, OutputMode mode) {
  Volume v = volume_for(problem.lattice);
  if (mode == OutputMode::kArgmax) {
    const auto hard = hard_labeling(result.labeling, problem);
    std::vector<float> coded(hard.size());
    for (std::size_t x = 0; x < hard.size(); ++x) coded[x] = static_cast<float>(hard[x].value);
    v.label_ids.push_back(kArgmaxFieldId);
    v.fields.push_back(std::move(coded));
    return v;
  }
  for (LabelId id : problem.graph.end_labels()) {
    const auto& u = result.labeling.at(id);
    v.label_ids.push_back(id.value);
    v.fields.emplace_back(u.values().begin(), u.values().end());
  }
  return v;
}

std::string format_report(const SolveReport& r, const SolverParams& p) {
  std::ostringstream out;
  out << "converged=" << (r.converged ? "true" : "false") << "\n"
      << "iterations=" << r.iterations << "\n"
      << "residual=" << fmt_double(r.residual) << "\n"
      << "primal_energy=" << fmt_double(r.primal) << "\n"
      << "dual_value=" << fmt_double(r.dual) << "\n"
      << "duality_gap=" << fmt_double(r.gap) << "\n"
      << "max_flow_excess=" << fmt_double(r.max_flow_excess) << "\n"
      << "negativity=" << fmt_double(r.violation.negativity) << "\n"
      << "consistency=" << fmt_double(r.violation.consistency) << "\n"
      << "simplex=" << fmt_double(r.violation.simplex) << "\n"
      << "c=" << fmt_double(p.c) << "\n"
      << "tau=" << fmt_double(p.tau) << "\n"
      << "tol=" << fmt_double(p.tol) << "\n"
      << "max_iters=" << p.max_iters << "\n"
      << "check_interval=" << p.check_interval << "\n"
      << "workers=" << p.workers << "\n"
      << "wall_time_s=" << fmt_double(r.wall_seconds) << "\n";
  return out.str();
}

std::map<std::string, std::string> parse_report(const std::string& text) {
  std::map<std::string, std::string> out;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    const auto eq = line.find('=');
    if (eq == std::string::npos) continue;
    out[line.substr(0, eq)] = line.substr(eq + 1);
  }
  return out;
}

int run(const RunConfig& config, std::ostream& out, std::ostream& err) {
  try {
    const auto loaded = compile_graph(read_graph_file(config.graph));
    const auto data = read_volume(config.data);
    std::optional<Volume> smooth;
    if (config.smooth) smooth = read_volume(*config.smooth);
    const auto problem = build_problem(loaded, data, smooth ? &*smooth : nullptr, config.alpha);

    const auto result = solve(problem, config.params);
    write_volume(config.out, output_volume(result, problem, config.mode));

    const auto text = format_report(result.report, config.params);
    if (config.report) {
      std::ofstream rep(*config.report, std::ios::binary);
      if (!rep) throw IoError("cannot write report " + config.report->string());
      rep << text;
    } else {
      out << text;
    }
    if (!result.report.converged) {
      err << "dagmf: not converged after " << result.report.iterations << " iterations (residual "
          << result.report.residual << ")\n";
      return kExitNotConverged;
    }
    return kExitConverged;
  } catch (const Error& e) {
    err << "dagmf: " << e.what() << "\n";
    return kExitInputError;
  }
}

}  // namespace dagmf::io
