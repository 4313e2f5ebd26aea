#pragma once

#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "dagmf/io/graph_file.hpp"
#include "dagmf/io/volume_file.hpp"
#include "dagmf/solver/solver.hpp"

namespace dagmf::io {

enum class OutputMode { kProbabilistic, kArgmax };

struct RunConfig {
  std::filesystem::path graph;
  std::filesystem::path data;
  std::optional<std::filesystem::path> smooth;
  /// (label name, id or "*", alpha); later entries override "*".
  std::vector<std::pair<std::string, double>> alpha;
  std::filesystem::path out;
  std::optional<std::filesystem::path> report;
  SolverParams params;
  OutputMode mode = OutputMode::kProbabilistic;
};

inline constexpr int kExitConverged = 0;
inline constexpr int kExitInputError = 1;
inline constexpr int kExitNotConverged = 2;

/// Binds volumes to a loaded graph. smoothness_L = alpha_L * S_L where S_L
/// defaults to 1 and alpha_L to 1 when only S_L is given; labels with
/// neither get no smoothness. Super-object scaling is applied last.
ProblemSpec build_problem(const LoadedGraph& graph, const Volume& data, const Volume* smooth,
                          const std::vector<std::pair<std::string, double>>& alpha);

Volume output_volume(const SolveResult& result, const ProblemSpec& problem, OutputMode mode);

/// key=value lines, one per field, in a fixed order.
std::string format_report(const SolveReport& report, const SolverParams& params);
std::map<std::string, std::string> parse_report(const std::string& text);

/// Full pipeline; returns one of the kExit* codes. Diagnostics go to `err`,
/// the report to `out` unless config.report is set.
int run(const RunConfig& config, std::ostream& out, std::ostream& err);

}  // namespace dagmf::io
