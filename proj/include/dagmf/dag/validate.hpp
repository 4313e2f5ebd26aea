#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "dagmf/dag/label_graph.hpp"

namespace dagmf {

enum class Rule {
  kEmpty,
  kSingleRoot,
  kParentChildSymmetry,
  kAcyclic,
  kConnected,
  kNegativeWeight,
  kNormalization,
};

std::string_view to_string(Rule rule);

struct Violation {
  Rule rule;
  LabelId vertex;
  std::optional<LabelId> other;
  std::string message;
};

struct ValidationReport {
  std::vector<Violation> violations;

  [[nodiscard]] bool ok() const noexcept { return violations.empty(); }
  [[nodiscard]] bool has(Rule rule) const;
  /// All messages joined by "; ".
  [[nodiscard]] std::string summary() const;
};

/// Tolerance on the per-child sum of incoming weights.
inline constexpr double kNormalizationTolerance = 1e-12;

/// Checks the rooted-DAG consistency rules. Never throws on bad structure.
ValidationReport validate(const LabelGraph& graph);

/// Throws GraphError carrying the report summary when validation fails.
void require_valid(const LabelGraph& graph);

}  // namespace dagmf
