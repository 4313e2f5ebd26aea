#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <span>
#include <string>
#include <vector>

#include <boost/rational.hpp>

namespace dagmf {

struct LabelId {
  std::int32_t value = -1;

  constexpr auto operator<=>(const LabelId&) const = default;
};

struct Label {
  LabelId id;
  std::string name;

  bool operator==(const Label&) const = default;
};

struct WeightedEdge {
  LabelId parent;
  LabelId child;
  double weight = 1.0;

  bool operator==(const WeightedEdge&) const = default;
};

/// Pre-normalization edge; repeated parallel edges are expressed through multiplicity.
struct EdgeMultiplicity {
  LabelId parent;
  LabelId child;
  int multiplicity = 1;

  bool operator==(const EdgeMultiplicity&) const = default;
};

using Rational = boost::rational<std::int64_t>;

struct ExactEdge {
  LabelId parent;
  LabelId child;
  int multiplicity = 0;
  Rational weight;
};

/// Rooted weighted label DAG, stored as separate parent and child operators.
///
/// Graphs built from an edge list always have symmetric operators. The
/// operator-table constructor accepts arbitrary tables so that validate() can
/// report asymmetric input.
class LabelGraph {
 public:
  struct Arc {
    LabelId other;
    double weight = 1.0;

    bool operator==(const Arc&) const = default;
  };

  using OperatorTable = std::map<LabelId, std::vector<Arc>>;

  LabelGraph() = default;

  static LabelGraph from_edges(std::vector<Label> labels, LabelId source,
                               std::span<const WeightedEdge> edges);

  static LabelGraph from_operators(std::vector<Label> labels, LabelId source,
                                   const OperatorTable& children,
                                   const OperatorTable& parents);

  [[nodiscard]] const std::vector<Label>& labels() const noexcept { return labels_; }
  [[nodiscard]] std::size_t size() const noexcept { return labels_.size(); }
  [[nodiscard]] bool empty() const noexcept { return labels_.empty(); }
  [[nodiscard]] LabelId source() const noexcept { return source_; }

  [[nodiscard]] bool contains(LabelId id) const;
  [[nodiscard]] const Label& label(LabelId id) const;
  [[nodiscard]] std::span<const Arc> children(LabelId id) const;
  [[nodiscard]] std::span<const Arc> parents(LabelId id) const;

  /// Weight of the (parent, child) arc in the child operator; throws if absent.
  [[nodiscard]] double weight(LabelId parent, LabelId child) const;

  /// Labels with no children, ascending by id.
  [[nodiscard]] std::vector<LabelId> end_labels() const;
  [[nodiscard]] bool is_end_label(LabelId id) const { return children(id).empty(); }

  /// Edge list read from the child operator, ordered by (parent, child).
  [[nodiscard]] std::vector<WeightedEdge> edges() const;

  bool operator==(const LabelGraph&) const = default;

 private:
  [[nodiscard]] std::size_t slot(LabelId id) const;

  std::vector<Label> labels_;
  std::map<LabelId, std::size_t> index_;
  LabelId source_;
  std::vector<std::vector<Arc>> children_;
  std::vector<std::vector<Arc>> parents_;
};

/// Merges parallel edges and assigns each (parent, child) pair the weight
/// multiplicity / (total incoming multiplicity of child), exactly.
std::vector<ExactEdge> normalize_exact(std::span<const EdgeMultiplicity> edges);

/// normalize_exact() followed by conversion to a double-weighted graph.
LabelGraph normalize(std::vector<Label> labels, LabelId source,
                     std::span<const EdgeMultiplicity> edges);

std::vector<LabelId> end_labels(const LabelGraph& graph);

}  // namespace dagmf

template <>
struct std::hash<dagmf::LabelId> {
  std::size_t operator()(dagmf::LabelId id) const noexcept {
    return std::hash<std::int32_t>{}(id.value);
  }
};
