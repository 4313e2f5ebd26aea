#pragma once

#include <cstddef>
#include <functional>
#include <map>
#include <optional>
#include <utility>
#include <vector>

#include "dagmf/solver/field.hpp"
#include "dagmf/solver/problem.hpp"

namespace dagmf {

struct SolverParams {
  double c = 0.25;    // augmented-Lagrangian penalty
  double tau = 0.1;   // spatial-flow ascent step, at most 1 / (2 * rank)
  double tol = 1e-4;  // on max |G_L|
  int max_iters = 5000;
  int check_interval = 10;
  /// Voxel ranges processed concurrently inside each kernel. The partition
  /// is a pure function of the lattice size and this count.
  int workers = 1;
};

void validate_params(const SolverParams& params, const Lattice& lattice);

/// Per-label layout of the iteration, in topological order (source first).
struct LabelSlot {
  LabelId id;
  bool source = false;
  bool leaf = false;
  std::vector<std::pair<std::size_t, double>> parents;   // (slot, weight)
  std::vector<std::pair<std::size_t, double>> children;  // (slot, weight)
  /// 1 / (1 + sum of squared child weights), or 1 / sum for the source.
  double child_weight_scale = 1.0;
};

/// All per-label fields of the primal-dual iteration.
///
/// Buffers that a label does not use are left empty: the source has no u, q,
/// rho or divergence; end labels have no sigma.
struct SolverState {
  Lattice lattice;
  std::vector<LabelSlot> slots;
  std::map<LabelId, std::size_t> slot_of;

  std::vector<std::optional<ScalarField>> u;
  std::vector<ScalarField> p;
  std::vector<std::optional<VectorField>> q;
  std::vector<std::optional<ScalarField>> div_q;  // divergence of q, cached
  std::vector<std::optional<ScalarField>> rho;    // sum over parents of w * p_parent
  std::vector<std::optional<ScalarField>> sigma;  // flow-update numerators

  [[nodiscard]] std::size_t slot(LabelId id) const;
  [[nodiscard]] const ScalarField& multiplier(LabelId id) const;
  [[nodiscard]] const ScalarField& flow(LabelId id) const { return p[slot(id)]; }
  [[nodiscard]] const VectorField& spatial_flow(LabelId id) const;
  [[nodiscard]] const ScalarField& parent_flow(LabelId id) const;
};

/// Optimal state for zero smoothness: every flow set to the per-voxel minimum
/// data term, end-label multipliers to the (tie-split) argmin indicator and
/// internal multipliers accumulated from their children.
SolverState init_solution(const ProblemSpec& problem, const SolverParams& params);

/// One sweep of the flow maximization: spatial flows by projected ascent,
/// then the parent-flow accumulation in topological order, then sink,
/// intermediate and source flows in reverse order.
void update_flows(SolverState& state, const ProblemSpec& problem, const SolverParams& params);

/// u_L -= c * G_L for every non-source label; returns max |G_L|.
double update_multipliers(SolverState& state, const ProblemSpec& problem, const SolverParams& params);

/// max over labels and voxels of |div q_L + p_L - rho_L| for the state as is.
double conservation_residual(const SolverState& state);

/// max over labels and voxels of |q_L| - smoothness_L (<= 0 when feasible).
double flow_excess(const SolverState& state, const ProblemSpec& problem);

/// Sum of the source flow.
double dual_value(const SolverState& state);

using Labeling = std::map<LabelId, ScalarField>;

struct ConstraintViolation {
  double negativity = 0.0;   // max of -u_L
  double consistency = 0.0;  // max |u_L - sum_children w u_child| on internal labels
  double simplex = 0.0;      // max |sum over source children of w u - 1|

  [[nodiscard]] double max() const;
};

ConstraintViolation constraint_violation(const Labeling& u, const ProblemSpec& problem);

/// Data plus boundary energy of a labeling over every non-source label.
/// Throws ProblemError when any constraint is violated by more than 10 * tol.
double energy(const Labeling& u, const ProblemSpec& problem, double tol = 1e-4);

/// Internal labels recomputed from the end labels, bottom-up.
Labeling complete_labeling(const std::map<LabelId, ScalarField>& end_label_u, const ProblemSpec& problem);

/// Per-voxel argmax over end labels, ties to the lowest id.
std::vector<LabelId> hard_labeling(const Labeling& u, const ProblemSpec& problem);

struct IterationRecord {
  int iteration = 0;
  double residual = 0.0;
  double primal = 0.0;
  double dual = 0.0;
};

using DiagnosticSink = std::function<void(const IterationRecord&)>;

struct SolveReport {
  int iterations = 0;
  double residual = 0.0;
  double primal = 0.0;
  double dual = 0.0;
  double gap = 0.0;
  bool converged = false;
  double max_flow_excess = 0.0;
  ConstraintViolation violation;
  double wall_seconds = 0.0;
};

struct SolveResult {
  /// Every non-source label: end labels clamped to [0, 1], internal labels
  /// accumulated from the clamped end labels.
  Labeling labeling;
  SolveReport report;
  SolverState state;
};

/// Runs the iteration until the conservation residual drops to params.tol
/// (checked every check_interval iterations) or max_iters is reached.
/// The sink, when set, is called at every check from a single thread.
SolveResult solve(const ProblemSpec& problem, const SolverParams& params,
                  const DiagnosticSink& sink = {});

}  // namespace dagmf
