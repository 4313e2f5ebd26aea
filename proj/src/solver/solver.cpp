#include "dagmf/solver/solver.hpp"

#include <algorithm>
#include <array>
#include <barrier>
#include <chrono>
#include <cmath>
#include <exception>
#include <limits>
#include <string>
#include <thread>

#include "dagmf/dag/topo_sort.hpp"
#include "dagmf/error.hpp"
#include "stencil.hpp"

namespace dagmf {

void validate_params(const SolverParams& params, const Lattice& lattice) {
  if (!(params.c > 0.0)) throw ProblemError("penalty c must be positive");
  if (!(params.tau > 0.0)) throw ProblemError("step tau must be positive");
  if (!(params.tol > 0.0)) throw ProblemError("tolerance must be positive");
  if (params.max_iters < 1) throw ProblemError("max_iters must be at least 1");
  if (params.check_interval < 1) throw ProblemError("check_interval must be at least 1");
  if (params.workers < 1) throw ProblemError("workers must be at least 1");
  int active_axes = 0;
  for (int a = 0; a < lattice.rank(); ++a) active_axes += lattice.extent(a) > 1 ? 1 : 0;
  const double bound = 1.0 / (2.0 * std::max(active_axes, 1));
  if (params.tau > bound) {
    throw ProblemError("step tau " + std::to_string(params.tau) + " exceeds 1/(2*dims) = " +
                       std::to_string(bound));
  }
}

std::size_t SolverState::slot(LabelId id) const {
  auto it = slot_of.find(id);
  if (it == slot_of.end()) throw GraphError("unknown label id " + std::to_string(id.value));
  return it->second;
}

const ScalarField& SolverState::multiplier(LabelId id) const {
  const auto& f = u[slot(id)];
  if (!f) throw GraphError("the source has no multiplier");
  return *f;
}

const VectorField& SolverState::spatial_flow(LabelId id) const {
  const auto& f = q[slot(id)];
  if (!f) throw GraphError("the source has no spatial flow");
  return *f;
}

const ScalarField& SolverState::parent_flow(LabelId id) const {
  const auto& f = rho[slot(id)];
  if (!f) throw GraphError("the source has no parent flow");
  return *f;
}

namespace {

SolverState allocate_state(const ProblemSpec& problem) {
  const auto& g = problem.graph;
  const auto topo = topo_sort(g);

  SolverState s;
  s.lattice = problem.lattice;
  for (std::size_t i = 0; i < topo.order.size(); ++i) s.slot_of[topo.order[i]] = i;

  const std::size_t n = topo.order.size();
  s.slots.resize(n);
  s.u.resize(n);
  s.p.resize(n);
  s.q.resize(n);
  s.div_q.resize(n);
  s.rho.resize(n);
  s.sigma.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    LabelId id = topo.order[i];
    auto& slot = s.slots[i];
    slot.id = id;
    slot.source = id == g.source();
    slot.leaf = g.is_end_label(id);
    for (const auto& arc : g.parents(id)) slot.parents.emplace_back(s.slot_of.at(arc.other), arc.weight);
    double sq = 0.0;
    for (const auto& arc : g.children(id)) {
      slot.children.emplace_back(s.slot_of.at(arc.other), arc.weight);
      sq += arc.weight * arc.weight;
    }
    slot.child_weight_scale = slot.source ? 1.0 / sq : 1.0 / (1.0 + sq);

    s.p[i] = ScalarField(problem.lattice);
    if (!slot.source) {
      s.u[i] = ScalarField(problem.lattice);
      s.q[i] = VectorField(problem.lattice);
      s.div_q[i] = ScalarField(problem.lattice);
      s.rho[i] = ScalarField(problem.lattice);
    }
    if (!slot.leaf) s.sigma[i] = ScalarField(problem.lattice);
  }
  return s;
}

/// Raw views of a state and problem shared by every kernel. Kernels touch
/// only voxels in [begin, end) on write; stencil reads of neighbouring voxels
/// are confined to buffers that the current phase does not write.
class Kernels {
 public:
  Kernels(SolverState& s, const ProblemSpec& problem, const SolverParams& params)
      : state_(s),
        lattice_(s.lattice),
        masks_(detail::neighbour_masks(s.lattice)),
        c_(params.c),
        inv_c_(1.0 / params.c),
        tau_(params.tau) {
    const std::size_t n = s.slots.size();
    views_.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
      auto& v = views_[i];
      const auto& slot = s.slots[i];
      v.p = s.p[i].data();
      if (!slot.source) {
        v.u = s.u[i]->data();
        v.div = s.div_q[i]->data();
        v.rho = s.rho[i]->data();
        for (int a = 0; a < lattice_.rank(); ++a) v.q[a] = s.q[i]->data(a);
        if (auto it = problem.smoothness.find(slot.id); it != problem.smoothness.end()) {
          v.cap = it->second.data();
        }
      }
      if (!slot.leaf) v.sigma = s.sigma[i]->data();
      if (slot.leaf) v.data = problem.data.at(slot.id).data();
    }
  }

  /// Projected ascent of every spatial flow. Reads div, p, rho and u at
  /// neighbouring voxels; writes q.
  void spatial_flows(std::size_t begin, std::size_t end) {
    const int rank = lattice_.rank();
    for (std::size_t i = 0; i < views_.size(); ++i) {
      const auto& v = views_[i];
      if (state_.slots[i].source || v.cap == nullptr) continue;
      for (std::size_t x = begin; x < end; ++x) {
        const std::uint8_t m = masks_[x];
        const double gx = excess(v, x);
        double norm2 = 0.0;
        for (int a = 0; a < rank; ++a) {
          double& qa = v.q[a][x];
          if (detail::has_next(m, a)) {
            qa += tau_ * (excess(v, x + lattice_.stride(a)) - gx);
          } else {
            qa = 0.0;
          }
          norm2 += qa * qa;
        }
        const double cap = v.cap[x];
        if (norm2 > cap * cap) {
          const double scale = cap / std::sqrt(norm2);
          for (int a = 0; a < rank; ++a) v.q[a][x] *= scale;
        }
      }
    }
  }

  /// Divergence refresh, then the two label sweeps. Purely per voxel apart
  /// from the divergence stencil, which reads q only.
  void sink_flows(std::size_t begin, std::size_t end) {
    const auto& slots = state_.slots;
    const std::size_t n = slots.size();
    for (std::size_t i = 0; i < n; ++i) {
      if (slots[i].source) continue;
      auto& v = views_[i];
      const double* comps[Lattice::kMaxRank] = {v.q[0], v.q[1], v.q[2]};
      for (std::size_t x = begin; x < end; ++x) {
        v.div[x] = detail::divergence_at(comps, lattice_.rank(), lattice_, x, masks_[x]);
      }
    }

    for (std::size_t x = begin; x < end; ++x) {
      // Parents before children: rebuild rho and seed sigma.
      for (std::size_t i = 0; i < n; ++i) {
        if (!slots[i].source) views_[i].rho[x] = 0.0;
      }
      for (std::size_t i = 0; i < n; ++i) {
        const auto& slot = slots[i];
        auto& v = views_[i];
        for (const auto& [child, w] : slot.children) views_[child].rho[x] += w * v.p[x];
        if (slot.source) {
          v.sigma[x] = inv_c_;
        } else if (!slot.leaf) {
          v.sigma[x] = v.rho[x] - v.div[x] + v.u[x] * inv_c_;
        }
      }

      // Children before parents: maximize each flow with the others fixed.
      for (std::size_t k = n; k-- > 0;) {
        const auto& slot = slots[k];
        auto& v = views_[k];
        if (slot.leaf) {
          v.p[x] = std::min(v.data[x], v.rho[x] - v.div[x] + v.u[x] * inv_c_);
          continue;
        }
        const double old = v.p[x];
        double s = v.sigma[x];
        for (const auto& [child, w] : slot.children) {
          const auto& cv = views_[child];
          const double other_parents = cv.rho[x] - w * old;
          s += w * (cv.div[x] + cv.p[x] - other_parents - cv.u[x] * inv_c_);
        }
        v.sigma[x] = s;
        const double updated = s * slot.child_weight_scale;
        for (const auto& [child, w] : slot.children) views_[child].rho[x] += w * (updated - old);
        v.p[x] = updated;
      }
    }
  }

  /// Multiplier step; returns max |G_L| over the range.
  double multipliers(std::size_t begin, std::size_t end) {
    double residual = 0.0;
    for (std::size_t i = 0; i < views_.size(); ++i) {
      if (state_.slots[i].source) continue;
      auto& v = views_[i];
      for (std::size_t x = begin; x < end; ++x) {
        const double g = v.div[x] + v.p[x] - v.rho[x];
        v.u[x] -= c_ * g;
        residual = std::max(residual, std::abs(g));
      }
    }
    return residual;
  }

 private:
  struct View {
    double* u = nullptr;
    double* p = nullptr;
    double* q[Lattice::kMaxRank] = {nullptr, nullptr, nullptr};
    double* div = nullptr;
    double* rho = nullptr;
    double* sigma = nullptr;
    const double* data = nullptr;
    const double* cap = nullptr;
  };

  double excess(const View& v, std::size_t x) const {
    return v.div[x] + v.p[x] - v.rho[x] - v.u[x] * inv_c_;
  }

  SolverState& state_;
  const Lattice& lattice_;
  std::vector<std::uint8_t> masks_;
  std::vector<View> views_;
  double c_;
  double inv_c_;
  double tau_;
};

double max_violation(const ConstraintViolation& v) {
  return std::max({v.negativity, v.consistency, v.simplex});
}

double energy_unchecked(const Labeling& u, const ProblemSpec& problem) {
  const auto& g = problem.graph;
  const auto masks = detail::neighbour_masks(problem.lattice);
  const Lattice& lat = problem.lattice;
  double total = 0.0;
  for (const auto& l : g.labels()) {
    if (l.id == g.source()) continue;
    const ScalarField& ul = u.at(l.id);
    if (auto it = problem.data.find(l.id); it != problem.data.end()) {
      for (std::size_t x = 0; x < lat.size(); ++x) total += it->second[x] * ul[x];
    }
    if (auto it = problem.smoothness.find(l.id); it != problem.smoothness.end()) {
      for (std::size_t x = 0; x < lat.size(); ++x) {
        double n2 = 0.0;
        for (int a = 0; a < lat.rank(); ++a) {
          const double d = detail::forward_diff(ul.data(), x, lat.stride(a), masks[x], a);
          n2 += d * d;
        }
        total += it->second[x] * std::sqrt(n2);
      }
    }
  }
  return total;
}

std::vector<std::pair<std::size_t, std::size_t>> partition(std::size_t n, int workers) {
  std::vector<std::pair<std::size_t, std::size_t>> ranges;
  const auto w = static_cast<std::size_t>(workers);
  std::size_t begin = 0;
  for (std::size_t k = 0; k < w; ++k) {
    const std::size_t len = n / w + (k < n % w ? 1 : 0);
    ranges.emplace_back(begin, begin + len);
    begin += len;
  }
  return ranges;
}

std::map<LabelId, ScalarField> raw_end_labels(const SolverState& state, const ProblemSpec& problem) {
  std::map<LabelId, ScalarField> out;
  for (LabelId id : problem.graph.end_labels()) out.emplace(id, state.multiplier(id));
  return out;
}

}  // namespace

SolverState init_solution(const ProblemSpec& problem, const SolverParams& params) {
  validate_problem(problem);
  validate_params(params, problem.lattice);
  SolverState s = allocate_state(problem);
  const auto& g = problem.graph;
  const auto ends = g.end_labels();
  const std::size_t voxels = problem.lattice.size();

  std::vector<double> min_data(voxels, std::numeric_limits<double>::infinity());
  std::vector<int> ties(voxels, 0);
  for (LabelId id : ends) {
    const auto& d = problem.data.at(id);
    for (std::size_t x = 0; x < voxels; ++x) {
      if (d[x] < min_data[x]) {
        min_data[x] = d[x];
        ties[x] = 1;
      } else if (d[x] == min_data[x]) {
        ++ties[x];
      }
    }
  }

  for (std::size_t k = s.slots.size(); k-- > 0;) {
    const auto& slot = s.slots[k];
    for (std::size_t x = 0; x < voxels; ++x) s.p[k][x] = min_data[x];
    if (slot.source) continue;
    auto& rho = *s.rho[k];
    for (std::size_t x = 0; x < voxels; ++x) rho[x] = min_data[x];
    auto& u = *s.u[k];
    if (slot.leaf) {
      const auto& d = problem.data.at(slot.id);
      for (std::size_t x = 0; x < voxels; ++x) u[x] = d[x] == min_data[x] ? 1.0 / ties[x] : 0.0;
    }
    for (const auto& [parent, w] : slot.parents) {
      if (s.slots[parent].source) continue;
      auto& up = *s.u[parent];
      for (std::size_t x = 0; x < voxels; ++x) up[x] += w * u[x];
    }
  }
  return s;
}

void update_flows(SolverState& state, const ProblemSpec& problem, const SolverParams& params) {
  Kernels k(state, problem, params);
  k.spatial_flows(0, state.lattice.size());
  k.sink_flows(0, state.lattice.size());
}

double update_multipliers(SolverState& state, const ProblemSpec& problem, const SolverParams& params) {
  Kernels k(state, problem, params);
  return k.multipliers(0, state.lattice.size());
}

double conservation_residual(const SolverState& state) {
  double r = 0.0;
  for (std::size_t i = 0; i < state.slots.size(); ++i) {
    if (state.slots[i].source) continue;
    const auto& d = *state.div_q[i];
    const auto& rho = *state.rho[i];
    for (std::size_t x = 0; x < state.lattice.size(); ++x) {
      r = std::max(r, std::abs(d[x] + state.p[i][x] - rho[x]));
    }
  }
  return r;
}

double flow_excess(const SolverState& state, const ProblemSpec& problem) {
  double worst = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < state.slots.size(); ++i) {
    if (state.slots[i].source) continue;
    const auto it = problem.smoothness.find(state.slots[i].id);
    const auto& q = *state.q[i];
    for (std::size_t x = 0; x < state.lattice.size(); ++x) {
      const double cap = it == problem.smoothness.end() ? 0.0 : it->second[x];
      worst = std::max(worst, q.magnitude(x) - cap);
    }
  }
  return worst;
}

double dual_value(const SolverState& state) {
  const auto& ps = state.p[0];
  double total = 0.0;
  for (double v : ps.values()) total += v;
  return total;
}

double ConstraintViolation::max() const { return max_violation(*this); }

ConstraintViolation constraint_violation(const Labeling& u, const ProblemSpec& problem) {
  const auto& g = problem.graph;
  const std::size_t voxels = problem.lattice.size();
  ConstraintViolation v;
  for (const auto& l : g.labels()) {
    if (l.id == g.source()) continue;
    const auto& ul = u.at(l.id);
    for (std::size_t x = 0; x < voxels; ++x) v.negativity = std::max(v.negativity, -ul[x]);
  }
  for (const auto& l : g.labels()) {
    auto kids = g.children(l.id);
    if (kids.empty()) continue;
    const ScalarField* ul = l.id == g.source() ? nullptr : &u.at(l.id);
    for (std::size_t x = 0; x < voxels; ++x) {
      double acc = 0.0;
      for (const auto& arc : kids) acc += arc.weight * u.at(arc.other)[x];
      if (ul == nullptr) {
        v.simplex = std::max(v.simplex, std::abs(acc - 1.0));
      } else {
        v.consistency = std::max(v.consistency, std::abs((*ul)[x] - acc));
      }
    }
  }
  return v;
}

double energy(const Labeling& u, const ProblemSpec& problem, double tol) {
  const auto v = constraint_violation(u, problem);
  if (v.max() > 10.0 * tol) {
    throw ProblemError("labeling violates its constraints by " + std::to_string(v.max()));
  }
  return energy_unchecked(u, problem);
}

Labeling complete_labeling(const std::map<LabelId, ScalarField>& end_label_u, const ProblemSpec& problem) {
  const auto& g = problem.graph;
  const auto topo = topo_sort(g);
  Labeling out;
  for (LabelId id : topo.inverse) {
    if (id == g.source()) continue;
    auto kids = g.children(id);
    if (kids.empty()) {
      auto it = end_label_u.find(id);
      if (it == end_label_u.end()) {
        throw ProblemError("labeling lacks end label id " + std::to_string(id.value));
      }
      out.emplace(id, it->second);
      continue;
    }
    ScalarField acc(problem.lattice);
    for (const auto& arc : kids) {
      const auto& uc = out.at(arc.other);
      for (std::size_t x = 0; x < acc.size(); ++x) acc[x] += arc.weight * uc[x];
    }
    out.emplace(id, std::move(acc));
  }
  return out;
}

std::vector<LabelId> hard_labeling(const Labeling& u, const ProblemSpec& problem) {
  const auto ends = problem.graph.end_labels();
  std::vector<LabelId> out(problem.lattice.size(), ends.front());
  std::vector<double> best(problem.lattice.size(), -std::numeric_limits<double>::infinity());
  for (LabelId id : ends) {
    const auto& ul = u.at(id);
    for (std::size_t x = 0; x < out.size(); ++x) {
      if (ul[x] > best[x]) {
        best[x] = ul[x];
        out[x] = id;
      }
    }
  }
  return out;
}

SolveResult solve(const ProblemSpec& problem, const SolverParams& params, const DiagnosticSink& sink) {
  const auto start = std::chrono::steady_clock::now();
  SolveResult result{{}, {}, init_solution(problem, params)};
  SolverState& state = result.state;
  Kernels kernels(state, problem, params);

  const auto ranges = partition(state.lattice.size(), params.workers);
  std::vector<double> worker_residual(ranges.size(), 0.0);
  int iteration = 0;
  double residual = std::numeric_limits<double>::infinity();
  bool converged = false;
  bool stop = false;
  std::exception_ptr failure;

  // Runs on exactly one thread between iterations.
  auto end_of_iteration = [&]() noexcept {
    ++iteration;
    residual = *std::max_element(worker_residual.begin(), worker_residual.end());
    const bool check = iteration % params.check_interval == 0 || iteration >= params.max_iters;
    if (check) {
      if (sink) {
        try {
          const auto u = complete_labeling(raw_end_labels(state, problem), problem);
          sink({iteration, residual, energy_unchecked(u, problem), dual_value(state)});
        } catch (...) {
          failure = std::current_exception();
          stop = true;
        }
      }
      if (residual <= params.tol) {
        converged = true;
        stop = true;
      }
    }
    if (iteration >= params.max_iters) stop = true;
  };

  if (ranges.size() == 1) {
    while (!stop) {
      kernels.spatial_flows(0, state.lattice.size());
      kernels.sink_flows(0, state.lattice.size());
      worker_residual[0] = kernels.multipliers(0, state.lattice.size());
      end_of_iteration();
    }
  } else {
    const auto count = static_cast<std::ptrdiff_t>(ranges.size());
    std::barrier flows_done(count);
    std::barrier iteration_done(count, end_of_iteration);
    auto work = [&](std::size_t w) {
      const auto [begin, end] = ranges[w];
      while (!stop) {
        kernels.spatial_flows(begin, end);
        flows_done.arrive_and_wait();
        kernels.sink_flows(begin, end);
        worker_residual[w] = kernels.multipliers(begin, end);
        iteration_done.arrive_and_wait();
      }
    };
    {
      std::vector<std::jthread> pool;
      for (std::size_t w = 1; w < ranges.size(); ++w) pool.emplace_back(work, w);
      work(0);
    }
  }
  if (failure) std::rethrow_exception(failure);

  auto raw = complete_labeling(raw_end_labels(state, problem), problem);
  auto& report = result.report;
  report.iterations = iteration;
  report.residual = residual;
  report.converged = converged;
  report.primal = energy_unchecked(raw, problem);
  report.dual = dual_value(state);
  report.gap = report.primal - report.dual;
  report.max_flow_excess = flow_excess(state, problem);
  report.violation = constraint_violation(raw, problem);

  std::map<LabelId, ScalarField> clamped;
  for (LabelId id : problem.graph.end_labels()) {
    ScalarField f = state.multiplier(id);
    for (double& v : f.values()) v = std::clamp(v, 0.0, 1.0);
    clamped.emplace(id, std::move(f));
  }
  result.labeling = complete_labeling(clamped, problem);
  report.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return result;
}

}  // namespace dagmf
