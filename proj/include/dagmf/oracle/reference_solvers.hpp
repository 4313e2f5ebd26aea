#pragma once

#include <vector>

#include "dagmf/solver/field.hpp"

namespace dagmf::oracle {

/// Stand-alone continuous max-flow solvers for the two classical special
/// cases. They share no code with the DAG solver and serve as its reference.
struct ReferenceParams {
  double c = 0.25;
  double tau = 0.1;
  double tol = 1e-7;
  int max_iters = 50000;
};

struct ReferenceResult {
  /// One field per label, in input order.
  std::vector<std::vector<double>> u;
  double energy = 0.0;
  double dual = 0.0;
  double residual = 0.0;
  int iterations = 0;
  bool converged = false;
};

/// Convex-relaxed Potts model: sum_i D_i u_i + alpha_i |grad u_i| with
/// u_i >= 0 and sum_i u_i = 1.
ReferenceResult potts_max_flow(const Lattice& lattice, const std::vector<std::vector<double>>& data,
                               const std::vector<std::vector<double>>& smoothness,
                               const ReferenceParams& params = {});

/// Ishikawa layered model over ordered labels 0..n-1: with level functions
/// lambda_k = [label >= k], minimizes sum_k D_k (lambda_k - lambda_{k+1})
/// + sum_{k>=1} alpha_k |grad lambda_k|. `level_smoothness` holds alpha_1 ..
/// alpha_{n-1}. Result u holds the per-label indicators differenced from the
/// levels.
ReferenceResult ishikawa_max_flow(const Lattice& lattice, const std::vector<std::vector<double>>& data,
                                  const std::vector<std::vector<double>>& level_smoothness,
                                  const ReferenceParams& params = {});

/// Total variation sum_x w(x) |grad f(x)| with forward differences.
double weighted_tv(const Lattice& lattice, const std::vector<double>& f, const std::vector<double>& weight);

}  // namespace dagmf::oracle
