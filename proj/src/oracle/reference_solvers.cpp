#include "dagmf/oracle/reference_solvers.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

#include "dagmf/error.hpp"

namespace dagmf::oracle {

namespace {

/// Plain coordinate-walking grid helper for the reference solvers.
struct Grid {
  explicit Grid(const Lattice& lat) : n(lat.size()) {
    for (int a = 0; a < 3; ++a) ext[a] = lat.extent(a);
    step = {static_cast<std::size_t>(ext[1]) * ext[2], static_cast<std::size_t>(ext[2]), 1};
  }

  int coord(std::size_t x, int a) const { return static_cast<int>((x / step[a]) % ext[a]); }

  void grad(const std::vector<double>& f, std::size_t x, std::array<double, 3>& out) const {
    for (int a = 0; a < 3; ++a) out[a] = coord(x, a) + 1 < ext[a] ? f[x + step[a]] - f[x] : 0.0;
  }

  void div(const std::array<std::vector<double>, 3>& q, std::vector<double>& out) const {
    for (std::size_t x = 0; x < n; ++x) {
      double d = 0.0;
      for (int a = 0; a < 3; ++a) {
        const int c = coord(x, a);
        if (c + 1 < ext[a]) d += q[a][x];
        if (c > 0) d -= q[a][x - step[a]];
      }
      out[x] = d;
    }
  }

  /// q <- Proj_{|q| <= cap}(q + tau * grad g).
  void ascend(std::array<std::vector<double>, 3>& q, const std::vector<double>& g,
              const std::vector<double>& cap, double tau) const {
    std::array<double, 3> gr{};
    for (std::size_t x = 0; x < n; ++x) {
      grad(g, x, gr);
      double m2 = 0.0;
      for (int a = 0; a < 3; ++a) {
        q[a][x] += tau * gr[a];
        m2 += q[a][x] * q[a][x];
      }
      if (m2 > cap[x] * cap[x]) {
        const double s = cap[x] / std::sqrt(m2);
        for (int a = 0; a < 3; ++a) q[a][x] *= s;
      }
    }
  }

  std::size_t n;
  std::array<int, 3> ext{};
  std::array<std::size_t, 3> step{};
};

using Flow = std::array<std::vector<double>, 3>;

Flow zero_flow(std::size_t n) { return {std::vector<double>(n), std::vector<double>(n), std::vector<double>(n)}; }

void require_shapes(const Lattice& lat, const std::vector<std::vector<double>>& fields, const char* what) {
  for (const auto& f : fields) {
    if (f.size() != lat.size()) throw ProblemError(std::string(what) + " field size mismatch");
  }
}

}  // namespace

double weighted_tv(const Lattice& lattice, const std::vector<double>& f, const std::vector<double>& weight) {
  Grid grid(lattice);
  std::array<double, 3> gr{};
  double total = 0.0;
  for (std::size_t x = 0; x < grid.n; ++x) {
    grid.grad(f, x, gr);
    total += weight[x] * std::sqrt(gr[0] * gr[0] + gr[1] * gr[1] + gr[2] * gr[2]);
  }
  return total;
}

ReferenceResult potts_max_flow(const Lattice& lattice, const std::vector<std::vector<double>>& data,
                               const std::vector<std::vector<double>>& smoothness,
                               const ReferenceParams& params) {
  const std::size_t labels = data.size();
  if (labels == 0 || smoothness.size() != labels) throw ProblemError("potts: label count mismatch");
  require_shapes(lattice, data, "potts data");
  require_shapes(lattice, smoothness, "potts smoothness");

  Grid grid(lattice);
  const std::size_t n = grid.n;
  const double c = params.c;

  std::vector<double> ps(n, std::numeric_limits<double>::infinity());
  for (std::size_t i = 0; i < labels; ++i) {
    for (std::size_t x = 0; x < n; ++x) ps[x] = std::min(ps[x], data[i][x]);
  }
  std::vector<std::vector<double>> pt(labels, ps);
  std::vector<std::vector<double>> u(labels, std::vector<double>(n, 0.0));
  for (std::size_t x = 0; x < n; ++x) {
    for (std::size_t i = 0; i < labels; ++i) {
      if (data[i][x] == ps[x]) {
        u[i][x] = 1.0;
        break;
      }
    }
  }
  std::vector<Flow> q(labels, zero_flow(n));
  std::vector<std::vector<double>> dv(labels, std::vector<double>(n, 0.0));
  std::vector<double> g(n);

  ReferenceResult out;
  for (int it = 1; it <= params.max_iters; ++it) {
    for (std::size_t i = 0; i < labels; ++i) {
      for (std::size_t x = 0; x < n; ++x) g[x] = dv[i][x] - ps[x] + pt[i][x] - u[i][x] / c;
      grid.ascend(q[i], g, smoothness[i], params.tau);
      grid.div(q[i], dv[i]);
    }
    for (std::size_t x = 0; x < n; ++x) {
      double acc = 1.0 / c;
      for (std::size_t i = 0; i < labels; ++i) acc += pt[i][x] + dv[i][x] - u[i][x] / c;
      ps[x] = acc / static_cast<double>(labels);
    }
    double residual = 0.0;
    for (std::size_t i = 0; i < labels; ++i) {
      for (std::size_t x = 0; x < n; ++x) {
        pt[i][x] = std::min(data[i][x], ps[x] - dv[i][x] + u[i][x] / c);
        const double r = dv[i][x] - ps[x] + pt[i][x];
        u[i][x] -= c * r;
        residual = std::max(residual, std::abs(r));
      }
    }
    out.iterations = it;
    out.residual = residual;
    if (residual <= params.tol) {
      out.converged = true;
      break;
    }
  }

  for (std::size_t i = 0; i < labels; ++i) {
    for (std::size_t x = 0; x < n; ++x) out.energy += data[i][x] * u[i][x];
    out.energy += weighted_tv(lattice, u[i], smoothness[i]);
  }
  for (double v : ps) out.dual += v;
  out.u = std::move(u);
  return out;
}

ReferenceResult ishikawa_max_flow(const Lattice& lattice, const std::vector<std::vector<double>>& data,
                                  const std::vector<std::vector<double>>& level_smoothness,
                                  const ReferenceParams& params) {
  const std::size_t labels = data.size();
  if (labels < 2 || level_smoothness.size() != labels - 1) {
    throw ProblemError("ishikawa: need n >= 2 labels and n - 1 level fields");
  }
  require_shapes(lattice, data, "ishikawa data");
  require_shapes(lattice, level_smoothness, "ishikawa smoothness");

  Grid grid(lattice);
  const std::size_t n = grid.n;
  const double c = params.c;
  const std::size_t levels = labels - 1;  // level k in 1..n-1 stored at k-1

  std::vector<double> floor(n, std::numeric_limits<double>::infinity());
  std::vector<std::size_t> best(n, 0);
  for (std::size_t j = 0; j < labels; ++j) {
    for (std::size_t x = 0; x < n; ++x) {
      if (data[j][x] < floor[x]) {
        floor[x] = data[j][x];
        best[x] = j;
      }
    }
  }
  std::vector<std::vector<double>> p(labels, floor);
  std::vector<std::vector<double>> lambda(levels, std::vector<double>(n, 0.0));
  for (std::size_t k = 1; k <= levels; ++k) {
    for (std::size_t x = 0; x < n; ++x) lambda[k - 1][x] = best[x] >= k ? 1.0 : 0.0;
  }
  std::vector<Flow> q(levels, zero_flow(n));
  std::vector<std::vector<double>> dv(levels, std::vector<double>(n, 0.0));
  std::vector<double> g(n);

  auto lam = [&](std::size_t k, std::size_t x) {
    if (k == 0) return 1.0;
    if (k == labels) return 0.0;
    return lambda[k - 1][x];
  };

  ReferenceResult out;
  for (int it = 1; it <= params.max_iters; ++it) {
    for (std::size_t k = 1; k <= levels; ++k) {
      for (std::size_t x = 0; x < n; ++x) {
        g[x] = dv[k - 1][x] - p[k - 1][x] + p[k][x] - lambda[k - 1][x] / c;
      }
      grid.ascend(q[k - 1], g, level_smoothness[k - 1], params.tau);
      grid.div(q[k - 1], dv[k - 1]);
    }
    for (std::size_t j = 0; j < labels; ++j) {
      for (std::size_t x = 0; x < n; ++x) {
        double acc = (lam(j, x) - lam(j + 1, x)) / c;
        double m = 0.0;
        if (j >= 1) {
          acc += p[j - 1][x] - dv[j - 1][x];
          m += 1.0;
        }
        if (j + 1 < labels) {
          acc += dv[j][x] + p[j + 1][x];
          m += 1.0;
        }
        p[j][x] = std::min(data[j][x], acc / m);
      }
    }
    double residual = 0.0;
    for (std::size_t k = 1; k <= levels; ++k) {
      for (std::size_t x = 0; x < n; ++x) {
        const double r = dv[k - 1][x] - p[k - 1][x] + p[k][x];
        lambda[k - 1][x] -= c * r;
        residual = std::max(residual, std::abs(r));
      }
    }
    out.iterations = it;
    out.residual = residual;
    if (residual <= params.tol) {
      out.converged = true;
      break;
    }
  }

  out.u.assign(labels, std::vector<double>(n, 0.0));
  for (std::size_t j = 0; j < labels; ++j) {
    for (std::size_t x = 0; x < n; ++x) {
      out.u[j][x] = lam(j, x) - lam(j + 1, x);
      out.energy += data[j][x] * out.u[j][x];
    }
  }
  for (std::size_t k = 1; k <= levels; ++k) out.energy += weighted_tv(lattice, lambda[k - 1], level_smoothness[k - 1]);
  for (double v : p[0]) out.dual += v;
  return out;
}

}  // namespace dagmf::oracle
