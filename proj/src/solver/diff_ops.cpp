#include "dagmf/solver/diff_ops.hpp"

#include <cmath>

#include "dagmf/error.hpp"
#include "stencil.hpp"

namespace dagmf {

VectorField gradient(const ScalarField& u) {
  const Lattice& lat = u.lattice();
  VectorField g(lat);
  const auto masks = detail::neighbour_masks(lat);
  for (int a = 0; a < lat.rank(); ++a) {
    double* out = g.data(a);
    for (std::size_t x = 0; x < lat.size(); ++x) {
      out[x] = detail::forward_diff(u.data(), x, lat.stride(a), masks[x], a);
    }
  }
  return g;
}

ScalarField divergence(const VectorField& q) {
  const Lattice& lat = q.lattice();
  const auto masks = detail::neighbour_masks(lat);
  std::array<const double*, Lattice::kMaxRank> comps{};
  for (int a = 0; a < lat.rank(); ++a) comps[a] = q.data(a);
  std::vector<double> out(lat.size());
  for (std::size_t x = 0; x < lat.size(); ++x) {
    out[x] = detail::divergence_at(comps.data(), lat.rank(), lat, x, masks[x]);
  }
  return ScalarField(lat, std::move(out));
}

VectorField project_flow(const VectorField& q, const ScalarField& cap) {
  if (!(q.lattice() == cap.lattice())) throw ProblemError("project_flow: lattice mismatch");
  VectorField out = q;
  for (std::size_t x = 0; x < cap.size(); ++x) {
    const double m = q.magnitude(x);
    if (m > cap[x]) {
      const double s = cap[x] / m;
      for (int a = 0; a < q.rank(); ++a) out.data(a)[x] *= s;
    }
  }
  return out;
}

ScalarField magnitude(const VectorField& q) {
  std::vector<double> out(q.lattice().size());
  for (std::size_t x = 0; x < out.size(); ++x) out[x] = q.magnitude(x);
  return ScalarField(q.lattice(), std::move(out));
}

}  // namespace dagmf
