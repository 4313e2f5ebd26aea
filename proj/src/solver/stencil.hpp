#pragma once

#include <cstdint>
#include <vector>

#include "dagmf/solver/field.hpp"

namespace dagmf::detail {

/// Bit a set: voxel has a successor along axis a. Bit a+3: has a predecessor.
inline std::vector<std::uint8_t> neighbour_masks(const Lattice& lattice) {
  std::vector<std::uint8_t> masks(lattice.size(), 0);
  for (std::size_t x = 0; x < lattice.size(); ++x) {
    std::uint8_t m = 0;
    for (int a = 0; a < lattice.rank(); ++a) {
      const auto coord = static_cast<int>((x / lattice.stride(a)) % lattice.extent(a));
      if (coord + 1 < lattice.extent(a)) m |= std::uint8_t(1u << a);
      if (coord > 0) m |= std::uint8_t(1u << (a + 3));
    }
    masks[x] = m;
  }
  return masks;
}

inline bool has_next(std::uint8_t mask, int axis) { return (mask >> axis) & 1u; }
inline bool has_prev(std::uint8_t mask, int axis) { return (mask >> (axis + 3)) & 1u; }

/// Forward difference of f at x along axis (0 on the last slice).
inline double forward_diff(const double* f, std::size_t x, std::size_t stride,
                           std::uint8_t mask, int axis) {
  return has_next(mask, axis) ? f[x + stride] - f[x] : 0.0;
}

/// Backward-difference divergence at x: sum over axes of q(x) - q(x - e),
/// with q taken as zero on the last slice and outside the domain.
inline double divergence_at(const double* const* q, int rank, const Lattice& lattice,
                            std::size_t x, std::uint8_t mask) {
  double d = 0.0;
  for (int a = 0; a < rank; ++a) {
    const std::size_t s = lattice.stride(a);
    if (has_next(mask, a)) d += q[a][x];
    if (has_prev(mask, a)) d -= q[a][x - s];
  }
  return d;
}

}  // namespace dagmf::detail
