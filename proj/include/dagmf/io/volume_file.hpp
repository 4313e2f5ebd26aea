#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "dagmf/solver/field.hpp"

namespace dagmf::io {

/// Binary label volume:
///   "DAGMF1" | u32 dims[3] | u32 field count | i32 label id per field |
///   f32 payload, field-major, row-major within a field.
/// All integers and floats little-endian; unused dims are 1.
struct Volume {
  std::array<std::uint32_t, 3> dims{1, 1, 1};
  std::vector<std::int32_t> label_ids;
  std::vector<std::vector<float>> fields;

  [[nodiscard]] std::size_t voxels() const noexcept {
    return static_cast<std::size_t>(dims[0]) * dims[1] * dims[2];
  }

  bool operator==(const Volume&) const = default;
};

inline constexpr std::array<char, 6> kVolumeMagic{'D', 'A', 'G', 'M', 'F', '1'};

/// Label id stored for the single field of an argmax volume.
inline constexpr std::int32_t kArgmaxFieldId = -1;

std::vector<std::uint8_t> encode_volume(const Volume& volume);
Volume decode_volume(std::span<const std::uint8_t> bytes);

Volume read_volume(const std::filesystem::path& path);
void write_volume(const std::filesystem::path& path, const Volume& volume);

/// Lattice with trailing unit dims dropped (rank at least 1).
Lattice lattice_of(const Volume& volume);
Volume volume_for(const Lattice& lattice);

}  // namespace dagmf::io
