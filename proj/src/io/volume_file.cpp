#include "dagmf/io/volume_file.hpp"

#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iterator>
#include <string>

#include "dagmf/error.hpp"

namespace dagmf::io {

namespace {

constexpr std::size_t kHeaderFixed = kVolumeMagic.size() + 4 * 3 + 4;

void put_u32(std::vector<std::uint8_t>& out, std::uint32_t v) {
  for (int b = 0; b < 4; ++b) out.push_back(static_cast<std::uint8_t>(v >> (8 * b)));
}

std::uint32_t get_u32(std::span<const std::uint8_t> in, std::size_t at) {
  std::uint32_t v = 0;
  for (int b = 0; b < 4; ++b) v |= static_cast<std::uint32_t>(in[at + b]) << (8 * b);
  return v;
}

}  // namespace

std::vector<std::uint8_t> encode_volume(const Volume& volume) {
  if (volume.label_ids.size() != volume.fields.size()) {
    throw IoError("volume has " + std::to_string(volume.label_ids.size()) + " label ids for " +
                  std::to_string(volume.fields.size()) + " fields");
  }
  const std::size_t n = volume.voxels();
  std::vector<std::uint8_t> out(kVolumeMagic.begin(), kVolumeMagic.end());
  out.reserve(kHeaderFixed + 4 * volume.fields.size() * (n + 1));
  for (auto d : volume.dims) put_u32(out, d);
  put_u32(out, static_cast<std::uint32_t>(volume.fields.size()));
  for (auto id : volume.label_ids) put_u32(out, static_cast<std::uint32_t>(id));
  for (const auto& f : volume.fields) {
    if (f.size() != n) throw IoError("volume field size does not match its dims");
    for (float v : f) {
      if (!std::isfinite(v)) throw IoError("volume field contains a non-finite value");
      put_u32(out, std::bit_cast<std::uint32_t>(v));
    }
  }
  return out;
}

Volume decode_volume(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < kHeaderFixed) {
    throw IoError("malformed header: " + std::to_string(bytes.size()) + " bytes is shorter than the header");
  }
  if (!std::equal(kVolumeMagic.begin(), kVolumeMagic.end(), bytes.begin())) {
    throw IoError("malformed header: bad magic (expected DAGMF1)");
  }
  Volume v;
  std::size_t at = kVolumeMagic.size();
  for (auto& d : v.dims) {
    d = get_u32(bytes, at);
    at += 4;
    if (d == 0) throw IoError("malformed header: zero dimension");
  }
  const std::uint32_t count = get_u32(bytes, at);
  at += 4;
  if (bytes.size() - at < static_cast<std::size_t>(count) * 4) {
    throw IoError("malformed header: label id table truncated");
  }
  for (std::uint32_t i = 0; i < count; ++i, at += 4) {
    v.label_ids.push_back(static_cast<std::int32_t>(get_u32(bytes, at)));
  }
  const std::size_t n = v.voxels();
  const std::size_t expected = static_cast<std::size_t>(count) * n * 4;
  const std::size_t got = bytes.size() - at;
  if (got < expected) {
    throw IoError("truncated payload: expected " + std::to_string(expected) + " bytes, got " +
                  std::to_string(got));
  }
  if (got > expected) {
    throw IoError("malformed payload: " + std::to_string(got - expected) + " trailing bytes");
  }
  v.fields.assign(count, std::vector<float>(n));
  for (auto& f : v.fields) {
    for (auto& value : f) {
      value = std::bit_cast<float>(get_u32(bytes, at));
      at += 4;
      if (!std::isfinite(value)) throw IoError("malformed payload: non-finite value");
    }
  }
  return v;
}

Volume read_volume(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open volume " + path.string());
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  try {
    return decode_volume(bytes);
  } catch (const IoError& e) {
    throw IoError(path.string() + ": " + e.what());
  }
}

void write_volume(const std::filesystem::path& path, const Volume& volume) {
  const auto bytes = encode_volume(volume);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write volume " + path.string());
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw IoError("failed writing volume " + path.string());
}

Lattice lattice_of(const Volume& volume) {
  int rank = 3;
  while (rank > 1 && volume.dims[rank - 1] == 1) --rank;
  std::vector<int> dims;
  for (int a = 0; a < rank; ++a) dims.push_back(static_cast<int>(volume.dims[a]));
  return Lattice(dims);
}

Volume volume_for(const Lattice& lattice) {
  Volume v;
  for (int a = 0; a < lattice.rank(); ++a) v.dims[a] = static_cast<std::uint32_t>(lattice.extent(a));
  return v;
}

}  // namespace dagmf::io
