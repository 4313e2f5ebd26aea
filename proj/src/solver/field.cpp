#include "dagmf/solver/field.hpp"

#include <cmath>
#include <string>

#include "dagmf/error.hpp"

namespace dagmf {

Lattice::Lattice(std::initializer_list<int> dims) {
  std::vector<int> v(dims);
  init(v);
}

Lattice::Lattice(std::span<const int> dims) { init(dims); }

void Lattice::init(std::span<const int> dims) {
  if (dims.empty() || dims.size() > kMaxRank) {
    throw ProblemError("lattice rank must be 1-3, got " + std::to_string(dims.size()));
  }
  rank_ = static_cast<int>(dims.size());
  extents_ = {1, 1, 1};
  for (int a = 0; a < rank_; ++a) {
    if (dims[a] < 1) throw ProblemError("lattice extents must be positive");
    extents_[a] = dims[a];
  }
  size_ = 1;
  for (int a = kMaxRank - 1; a >= 0; --a) {
    strides_[a] = size_;
    size_ *= static_cast<std::size_t>(extents_[a]);
  }
}

namespace {

void require_finite(std::span<const double> values) {
  for (double v : values) {
    if (!std::isfinite(v)) throw ProblemError("field contains a non-finite value");
  }
}

}  // namespace

ScalarField::ScalarField(const Lattice& lattice, double value)
    : lattice_(lattice), values_(lattice.size(), value) {
  require_finite(std::span(&value, 1));
}

ScalarField::ScalarField(const Lattice& lattice, std::vector<double> values)
    : lattice_(lattice), values_(std::move(values)) {
  if (values_.size() != lattice_.size()) {
    throw ProblemError("field has " + std::to_string(values_.size()) + " values for a lattice of " +
                       std::to_string(lattice_.size()) + " voxels");
  }
  require_finite(values_);
}

VectorField::VectorField(const Lattice& lattice) : lattice_(lattice) {
  for (int a = 0; a < lattice.rank(); ++a) components_[a].assign(lattice.size(), 0.0);
}

double VectorField::magnitude(std::size_t voxel) const noexcept {
  double s = 0.0;
  for (int a = 0; a < rank(); ++a) s += components_[a][voxel] * components_[a][voxel];
  return std::sqrt(s);
}

}  // namespace dagmf
