#pragma once

#include <array>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

namespace dagmf {

/// Unit-spaced 1-3 dimensional voxel grid. Linear indices are row-major: the
/// last axis varies fastest.
class Lattice {
 public:
  static constexpr int kMaxRank = 3;

  Lattice() : Lattice({1}) {}
  Lattice(std::initializer_list<int> dims);
  explicit Lattice(std::span<const int> dims);

  [[nodiscard]] int rank() const noexcept { return rank_; }
  [[nodiscard]] int extent(int axis) const noexcept { return extents_[axis]; }
  /// Extents padded with 1 up to three axes.
  [[nodiscard]] const std::array<int, kMaxRank>& extents() const noexcept { return extents_; }
  [[nodiscard]] std::size_t stride(int axis) const noexcept { return strides_[axis]; }
  [[nodiscard]] std::size_t size() const noexcept { return size_; }

  bool operator==(const Lattice& other) const noexcept { return extents_ == other.extents_ && rank_ == other.rank_; }

 private:
  void init(std::span<const int> dims);

  int rank_ = 1;
  std::array<int, kMaxRank> extents_{1, 1, 1};
  std::array<std::size_t, kMaxRank> strides_{1, 1, 1};
  std::size_t size_ = 1;
};

/// One real value per voxel; values are finite on construction.
class ScalarField {
 public:
  ScalarField() = default;
  explicit ScalarField(const Lattice& lattice, double value = 0.0);
  ScalarField(const Lattice& lattice, std::vector<double> values);

  [[nodiscard]] const Lattice& lattice() const noexcept { return lattice_; }
  [[nodiscard]] std::size_t size() const noexcept { return values_.size(); }
  [[nodiscard]] std::span<const double> values() const noexcept { return values_; }
  [[nodiscard]] std::span<double> values() noexcept { return values_; }
  [[nodiscard]] double* data() noexcept { return values_.data(); }
  [[nodiscard]] const double* data() const noexcept { return values_.data(); }

  double operator[](std::size_t i) const noexcept { return values_[i]; }
  double& operator[](std::size_t i) noexcept { return values_[i]; }

  bool operator==(const ScalarField&) const = default;

 private:
  Lattice lattice_;
  std::vector<double> values_;
};

/// One component field per lattice axis.
class VectorField {
 public:
  VectorField() = default;
  explicit VectorField(const Lattice& lattice);

  [[nodiscard]] const Lattice& lattice() const noexcept { return lattice_; }
  [[nodiscard]] int rank() const noexcept { return lattice_.rank(); }
  [[nodiscard]] std::span<const double> component(int axis) const noexcept { return components_[axis]; }
  [[nodiscard]] std::span<double> component(int axis) noexcept { return components_[axis]; }
  [[nodiscard]] double* data(int axis) noexcept { return components_[axis].data(); }
  [[nodiscard]] const double* data(int axis) const noexcept { return components_[axis].data(); }

  [[nodiscard]] double magnitude(std::size_t voxel) const noexcept;

  bool operator==(const VectorField&) const = default;

 private:
  Lattice lattice_;
  std::array<std::vector<double>, Lattice::kMaxRank> components_;
};

}  // namespace dagmf
