#pragma once

#include <array>
#include <cstddef>
#include <string>
#include <vector>

namespace fractrace {

/// Uniform periodic box [-L_j/2, L_j/2) in 1 to 3 dimensions.
///
/// Axis j carries N_j (even) samples x = -L_j/2 + L_j i / N_j, so i = N_j/2 is
/// the origin.  The dual lattice is stored in standard DFT order: storage index
/// i holds frequency signed_index(i) / L_j with signed_index in
/// [-N_j/2, N_j/2).  Flat storage is row-major (last axis fastest).
class BoxGrid {
 public:
  static constexpr int kMaxDim = 3;
  using Index = std::array<std::size_t, kMaxDim>;
  using Point = std::array<double, kMaxDim>;

  BoxGrid(std::vector<std::size_t> sizes, std::vector<double> lengths);

  /// Cubic box with the same N and L on every axis.
  static BoxGrid cube(int dim, std::size_t n, double length);

  int dim() const { return static_cast<int>(sizes_.size()); }
  std::size_t size(int axis) const { return sizes_[axis]; }
  double length(int axis) const { return lengths_[axis]; }
  const std::vector<std::size_t>& sizes() const { return sizes_; }
  const std::vector<double>& lengths() const { return lengths_; }
  std::size_t total() const { return total_; }

  double spacing(int axis) const { return lengths_[axis] / static_cast<double>(sizes_[axis]); }
  /// prod L_j / N_j
  double cell_volume() const;
  /// prod 1 / L_j
  double freq_cell_volume() const;
  /// prod L_j
  double volume() const;

  double coordinate(int axis, std::size_t i) const;
  /// Signed frequency index in [-N/2, N/2) for storage index i.
  long signed_index(int axis, std::size_t i) const;
  double frequency(int axis, std::size_t i) const;
  /// Storage index holding signed frequency index s (taken modulo N).
  std::size_t storage_index(int axis, long s) const;
  /// Storage index of the sample at the origin on that axis.
  std::size_t origin_index(int axis) const { return sizes_[axis] / 2; }

  Index unflatten(std::size_t flat) const;
  std::size_t flatten(const Index& idx) const;

  /// Physical coordinates of a flat sample index (unused trailing entries 0).
  Point point(std::size_t flat) const;
  /// Frequency vector of a flat storage index.
  Point wavevector(std::size_t flat) const;
  /// |k|^2 of a flat storage index.
  double wavevector_norm_sq(std::size_t flat) const;

  /// Grid on the first `dim` axes of this one.
  BoxGrid leading_axes(int dim) const;

  /// Compact description like "L=[40,40] N=[256,256]".
  std::string summary() const;

  friend bool operator==(const BoxGrid&, const BoxGrid&) = default;

 private:
  std::vector<std::size_t> sizes_;
  std::vector<double> lengths_;
  std::size_t total_ = 0;
  std::array<std::size_t, kMaxDim> strides_{};
};

}  // namespace fractrace
