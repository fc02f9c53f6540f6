#include "fractrace/grid.hpp"

#include <cmath>
#include <sstream>

#include "fractrace/errors.hpp"

namespace fractrace {

BoxGrid::BoxGrid(std::vector<std::size_t> sizes, std::vector<double> lengths)
    : sizes_(std::move(sizes)), lengths_(std::move(lengths)) {
  if (sizes_.empty() || sizes_.size() > static_cast<std::size_t>(kMaxDim)) {
    throw DomainError("BoxGrid: dimension must be 1, 2 or 3");
  }
  if (sizes_.size() != lengths_.size()) {
    throw DomainError("BoxGrid: sizes and lengths differ in dimension");
  }
  total_ = 1;
  for (std::size_t j = 0; j < sizes_.size(); ++j) {
    if (sizes_[j] < 2 || sizes_[j] % 2 != 0) {
      throw DomainError("BoxGrid: every axis needs an even sample count >= 2");
    }
    if (!(lengths_[j] > 0.0) || !std::isfinite(lengths_[j])) {
      throw DomainError("BoxGrid: box lengths must be finite and > 0");
    }
    total_ *= sizes_[j];
  }
  std::size_t stride = 1;
  for (int j = dim() - 1; j >= 0; --j) {
    strides_[j] = stride;
    stride *= sizes_[j];
  }
}

BoxGrid BoxGrid::cube(int dim, std::size_t n, double length) {
  if (dim < 1 || dim > kMaxDim) throw DomainError("BoxGrid: dimension must be 1, 2 or 3");
  return BoxGrid(std::vector<std::size_t>(dim, n), std::vector<double>(dim, length));
}

double BoxGrid::cell_volume() const {
  double v = 1.0;
  for (int j = 0; j < dim(); ++j) v *= spacing(j);
  return v;
}

double BoxGrid::freq_cell_volume() const {
  double v = 1.0;
  for (double l : lengths_) v /= l;
  return v;
}

double BoxGrid::volume() const {
  double v = 1.0;
  for (double l : lengths_) v *= l;
  return v;
}

double BoxGrid::coordinate(int axis, std::size_t i) const {
  return -0.5 * lengths_[axis] + spacing(axis) * static_cast<double>(i);
}

long BoxGrid::signed_index(int axis, std::size_t i) const {
  const auto n = static_cast<long>(sizes_[axis]);
  const auto s = static_cast<long>(i);
  return s < n / 2 ? s : s - n;
}

double BoxGrid::frequency(int axis, std::size_t i) const {
  return static_cast<double>(signed_index(axis, i)) / lengths_[axis];
}

std::size_t BoxGrid::storage_index(int axis, long s) const {
  const auto n = static_cast<long>(sizes_[axis]);
  long r = s % n;
  if (r < 0) r += n;
  return static_cast<std::size_t>(r);
}

BoxGrid::Index BoxGrid::unflatten(std::size_t flat) const {
  Index idx{};
  for (int j = 0; j < dim(); ++j) {
    idx[j] = flat / strides_[j];
    flat -= idx[j] * strides_[j];
  }
  return idx;
}

std::size_t BoxGrid::flatten(const Index& idx) const {
  std::size_t flat = 0;
  for (int j = 0; j < dim(); ++j) flat += idx[j] * strides_[j];
  return flat;
}

BoxGrid::Point BoxGrid::point(std::size_t flat) const {
  const auto idx = unflatten(flat);
  Point p{};
  for (int j = 0; j < dim(); ++j) p[j] = coordinate(j, idx[j]);
  return p;
}

BoxGrid::Point BoxGrid::wavevector(std::size_t flat) const {
  const auto idx = unflatten(flat);
  Point k{};
  for (int j = 0; j < dim(); ++j) k[j] = frequency(j, idx[j]);
  return k;
}

double BoxGrid::wavevector_norm_sq(std::size_t flat) const {
  const auto k = wavevector(flat);
  double s = 0.0;
  for (int j = 0; j < dim(); ++j) s += k[j] * k[j];
  return s;
}

BoxGrid BoxGrid::leading_axes(int d) const {
  if (d < 1 || d > dim()) throw DomainError("BoxGrid::leading_axes: bad dimension");
  return BoxGrid(std::vector<std::size_t>(sizes_.begin(), sizes_.begin() + d),
                 std::vector<double>(lengths_.begin(), lengths_.begin() + d));
}

std::string BoxGrid::summary() const {
  std::ostringstream os;
  os << "L=[";
  for (int j = 0; j < dim(); ++j) os << (j ? "," : "") << lengths_[j];
  os << "] N=[";
  for (int j = 0; j < dim(); ++j) os << (j ? "," : "") << sizes_[j];
  os << "]";
  return os.str();
}

}  // namespace fractrace
