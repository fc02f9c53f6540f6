#pragma once

#include <complex>
#include <cstddef>
#include <vector>

namespace fractrace::detail {

/// Unnormalized in-place multi-dimensional DFT, row-major layout.
/// sign = -1 computes sum_j x_j exp(-2 pi i j m / N), sign = +1 the inverse.
void dft_inplace(std::vector<std::complex<double>>& data,
                 const std::vector<std::size_t>& sizes, int sign);

}  // namespace fractrace::detail
