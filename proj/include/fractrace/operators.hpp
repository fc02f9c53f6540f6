#pragma once

#include <vector>

#include "fractrace/field.hpp"

namespace fractrace {

/// (-Delta)^alpha as the multiplier (2 pi |k|)^{2 alpha}; result in frequency view.
SpectralField frac_laplacian(const SpectralField& f, double alpha);

/// Multiplier |k|^{-2 alpha} with the k = 0 coefficient set to 0 (frequency
/// view).  Requires 0 < alpha < n/2.  Only the non-zero modes of g are
/// inverted, so callers should pass mean-zero data or accept the lost mode.
SpectralField riesz_potential(const SpectralField& g, double alpha);

/// dk * sum_k conj(fhat) (2 pi |k|)^{2 alpha} fhat, the complex-valued
/// quadratic form (f, (-Delta)^alpha f).  The imaginary part is round-off.
Complex laplacian_quadratic_form(const SpectralField& f, double alpha);

/// dk * sum_{k != 0} |ghat(k)|^2 / |k|^{2 alpha}.
double riesz_fourier_energy(const SpectralField& g, double alpha);

/// int_cell |z|^{-p} dz over the axis-aligned cell [-h_j/2, h_j/2]^d centred
/// at the origin, 0 < p < d.  Uses the divergence identity
/// (d - p) |z|^{-p} = div(z |z|^{-p}), reducing it to smooth face integrals.
double cell_singular_integral(const std::vector<double>& spacings, double p);

/// Periodic kernel table in DFT storage order for |z|^{-p}, p = n - 2 alpha,
/// under the minimum-image convention.  Off-diagonal entries are the cell
/// average of |z|^{-p} to second order (midpoint value plus the h^2/24
/// curvature term); the diagonal entry is the exact cell average.
std::vector<double> riesz_kernel_table(const BoxGrid& grid, double alpha);

/// dx^2 sum_x sum_y conj(g(x)) g(y) K(x - y) with the kernel table above,
/// evaluated as a circular convolution by FFT (identical to the direct double
/// sum up to round-off; deterministic).  Real part of the Hermitian form.
double riesz_double_sum(const SpectralField& g, double alpha);

struct RieszEquivalence {
  double fourier_side = 0.0;   // dk sum |ghat|^2 / |k|^{2 alpha}
  double physical_side = 0.0;  // prefactor * riesz_double_sum
  double residual = 0.0;       // |lhs - rhs| / |lhs|
};

/// Compares the two sides of the Fourier/real-space identity for the Riesz
/// energy.  Throws DegenerateInputError when the Fourier side is not positive.
RieszEquivalence riesz_equivalence(const SpectralField& g, double alpha);
inline double riesz_equivalence_check(const SpectralField& g, double alpha) {
  return riesz_equivalence(g, alpha).residual;
}

/// Source and target grids of tau_m: the target keeps the first n - m axes.
struct TraceSlice {
  BoxGrid source_grid;
  BoxGrid target_grid;
  int m = 0;

  static TraceSlice make(const BoxGrid& source, int m);
};

/// Samples f(x_1, ..., x_{n-m}, 0, ..., 0); x = 0 is always a lattice point.
/// Returns a physical-view field on the target grid.
SpectralField trace_physical(const SpectralField& f, int m);

/// ghat(k1) = dk2 * sum_{k2} fhat(k1, k2) over the traced frequency axes;
/// frequency-view field on the target grid.
SpectralField trace_fourier(const SpectralField& f, int m);

}  // namespace fractrace
