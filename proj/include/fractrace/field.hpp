#pragma once

#include <complex>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <span>
#include <vector>

#include "fractrace/constants.hpp"
#include "fractrace/grid.hpp"

namespace fractrace {

using Complex = std::complex<double>;

enum class View : std::uint8_t { physical, frequency };

const char* to_string(View v);

/// Samples of a function on a BoxGrid, either at the physical lattice or as
/// coefficients on the dual frequency lattice.
///
/// The two views are linked by the continuum convention
///   fhat(k) = int f(x) exp(-2 pi i x.k) dx
/// discretized as fhat(k) = dx * sum_j f(x_j) exp(-2 pi i x_j.k), which is exact
/// for lattice characters.  Values are immutable; transforms return new fields.
class SpectralField {
 public:
  SpectralField(BoxGrid grid, std::vector<Complex> values, View view);

  /// Samples fn at every physical lattice point.
  static SpectralField sample(const BoxGrid& grid,
                              const std::function<Complex(const BoxGrid::Point&)>& fn);
  /// Evaluates fn at every frequency lattice point (frequency view).
  static SpectralField from_coefficients(
      const BoxGrid& grid, const std::function<Complex(const BoxGrid::Point&)>& fn);
  static SpectralField zeros(const BoxGrid& grid, View view);

  const BoxGrid& grid() const { return grid_; }
  View view() const { return view_; }
  std::span<const Complex> values() const { return values_; }
  const Complex& operator[](std::size_t i) const { return values_[i]; }
  std::size_t size() const { return values_.size(); }

  SpectralField scaled(Complex c) const;
  /// Same view, values v[i] -> fn(i, v[i]).
  SpectralField mapped(const std::function<Complex(std::size_t, Complex)>& fn) const;
  /// Pointwise sum of two fields on the same grid and view.
  SpectralField plus(const SpectralField& other, Complex weight = 1.0) const;

  /// max |Im v| <= tol * max |v| (physical view only).
  bool is_real(double tol = 1e-12) const;
  double max_abs() const;

 private:
  BoxGrid grid_;
  std::vector<Complex> values_;
  View view_;
};

/// Physical -> frequency view.  Throws DomainError when already in frequency view.
SpectralField forward_ft(const SpectralField& f);
/// Frequency -> physical view.  Throws DomainError when already physical.
SpectralField inverse_ft(const SpectralField& f);
/// Returns f itself or its transform, whichever is in the requested view.
SpectralField in_view(const SpectralField& f, View view);

/// dk * sum_k |fhat(k)|^2 |2 pi k|^{2 alpha}.  At alpha = 0 the k = 0 term is
/// |fhat(0)|^2; for alpha > 0 it contributes nothing.  Accepts either view.
double dalpha_norm_sq(const SpectralField& f, double alpha);

/// (dx * sum_j |f(x_j)|^p)^{1/p}, p >= 1.  Accepts either view.
double lp_norm(const SpectralField& f, double p);

/// dx * sum |f|^2 on the physical lattice.
double l2_norm_sq_physical(const SpectralField& f);
/// dk * sum |fhat|^2 on the frequency lattice.
double l2_norm_sq_frequency(const SpectralField& f);

/// 2n/(n - 2 alpha) for m = 0, and the trace target exponent
/// 2(n - m)/(n - 2 alpha) for m >= 1.
double sobolev_exponent(const FracIndex& idx);

// Snapshot I/O.  The CSV format is
//   # fractrace-field v1
//   # view=<physical|frequency>
//   # sizes=N0[,N1[,N2]]
//   # lengths=L0[,L1[,L2]]
//   index,re,im
//   <flat index>,<re>,<im>     (one row per sample, %.17g, row-major order)
// The binary format is the 8-byte magic "FTFIELD1", then uint32 view
// (0 physical, 1 frequency), uint32 dim, dim x uint64 sizes, dim x float64
// lengths, and total x (float64 re, float64 im), all in host byte order.
/// Deterministic real band-limited random field: Fourier coefficients are
/// independent complex normals (from a 64-bit Mersenne twister seeded with
/// `seed`, Box-Muller by hand so the stream does not depend on the standard
/// library) on modes with every |signed index| < band_fraction * N_j / 2,
/// Hermitian-symmetrised; zero elsewhere and at k = 0.  Physical view.
SpectralField random_field(const BoxGrid& grid, std::uint64_t seed, double band_fraction = 0.25);

/// Enforces conj-symmetry fhat(-k) = conj(fhat(k)) by averaging, so the
/// physical field is real.  Frequency view in and out.
SpectralField hermitian_projection(const SpectralField& fh);

void write_csv(const SpectralField& f, std::ostream& out);
SpectralField read_csv(std::istream& in);
void write_binary(const SpectralField& f, std::ostream& out);
SpectralField read_binary(std::istream& in);

}  // namespace fractrace
