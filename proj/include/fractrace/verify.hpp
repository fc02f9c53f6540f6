#pragma once

#include <string>
#include <vector>

#include "fractrace/field.hpp"

namespace fractrace {

enum class QuotientKind { sobolev, trace_norm, trace_sobolev, hls };

const char* to_string(QuotientKind k);
/// Accepts both the underscore and the dash spelling ("trace-norm").
QuotientKind parse_quotient_kind(const std::string& s);

/// One measured Rayleigh quotient against its sharp constant.
///
/// tail_budget is an a-posteriori estimate of the discretization error of the
/// ratio, assembled from two power-law bounds: the part of the L^p (or the
/// trace L^p) integral that a |x|^{-decay} tail would place outside the box,
/// and the fraction of the D_alpha energy in the outer frequency shell.
struct RayleighReport {
  QuotientKind kind = QuotientKind::sobolev;
  FracIndex idx;
  std::vector<std::size_t> sizes;
  std::vector<double> lengths;
  std::string grid_summary;
  double numerator = 0.0;
  double denominator = 0.0;
  double quotient = 0.0;
  double sharp_constant = 0.0;
  double ratio = 0.0;
  double tail_budget = 0.0;
  double spatial_tail = 0.0;
  double spectral_tail = 0.0;
  std::vector<std::string> notes;
  double wall_time_ms = 0.0;

  /// ratio <= 1 + tail_budget + slack
  bool within_upper_bound(double slack = 1e-9) const;
};

/// ||f||_s^2 / ||f||_{D_alpha}^2, s = 2n/(n - 2 alpha).
RayleighReport sobolev_quotient(const SpectralField& f, const FracIndex& idx);

/// ||tau_m f||_{D_{alpha - m/2}}^2 / ||f||_{D_alpha}^2 (trace taken in Fourier space).
RayleighReport trace_norm_quotient(const SpectralField& f, const FracIndex& idx);

/// ||tau_m f||_{L^s}^2 / ||f||_{D_alpha}^2, s = 2(n - m)/(n - 2 alpha).
RayleighReport trace_sobolev_quotient(const SpectralField& f, const FracIndex& idx);

/// (dx^2 sum sum g g |x - y|^{-(n - 2 alpha)}) / ||g||_r^2, r = 2n/(n + 2 alpha).
RayleighReport hls_quotient(const SpectralField& g, const FracIndex& idx);

/// Fraction of |f|^p mass a power law |x|^{-decay} would put beyond the box,
/// anchored at the largest sample on the box faces:
///   max_face |f|^p * |S^{d-1}| R^{d - p*decay} / (p*decay - d)  /  dx sum |f|^p
/// with R = min_j L_j / 2.  Returns +inf when p*decay <= d.
double power_law_tail_fraction(const SpectralField& f, double p, double decay);

/// Share of dk sum |fhat|^2 |2 pi k|^{2 alpha} carried by modes with some
/// |signed index| >= N_j / 4.
double spectral_tail_fraction(const SpectralField& f, double alpha);

}  // namespace fractrace
