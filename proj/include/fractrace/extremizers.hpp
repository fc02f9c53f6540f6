#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "fractrace/field.hpp"

namespace fractrace {

enum class Family { sobolev, hls, trace, escobar };

const char* to_string(Family f);

/// Parameters of one member of a conformal extremizer family: amplitude A,
/// scale gamma != 0 and centre a.  The centre lives in R^n for the Sobolev and
/// HLS families and in the retained R^{n-m} for the trace and Escobar families.
struct ExtremizerSpec {
  Family family = Family::sobolev;
  Complex amplitude{1.0, 0.0};
  double gamma = 1.0;
  std::vector<double> center;
  FracIndex idx;

  /// Validates gamma != 0, the centre dimension and the index regime
  /// (m = 0 for sobolev/hls, m >= 1 for trace, m = 1 and alpha = 1 for escobar).
  static ExtremizerSpec make(Family family, const FracIndex& idx, double gamma,
                             std::vector<double> center = {}, Complex amplitude = 1.0);

  /// Dimension of the centre vector.
  int center_dim() const;
};

/// A (gamma^2 + |x - a|^2)^{-(n - 2 alpha)/2}
Complex sobolev_extremizer(const ExtremizerSpec& spec, std::span<const double> x);

/// A (gamma^2 + |x - a|^2)^{-(n + 2 alpha)/2}
Complex hls_extremizer(const ExtremizerSpec& spec, std::span<const double> x);

/// Whole-space form of the half-space gradient optimizer:
/// A ((|gamma| + |t|)^2 + |x1 - a|^2)^{-(n-2)/2}, x1 in R^{n-1}, t in R.
Complex escobar_extremizer(const ExtremizerSpec& spec, std::span<const double> x1, double t);

struct QuadratureOptions {
  double rel_tol = 1e-10;
};

/// int_{R^d} (x2sq + |x - y|^2)^{-p/2} (gamma^2 + |y|^2)^{-q/2} dy for d = 1, 2,
/// where `x` is already measured from the bubble centre.  Requires p < d when
/// x2sq = 0 and p + q > d.  Double-exponential quadrature on segments split at
/// the kernel singularity and around the bubble; tails are integrated to
/// infinity.  Throws NumericalError when the error estimate misses rel_tol by
/// more than a factor 100.
double bubble_potential(int d, double p, double q, double gamma, std::span<const double> x,
                        double x2sq, const QuadratureOptions& opts = {});

/// Trace-family optimizer: the integral over y in R^{n-m} of
/// (|x2|^2 + |x1 - y|^2)^{-(n - 2 alpha)/2} (gamma^2 + |y - a|^2)^{-(n + 2 alpha - 2m)/2}
/// times A.  Supports n - m in {1, 2}.
double trace_extremizer(const ExtremizerSpec& spec, std::span<const double> x1,
                        std::span<const double> x2, const QuadratureOptions& opts = {});

/// int_{R^n} g(y) |x - y|^{-(n - 2 alpha)} dy for the HLS optimizer g of spec
/// (n <= 2), divided by g(x)^{r - 1} with r = 2n/(n + 2 alpha).  Constant in x
/// exactly when g solves the Euler-Lagrange equation.
double hls_euler_lagrange_ratio(const ExtremizerSpec& spec, std::span<const double> x,
                                const QuadratureOptions& opts = {});

/// The proportionality constant that equality in the sharp HLS inequality
/// forces on the ratio above: H(n, alpha) * ||g||_r^{2 - r}, with ||g||_r from
/// the closed form of int (gamma^2 + |x|^2)^{-n} dx.
double hls_euler_lagrange_prediction(const ExtremizerSpec& spec);

/// Samples spec (sobolev, hls, escobar or trace family) on every lattice point.
/// Trace-family sampling evaluates each reflection class of the lattice once.
SpectralField sample_extremizer(const ExtremizerSpec& spec, const BoxGrid& grid,
                                const QuadratureOptions& opts = {});

/// Level-set truncation of a non-negative field: f -> max(f - c, 0) with
/// c = max{ f(x_j) : |x_j - center| >= radius }.  The result is a continuous
/// function supported in the ball of that radius, so periodic images do not
/// overlap when radius <= L/4.
struct Truncated {
  SpectralField field;
  double level = 0.0;
  double radius = 0.0;
};
Truncated truncate_to_level_set(const SpectralField& f, std::span<const double> center,
                                double radius);

/// Lattice version of the trace-equality family: coefficients
/// ghat(k1) / (|k1|^2 + |k2|^2)^alpha, with ghat the transform of the HLS
/// optimizer of order alpha - m/2 in dimension n - m sampled on the retained
/// grid.
class FourierTraceExtremizer {
 public:
  FourierTraceExtremizer(const FracIndex& idx, double gamma, std::vector<double> center,
                         const BoxGrid& retained_grid);

  /// ghat(k1) / (|k1|^2 + |k2|^2)^alpha for the k1 storage index of the
  /// retained grid; returns 0 at k = 0.
  Complex value(std::size_t k1_index, std::span<const double> k2) const;

  const SpectralField& ghat() const { return ghat_; }
  const FracIndex& idx() const { return idx_; }

  /// Frequency-view field on `grid` (whose leading axes must equal the
  /// retained grid).  With drop_zero_row the whole k1 = 0 row is zeroed,
  /// i.e. ghat is replaced by its mean-zero projection; that row is invisible
  /// to the trace norm on the lattice but not to ||f||_{D_alpha}.
  SpectralField lattice_field(const BoxGrid& grid, bool drop_zero_row = true) const;

 private:
  FracIndex idx_;
  double gamma_;
  std::vector<double> center_;
  SpectralField ghat_;
};

}  // namespace fractrace
