#pragma once

#include <map>
#include <string>

namespace fractrace {

/// The (n, m, alpha) triple indexing one inequality instance.
///
/// n is the ambient dimension, m the codimension of the trace hyperplane and
/// alpha the order of the fractional Laplacian.  Two admissibility regimes
/// exist:
///   - trace:    1 <= m < n and m/2 < alpha < n/2
///   - sobolev:  m = 0 and 0 <= alpha < n/2
/// Construction through the named factories enforces these.
struct FracIndex {
  int n = 1;
  int m = 0;
  double alpha = 0.0;

  /// m = 0 instance; throws DomainError unless 0 <= alpha < n/2.
  static FracIndex sobolev(int n, double alpha);
  /// m >= 1 instance; throws DomainError unless 1 <= m < n, m/2 < alpha < n/2.
  static FracIndex trace(int n, int m, double alpha);
  /// Dispatches on m.
  static FracIndex make(int n, int m, double alpha);

  bool is_trace() const { return m >= 1; }
  /// Retained dimension n - m.
  int retained_dim() const { return n - m; }

  friend bool operator==(const FracIndex&, const FracIndex&) = default;
};

std::string to_string(const FracIndex& idx);

/// Sharp constant of the gradient trace inequality on the half space, n >= 3.
double escobar_constant(int n);

/// S(n, alpha): ||f||_s^2 <= S ||f||_{D_alpha}^2 with s = 2n/(n - 2 alpha).
double sobolev_constant(int n, double alpha);

/// Sharp Hardy-Littlewood-Sobolev constant for the kernel |x-y|^{-(n-2 alpha)}
/// and exponent r = 2n/(n + 2 alpha), 0 < alpha < n/2.
double hls_constant(int n, double alpha);

/// T(m, alpha): ||tau_m f||^2_{D_{alpha-m/2}} <= T ||f||^2_{D_alpha}.
double trace_constant(int m, double alpha);

/// C_{m,alpha,n} of the trace-Sobolev inequality (squared norms on both sides).
double composed_constant(const FracIndex& idx);

/// Constant of the weighted-extension inequality, 0 < alpha < 1,
/// alpha < (n-1)/2.
double xiao_constant(int n, double alpha);

/// pi^{2 alpha - n/2} Gamma(n/2 - alpha) / Gamma(alpha): the Fourier multiplier
/// |k|^{-2 alpha} written as a convolution kernel coefficient for
/// |x|^{-(n - 2 alpha)}.
double riesz_kernel_prefactor(int n, double alpha);

/// Every constant defined at idx plus residuals of the identities that link
/// them.  Constants that are undefined at idx hold NaN.
struct ConstantsRecord {
  FracIndex idx;
  double escobar = 0.0;
  double sobolev = 0.0;
  double hls = 0.0;
  double trace = 0.0;
  double composed = 0.0;
  double xiao = 0.0;
  std::map<std::string, double> identity_residuals;

  /// Largest residual, 0 when none applies.
  double max_residual() const;
};

ConstantsRecord evaluate_constants(const FracIndex& idx);

/// |a - b| / max(|a|, |b|).
double relative_residual(double a, double b);

}  // namespace fractrace
