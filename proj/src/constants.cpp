#include "fractrace/constants.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "fractrace/errors.hpp"
#include "fractrace/specfun.hpp"

namespace fractrace {

using specfun::log_gamma;

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

[[noreturn]] void domain_fail(const std::string& what) { throw DomainError(what); }

// ln of {Gamma(d) / Gamma(d/2)}^{power}.
double log_conformal_factor(double d, double power) {
  return power * (log_gamma(d) - log_gamma(0.5 * d));
}

}  // namespace

FracIndex FracIndex::sobolev(int n, double alpha) {
  if (n < 1) domain_fail("FracIndex: n must be >= 1");
  if (!std::isfinite(alpha) || alpha < 0.0 || alpha >= 0.5 * n) {
    std::ostringstream os;
    os << "FracIndex: Sobolev order requires 0 <= alpha < n/2, got n=" << n
       << " alpha=" << alpha;
    domain_fail(os.str());
  }
  return FracIndex{n, 0, alpha};
}

FracIndex FracIndex::trace(int n, int m, double alpha) {
  if (n < 2) domain_fail("FracIndex: trace requires n >= 2");
  if (m < 1 || m >= n) domain_fail("FracIndex: trace requires 1 <= m < n");
  if (!std::isfinite(alpha) || alpha <= 0.5 * m || alpha >= 0.5 * n) {
    std::ostringstream os;
    os << "FracIndex: trace requires m/2 < alpha < n/2, got n=" << n << " m=" << m
       << " alpha=" << alpha;
    domain_fail(os.str());
  }
  return FracIndex{n, m, alpha};
}

FracIndex FracIndex::make(int n, int m, double alpha) {
  return m == 0 ? sobolev(n, alpha) : trace(n, m, alpha);
}

std::string to_string(const FracIndex& idx) {
  std::ostringstream os;
  os << "(n=" << idx.n << ", m=" << idx.m << ", alpha=" << idx.alpha << ")";
  return os.str();
}

double escobar_constant(int n) {
  if (n < 3) domain_fail("escobar_constant: requires n >= 3");
  const double d = n - 1;
  return std::exp(log_conformal_factor(d, 1.0 / d)) / (std::sqrt(kPi) * (n - 2));
}

double sobolev_constant(int n, double alpha) {
  if (n < 1 || !(alpha >= 0.0) || alpha >= 0.5 * n) {
    domain_fail("sobolev_constant: requires 0 <= alpha < n/2");
  }
  const double half = 0.5 * n;
  const double log_c = -2.0 * alpha * std::log(2.0) - alpha * std::log(kPi) +
                       log_gamma(half - alpha) - log_gamma(half + alpha) +
                       log_conformal_factor(n, 2.0 * alpha / n);
  return std::exp(log_c);
}

double hls_constant(int n, double alpha) {
  if (n < 1 || !(alpha > 0.0) || alpha >= 0.5 * n) {
    domain_fail("hls_constant: requires 0 < alpha < n/2");
  }
  const double half = 0.5 * n;
  const double log_c = (half - alpha) * std::log(kPi) + log_gamma(alpha) -
                       log_gamma(half + alpha) + log_conformal_factor(n, 2.0 * alpha / n);
  return std::exp(log_c);
}

double trace_constant(int m, double alpha) {
  if (m < 1) domain_fail("trace_constant: requires m >= 1");
  if (!(alpha > 0.5 * m) || !std::isfinite(alpha)) {
    domain_fail("trace_constant: requires alpha > m/2");
  }
  const double log_c = -m * std::log(2.0) - 0.5 * m * std::log(kPi) +
                       log_gamma(alpha - 0.5 * m) - log_gamma(alpha);
  return std::exp(log_c);
}

double composed_constant(const FracIndex& idx) {
  const auto checked = FracIndex::trace(idx.n, idx.m, idx.alpha);
  const int n = checked.n;
  const int m = checked.m;
  const double a = checked.alpha;
  const double d = n - m;
  const double log_c = -2.0 * a * std::log(2.0) - a * std::log(kPi) +
                       log_gamma(0.5 * n - a) + log_gamma(a - 0.5 * m) - log_gamma(a) -
                       log_gamma(0.5 * n + a - m) +
                       log_conformal_factor(d, (2.0 * a - m) / d);
  return std::exp(log_c);
}

double xiao_constant(int n, double alpha) {
  if (n < 2) domain_fail("xiao_constant: requires n >= 2");
  const double half = 0.5 * (n - 1);
  if (!(alpha > 0.0) || !(alpha < 1.0) || !(alpha < half)) {
    domain_fail("xiao_constant: requires 0 < alpha < 1 and alpha < (n-1)/2");
  }
  const double log_c = (1.0 - 4.0 * alpha) * std::log(2.0) - alpha * std::log(kPi) -
                       log_gamma(2.0 - 2.0 * alpha) + log_gamma(half - alpha) -
                       log_gamma(half + alpha) +
                       log_conformal_factor(n - 1, 2.0 * alpha / (n - 1));
  return std::exp(log_c);
}

double riesz_kernel_prefactor(int n, double alpha) {
  if (n < 1 || !(alpha > 0.0) || alpha >= 0.5 * n) {
    domain_fail("riesz_kernel_prefactor: requires 0 < alpha < n/2");
  }
  return std::exp((2.0 * alpha - 0.5 * n) * std::log(kPi) + log_gamma(0.5 * n - alpha) -
                  log_gamma(alpha));
}

double relative_residual(double a, double b) {
  const double scale = std::max(std::abs(a), std::abs(b));
  if (scale == 0.0) return 0.0;
  return std::abs(a - b) / scale;
}

double ConstantsRecord::max_residual() const {
  double worst = 0.0;
  for (const auto& [name, r] : identity_residuals) {
    // NaN must not hide as "small"
    if (!(r <= worst)) worst = r;
  }
  return worst;
}

ConstantsRecord evaluate_constants(const FracIndex& idx) {
  const auto checked = FracIndex::make(idx.n, idx.m, idx.alpha);
  const int n = checked.n;
  const int m = checked.m;
  const double a = checked.alpha;

  ConstantsRecord rec;
  rec.idx = checked;
  rec.escobar = n >= 3 ? escobar_constant(n) : kNaN;
  rec.sobolev = sobolev_constant(n, a);
  rec.hls = a > 0.0 ? hls_constant(n, a) : kNaN;
  rec.trace = m >= 1 ? trace_constant(m, a) : kNaN;
  rec.composed = m >= 1 ? composed_constant(checked) : kNaN;
  const bool xiao_ok = n >= 2 && a > 0.0 && a < 1.0 && a < 0.5 * (n - 1);
  rec.xiao = xiao_ok ? xiao_constant(n, a) : kNaN;

  auto& res = rec.identity_residuals;
  if (m >= 1) {
    res["composition"] =
        relative_residual(rec.composed, rec.trace * sobolev_constant(n - m, a - 0.5 * m));
  }
  if (m >= 2) {
    res["trace_iteration"] = relative_residual(
        rec.trace, trace_constant(1, a) * trace_constant(m - 1, a - 0.5));
  }
  if (m == 1 && a == 1.0 && n >= 3) {
    res["escobar_half"] = relative_residual(2.0 * rec.composed, rec.escobar);
  }
  if (xiao_ok) {
    const double factor = std::pow(2.0, 2.0 * a - 1.0) * specfun::gamma(2.0 - 2.0 * a);
    res["xiao_reduction"] = relative_residual(rec.xiao * factor, sobolev_constant(n - 1, a));
  }
  if (a > 0.0) {
    // Duality: S = (2 pi)^{-2 alpha} * riesz prefactor * HLS constant.
    const double dual =
        std::pow(2.0 * kPi, -2.0 * a) * riesz_kernel_prefactor(n, a) * rec.hls;
    res["sobolev_hls_duality"] = relative_residual(rec.sobolev, dual);
  }
  return rec;
}

}  // namespace fractrace
