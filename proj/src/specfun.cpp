#include "fractrace/specfun.hpp"

#include <cmath>
#include <string>

#include <boost/math/special_functions/gamma.hpp>

#include "fractrace/errors.hpp"

namespace fractrace::specfun {

namespace {

void require_positive(double x, const char* what) {
  if (!std::isfinite(x) || x <= 0.0) {
    throw DomainError(std::string(what) + ": argument must be finite and > 0, got " +
                      std::to_string(x));
  }
}

}  // namespace

// Boost's Lanczos approximation with rational minimax fits near 1 and 2,
// where ln Gamma crosses zero and relative accuracy is hardest to keep.
double log_gamma(double x) {
  require_positive(x, "log_gamma");
  return boost::math::lgamma(x);
}

double gamma(double x) { return std::exp(log_gamma(x)); }

double gamma_ratio(double a, double b) { return std::exp(log_gamma(a) - log_gamma(b)); }

double log_beta(double a, double b) {
  return log_gamma(a) + log_gamma(b) - log_gamma(a + b);
}

double beta(double a, double b) { return std::exp(log_beta(a, b)); }

}  // namespace fractrace::specfun
