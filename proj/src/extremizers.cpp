#include "fractrace/extremizers.hpp"

#include <algorithm>
#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>
#include <cmath>
#include <numbers>
#include <sstream>

#include "fractrace/constants.hpp"
#include "fractrace/errors.hpp"
#include "fractrace/specfun.hpp"

namespace fractrace {

namespace {

constexpr double kPi = std::numbers::pi;

// The rules cache abscissae lazily and their integrate() is non-const.
boost::math::quadrature::tanh_sinh<double>& finite_rule() {
  thread_local boost::math::quadrature::tanh_sinh<double> rule;
  return rule;
}

boost::math::quadrature::exp_sinh<double>& tail_rule() {
  thread_local boost::math::quadrature::exp_sinh<double> rule;
  return rule;
}

struct Accumulator {
  double value = 0.0;
  double error = 0.0;
  double l1 = 0.0;
};

// Integrates h over [0, inf) split at the given interior breakpoints.
template <class F>
Accumulator integrate_half_line(const F& h, std::vector<double> breaks, double tol) {
  breaks.erase(std::remove_if(breaks.begin(), breaks.end(),
                              [](double b) { return !(b > 0.0) || !std::isfinite(b); }),
               breaks.end());
  std::sort(breaks.begin(), breaks.end());
  breaks.erase(std::unique(breaks.begin(), breaks.end()), breaks.end());

  Accumulator acc;
  double left = 0.0;
  for (double right : breaks) {
    if (right - left <= 0.0) continue;
    double err = 0.0, l1 = 0.0;
    // measured from the left endpoint so a singularity at 0 is resolved in
    // absolute terms
    const double width = right - left;
    const double lo = left;
    // the two-argument form hands over the exact distance to the nearer
    // endpoint, which keeps s > 0 resolvable next to a singular left end
    acc.value += finite_rule().integrate(
        [&](double, double xc) { return h(lo + (xc < 0.0 ? -xc : width - xc)); }, 0.0, width,
        tol, &err, &l1);
    acc.error += err;
    acc.l1 += l1;
    left = right;
  }
  double err = 0.0, l1 = 0.0;
  const double lo = left;
  acc.value += tail_rule().integrate([&](double s) { return h(lo + s); }, tol, &err, &l1);
  acc.error += err;
  acc.l1 += l1;
  return acc;
}

void check_accuracy(const Accumulator& acc, double tol, const std::string& where) {
  if (!std::isfinite(acc.value) || acc.error > 100.0 * tol * std::max(acc.l1, 1e-300)) {
    std::ostringstream os;
    os << "quadrature did not converge in " << where << ": value=" << acc.value
       << " error_estimate=" << acc.error << " L1=" << acc.l1 << " tol=" << tol;
    throw NumericalError(os.str());
  }
}

// (x2sq + s^2)^{-p/2} without squaring s when x2sq = 0
double kernel(double p, double x2sq, double s) {
  return x2sq == 0.0 ? std::pow(s, -p) : std::pow(x2sq + s * s, -0.5 * p);
}

// d = 1.  x measured from the bubble centre.
double bubble_potential_1d(double p, double q, double gamma, double x, double x2sq,
                           double tol) {
  const double g2 = gamma * gamma;
  const double g = std::abs(gamma);
  const double w = std::sqrt(x2sq);
  Accumulator total;
  for (int side : {+1, -1}) {
    // y = x + side * s, s >= 0; the bubble peak sits at s = -side * x.
    auto h = [&](double s) {
      const double y = x + side * s;
      return kernel(p, x2sq, s) * std::pow(g2 + y * y, -0.5 * q);
    };
    const double peak = -side * x;
    std::vector<double> breaks = {w, 4.0 * w, peak - 2.0 * g, peak, peak + 2.0 * g, 2.0 * g};
    const auto acc = integrate_half_line(h, breaks, tol);
    total.value += acc.value;
    total.error += acc.error;
    total.l1 += acc.l1;
  }
  check_accuracy(total, tol, "bubble_potential (d=1)");
  return total.value;
}

// d = 2, polar coordinates about x.  D = |x| is the distance to the bubble
// centre; the integrand is symmetric about the line through x and the centre.
double bubble_potential_2d(double p, double q, double gamma, double dist, double x2sq,
                           double tol) {
  const double g2 = gamma * gamma;
  const double g = std::abs(gamma);
  const double w = std::sqrt(x2sq);
  const double d2 = dist * dist;
  double inner_error = 0.0;
  double inner_l1 = 0.0;
  auto radial = [&](double phi) {
    const double c = std::cos(phi);
    auto h = [&](double rho) {
      const double r2 = g2 + d2 + rho * rho - 2.0 * rho * dist * c;
      return rho * kernel(p, x2sq, rho) * std::pow(r2, -0.5 * q);
    };
    const double closest = dist * c;
    std::vector<double> breaks = {w, 4.0 * w, closest - 2.0 * g, closest, closest + 2.0 * g,
                                  2.0 * g};
    const auto acc = integrate_half_line(h, breaks, tol);
    inner_error += acc.error;
    inner_l1 += acc.l1;
    return acc.value;
  };
  std::vector<double> phi_breaks;
  if (dist > 0.0) phi_breaks.push_back(std::min(0.5 * kPi, 4.0 * g / dist));
  phi_breaks.push_back(kPi);
  Accumulator outer;
  double left = 0.0;
  for (double right : phi_breaks) {
    if (right <= left) continue;
    double err = 0.0, l1 = 0.0;
    outer.value += finite_rule().integrate(radial, left, right, tol, &err, &l1);
    outer.error += err;
    outer.l1 += l1;
    left = right;
  }
  outer.value *= 2.0;
  outer.error *= 2.0;
  outer.l1 *= 2.0;
  check_accuracy(outer, tol, "bubble_potential (d=2)");
  return outer.value;
}

double distance_sq(std::span<const double> x, const std::vector<double>& a) {
  double s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double d = x[i] - (i < a.size() ? a[i] : 0.0);
    s += d * d;
  }
  return s;
}

void require_family(const ExtremizerSpec& spec, Family f, const char* what) {
  if (spec.family != f) throw DomainError(std::string(what) + ": wrong extremizer family");
}

}  // namespace

const char* to_string(Family f) {
  switch (f) {
    case Family::sobolev: return "sobolev";
    case Family::hls: return "hls";
    case Family::trace: return "trace";
    case Family::escobar: return "escobar";
  }
  return "unknown";
}

ExtremizerSpec ExtremizerSpec::make(Family family, const FracIndex& idx, double gamma,
                                    std::vector<double> center, Complex amplitude) {
  if (!(gamma != 0.0) || !std::isfinite(gamma)) {
    throw DomainError("ExtremizerSpec: gamma must be finite and non-zero");
  }
  ExtremizerSpec spec;
  spec.family = family;
  spec.amplitude = amplitude;
  spec.gamma = gamma;
  switch (family) {
    case Family::sobolev:
    case Family::hls:
      spec.idx = FracIndex::sobolev(idx.n, idx.alpha);
      if (family == Family::hls && !(idx.alpha > 0.0)) {
        throw DomainError("ExtremizerSpec: hls family needs alpha > 0");
      }
      break;
    case Family::trace:
      spec.idx = FracIndex::trace(idx.n, idx.m, idx.alpha);
      break;
    case Family::escobar:
      spec.idx = FracIndex::trace(idx.n, idx.m, idx.alpha);
      if (idx.m != 1 || idx.alpha != 1.0 || idx.n < 3) {
        throw DomainError("ExtremizerSpec: escobar family needs n >= 3, m = 1, alpha = 1");
      }
      break;
  }
  const auto dim = static_cast<std::size_t>(spec.center_dim());
  if (center.empty()) center.assign(dim, 0.0);
  if (center.size() != dim) throw DomainError("ExtremizerSpec: centre has wrong dimension");
  spec.center = std::move(center);
  return spec;
}

int ExtremizerSpec::center_dim() const {
  return (family == Family::sobolev || family == Family::hls) ? idx.n : idx.n - idx.m;
}

Complex sobolev_extremizer(const ExtremizerSpec& spec, std::span<const double> x) {
  require_family(spec, Family::sobolev, "sobolev_extremizer");
  const double e = -0.5 * (spec.idx.n - 2.0 * spec.idx.alpha);
  return spec.amplitude * std::pow(spec.gamma * spec.gamma + distance_sq(x, spec.center), e);
}

Complex hls_extremizer(const ExtremizerSpec& spec, std::span<const double> x) {
  require_family(spec, Family::hls, "hls_extremizer");
  const double e = -0.5 * (spec.idx.n + 2.0 * spec.idx.alpha);
  return spec.amplitude * std::pow(spec.gamma * spec.gamma + distance_sq(x, spec.center), e);
}

Complex escobar_extremizer(const ExtremizerSpec& spec, std::span<const double> x1, double t) {
  require_family(spec, Family::escobar, "escobar_extremizer");
  const double h = std::abs(spec.gamma) + std::abs(t);
  const double e = -0.5 * (spec.idx.n - 2.0);
  return spec.amplitude * std::pow(h * h + distance_sq(x1, spec.center), e);
}

double bubble_potential(int d, double p, double q, double gamma, std::span<const double> x,
                        double x2sq, const QuadratureOptions& opts) {
  if (static_cast<int>(x.size()) != d) throw DomainError("bubble_potential: point dimension");
  if (x2sq == 0.0 && !(p < d)) throw DomainError("bubble_potential: kernel not integrable");
  if (!(p + q > d)) throw DomainError("bubble_potential: integral diverges at infinity");
  if (!(gamma != 0.0)) throw DomainError("bubble_potential: gamma must be non-zero");
  switch (d) {
    case 1: return bubble_potential_1d(p, q, gamma, x[0], x2sq, opts.rel_tol);
    case 2: return bubble_potential_2d(p, q, gamma, std::hypot(x[0], x[1]), x2sq, opts.rel_tol);
    default: throw DomainError("bubble_potential: only d = 1, 2 are supported");
  }
}

double trace_extremizer(const ExtremizerSpec& spec, std::span<const double> x1,
                        std::span<const double> x2, const QuadratureOptions& opts) {
  require_family(spec, Family::trace, "trace_extremizer");
  const int n = spec.idx.n;
  const int m = spec.idx.m;
  const double a = spec.idx.alpha;
  if (static_cast<int>(x1.size()) != n - m || static_cast<int>(x2.size()) != m) {
    throw DomainError("trace_extremizer: point dimensions must be (n - m, m)");
  }
  double x2sq = 0.0;
  for (double v : x2) x2sq += v * v;
  std::vector<double> rel(x1.begin(), x1.end());
  for (std::size_t i = 0; i < rel.size(); ++i) rel[i] -= spec.center[i];
  const double value = bubble_potential(n - m, n - 2.0 * a, n + 2.0 * a - 2.0 * m, spec.gamma,
                                        rel, x2sq, opts);
  return spec.amplitude.real() * value;
}

double hls_euler_lagrange_ratio(const ExtremizerSpec& spec, std::span<const double> x,
                                const QuadratureOptions& opts) {
  require_family(spec, Family::hls, "hls_euler_lagrange_ratio");
  const int n = spec.idx.n;
  const double a = spec.idx.alpha;
  std::vector<double> rel(x.begin(), x.end());
  for (std::size_t i = 0; i < rel.size(); ++i) rel[i] -= spec.center[i];
  const double amp = spec.amplitude.real();
  const double potential = amp * bubble_potential(n, n - 2.0 * a, n + 2.0 * a, spec.gamma, rel,
                                                  0.0, opts);
  const double r = 2.0 * n / (n + 2.0 * a);
  const double g = hls_extremizer(spec, x).real();
  return potential / std::pow(g, r - 1.0);
}

double hls_euler_lagrange_prediction(const ExtremizerSpec& spec) {
  require_family(spec, Family::hls, "hls_euler_lagrange_prediction");
  const int n = spec.idx.n;
  const double a = spec.idx.alpha;
  const double r = 2.0 * n / (n + 2.0 * a);
  const double amp = spec.amplitude.real();
  // ||g||_r^r = A^r pi^{n/2} Gamma(n/2) / Gamma(n) |gamma|^{-n}
  const double norm_r_pow_r = std::pow(amp, r) * std::pow(kPi, 0.5 * n) *
                              specfun::gamma_ratio(0.5 * n, n) *
                              std::pow(std::abs(spec.gamma), -n);
  const double norm_r = std::pow(norm_r_pow_r, 1.0 / r);
  return hls_constant(n, a) * std::pow(norm_r, 2.0 - r);
}

SpectralField sample_extremizer(const ExtremizerSpec& spec, const BoxGrid& grid,
                                const QuadratureOptions& opts) {
  if (grid.dim() != spec.idx.n) throw DomainError("sample_extremizer: grid dimension != n");
  const int d = spec.idx.n - spec.idx.m;
  switch (spec.family) {
    case Family::sobolev:
      return SpectralField::sample(grid, [&](const BoxGrid::Point& p) {
        return sobolev_extremizer(spec, std::span<const double>(p.data(), grid.dim()));
      });
    case Family::hls:
      return SpectralField::sample(grid, [&](const BoxGrid::Point& p) {
        return hls_extremizer(spec, std::span<const double>(p.data(), grid.dim()));
      });
    case Family::escobar:
      return SpectralField::sample(grid, [&](const BoxGrid::Point& p) {
        return escobar_extremizer(spec, std::span<const double>(p.data(), d), p[d]);
      });
    case Family::trace:
      break;
  }

  // Trace family: the value depends on |x2| and, on axes where the centre
  // coordinate is 0, on |x1_j|.  Evaluate one representative per reflection
  // class (offsets 0..N/2 from the origin) and scatter.
  const int n = grid.dim();
  std::vector<bool> reflect(n);
  std::vector<std::size_t> reduced_sizes(n);
  for (int j = 0; j < n; ++j) {
    reflect[j] = j >= d || spec.center[j] == 0.0;
    reduced_sizes[j] = reflect[j] ? grid.size(j) / 2 + 1 : grid.size(j);
  }
  std::size_t reduced_total = 1;
  for (auto s : reduced_sizes) reduced_total *= s;

  auto reduced_index = [&](int j, std::size_t i) -> std::size_t {
    if (!reflect[j]) return i;
    const long off = static_cast<long>(i) - static_cast<long>(grid.origin_index(j));
    return static_cast<std::size_t>(std::labs(off));
  };
  auto reduced_coordinate = [&](int j, std::size_t r) -> double {
    return reflect[j] ? grid.spacing(j) * static_cast<double>(r) : grid.coordinate(j, r);
  };

  std::vector<double> reduced(reduced_total);
  std::vector<double> x1(d), x2(n - d);
  for (std::size_t flat = 0; flat < reduced_total; ++flat) {
    std::size_t rem = flat;
    for (int j = n - 1; j >= 0; --j) {
      const std::size_t r = rem % reduced_sizes[j];
      rem /= reduced_sizes[j];
      const double c = reduced_coordinate(j, r);
      if (j < d) x1[j] = c;
      else x2[j - d] = c;
    }
    reduced[flat] = trace_extremizer(spec, x1, x2, opts);
  }

  std::vector<Complex> values(grid.total());
  for (std::size_t flat = 0; flat < values.size(); ++flat) {
    const auto idx = grid.unflatten(flat);
    std::size_t rflat = 0;
    for (int j = 0; j < n; ++j) rflat = rflat * reduced_sizes[j] + reduced_index(j, idx[j]);
    values[flat] = reduced[rflat];
  }
  return SpectralField(grid, std::move(values), View::physical);
}

Truncated truncate_to_level_set(const SpectralField& f, std::span<const double> center,
                                double radius) {
  const auto fx = in_view(f, View::physical);
  const auto& grid = fx.grid();
  if (static_cast<int>(center.size()) != grid.dim()) {
    throw DomainError("truncate_to_level_set: centre dimension");
  }
  if (!(radius > 0.0)) throw DomainError("truncate_to_level_set: radius must be > 0");
  const double r2 = radius * radius;
  double level = 0.0;
  bool any_outside = false;
  for (std::size_t i = 0; i < fx.size(); ++i) {
    const auto p = grid.point(i);
    double s = 0.0;
    for (int j = 0; j < grid.dim(); ++j) s += (p[j] - center[j]) * (p[j] - center[j]);
    if (s >= r2) {
      if (fx[i].imag() != 0.0 || fx[i].real() < 0.0) {
        throw DomainError("truncate_to_level_set: field must be real and non-negative");
      }
      level = any_outside ? std::max(level, fx[i].real()) : fx[i].real();
      any_outside = true;
    }
  }
  auto out = fx.mapped([&](std::size_t, Complex v) { return Complex(std::max(v.real() - level, 0.0)); });
  return Truncated{std::move(out), level, radius};
}

FourierTraceExtremizer::FourierTraceExtremizer(const FracIndex& idx, double gamma,
                                               std::vector<double> center,
                                               const BoxGrid& retained_grid)
    : idx_(FracIndex::trace(idx.n, idx.m, idx.alpha)),
      gamma_(gamma),
      center_(std::move(center)),
      ghat_(SpectralField::zeros(retained_grid, View::frequency)) {
  const int d = idx_.n - idx_.m;
  if (retained_grid.dim() != d) {
    throw DomainError("FourierTraceExtremizer: retained grid must have dimension n - m");
  }
  // g is the HLS optimizer of order alpha - m/2 in dimension n - m.
  const double beta = idx_.alpha - 0.5 * idx_.m;
  auto g = ExtremizerSpec::make(Family::hls, FracIndex::sobolev(d, beta), gamma_, center_);
  center_ = g.center;
  ghat_ = forward_ft(sample_extremizer(g, retained_grid));
}

Complex FourierTraceExtremizer::value(std::size_t k1_index, std::span<const double> k2) const {
  const auto& grid = ghat_.grid();
  double k2sq = grid.wavevector_norm_sq(k1_index);
  for (double v : k2) k2sq += v * v;
  if (k2sq == 0.0) return 0.0;
  return ghat_[k1_index] * std::pow(k2sq, -idx_.alpha);
}

SpectralField FourierTraceExtremizer::lattice_field(const BoxGrid& grid, bool drop_zero_row) const {
  const auto& retained = ghat_.grid();
  if (grid.dim() != idx_.n || !(grid.leading_axes(retained.dim()) == retained)) {
    throw DomainError("FourierTraceExtremizer: grid does not extend the retained grid");
  }
  const std::size_t block = grid.total() / retained.total();
  std::vector<Complex> values(grid.total());
  std::vector<double> k2(idx_.m);
  for (std::size_t flat = 0; flat < values.size(); ++flat) {
    const std::size_t k1 = flat / block;
    if (drop_zero_row && k1 == 0) continue;
    const auto kv = grid.wavevector(flat);
    for (int j = 0; j < idx_.m; ++j) k2[j] = kv[retained.dim() + j];
    values[flat] = value(k1, k2);
  }
  return SpectralField(grid, std::move(values), View::frequency);
}

}  // namespace fractrace
