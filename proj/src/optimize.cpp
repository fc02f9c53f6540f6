#include "fractrace/optimize.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <ostream>
#include <sstream>

#include "fractrace/errors.hpp"
#include "fractrace/operators.hpp"
#include "summation.hpp"

namespace fractrace {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

std::vector<double> dalpha_weights(const BoxGrid& grid, double alpha) {
  std::vector<double> w(grid.total());
  for (std::size_t i = 0; i < w.size(); ++i) {
    const double k2 = grid.wavevector_norm_sq(i);
    w[i] = k2 == 0.0 ? 0.0 : std::pow(kTwoPi * kTwoPi * k2, alpha);
  }
  return w;
}

void check_kind(const FracIndex& idx, AscentKind kind, const BoxGrid& grid) {
  if (grid.dim() != idx.n) throw DomainError("ascent: field dimension does not match n");
  if (kind == AscentKind::sobolev && idx.m != 0) {
    throw DomainError("ascent: sobolev objective needs m = 0");
  }
  if (kind == AscentKind::trace_sobolev && idx.m < 1) {
    throw DomainError("ascent: trace_sobolev objective needs m >= 1");
  }
}

struct Numerator {
  double value = 0.0;
  std::vector<Complex> h;  // dN/dRe f_j + i dN/dIm f_j on the full lattice
};

// N = (dx' sum |f|^s)^{2/s} over the whole lattice (sobolev) or over the
// trace slice (trace_sobolev), optionally with its pointwise derivative.
Numerator numerator(const SpectralField& fx, const FracIndex& idx, AscentKind kind,
                    bool with_derivative) {
  const auto& grid = fx.grid();
  const double s = sobolev_exponent(idx);
  Numerator out;
  std::vector<std::size_t> points;
  double cell = grid.cell_volume();
  if (kind == AscentKind::sobolev) {
    points.resize(grid.total());
    for (std::size_t i = 0; i < points.size(); ++i) points[i] = i;
  } else {
    const auto slice = TraceSlice::make(grid, idx.m);
    const auto& dst = slice.target_grid;
    cell = dst.cell_volume();
    points.resize(dst.total());
    for (std::size_t t = 0; t < points.size(); ++t) {
      const auto ti = dst.unflatten(t);
      BoxGrid::Index si{};
      for (int j = 0; j < dst.dim(); ++j) si[j] = ti[j];
      for (int j = dst.dim(); j < grid.dim(); ++j) si[j] = grid.origin_index(j);
      points[t] = grid.flatten(si);
    }
  }
  detail::CompensatedSum sum;
  for (auto i : points) sum.add(std::pow(std::abs(fx[i]), s));
  const double mass = cell * sum.value();
  out.value = std::pow(mass, 2.0 / s);
  if (with_derivative) {
    out.h.assign(grid.total(), Complex(0.0));
    if (mass > 0.0) {
      const double pre = 2.0 * std::pow(mass, 2.0 / s - 1.0) * cell;
      for (auto i : points) {
        const double a = std::abs(fx[i]);
        out.h[i] = a == 0.0 ? Complex(0.0) : pre * std::pow(a, s - 2.0) * fx[i];
      }
    }
  }
  return out;
}

double denominator(const SpectralField& fh, const std::vector<double>& w) {
  detail::CompensatedSum sum;
  for (std::size_t i = 0; i < fh.size(); ++i) sum.add(std::norm(fh[i]) * w[i]);
  return fh.grid().freq_cell_volume() * sum.value();
}

SpectralField gradient_impl(const SpectralField& fh, const SpectralField& fx,
                            const FracIndex& idx, AscentKind kind, const std::vector<double>& w,
                            double* quotient) {
  const auto& grid = fh.grid();
  const double den = denominator(fh, w);
  if (!(den > 0.0)) throw DegenerateInputError("quotient_gradient: zero D_alpha norm");
  auto num = numerator(fx, idx, kind, true);
  const auto gn = forward_ft(SpectralField(grid, std::move(num.h), View::physical));
  const double dk = grid.freq_cell_volume();
  const double scale = dk / grid.cell_volume();
  std::vector<Complex> g(fh.size());
  for (std::size_t i = 0; i < g.size(); ++i) {
    const Complex gd = 2.0 * dk * w[i] * fh[i];
    g[i] = scale * gn[i] / den - num.value * gd / (den * den);
  }
  if (quotient) *quotient = num.value / den;
  return SpectralField(grid, std::move(g), View::frequency);
}

double dual_norm(const SpectralField& g, const std::vector<double>& w) {
  const double dk = g.grid().freq_cell_volume();
  detail::CompensatedSum sum;
  for (std::size_t i = 0; i < g.size(); ++i) {
    if (w[i] > 0.0) sum.add(std::norm(g[i]) / (2.0 * dk * w[i]));
  }
  return std::sqrt(sum.value());
}

SpectralField prepare_start(const SpectralField& f0, const std::vector<double>& w) {
  auto fh = in_view(f0, View::frequency);
  fh = hermitian_projection(fh.mapped([](std::size_t i, Complex v) {
    return i == 0 ? Complex(0.0) : v;
  }));
  const double d = denominator(fh, w);
  if (!(d > 0.0)) throw DegenerateInputError("ascend: start field has zero D_alpha norm");
  return fh.scaled(1.0 / std::sqrt(d));
}

}  // namespace

const char* to_string(AscentKind k) {
  return k == AscentKind::sobolev ? "sobolev" : "trace_sobolev";
}

AscentKind parse_ascent_kind(const std::string& s) {
  if (s == "sobolev") return AscentKind::sobolev;
  if (s == "trace_sobolev" || s == "trace-sobolev") return AscentKind::trace_sobolev;
  throw DomainError("unknown ascent objective '" + s + "'");
}

void AscentConfig::validate() const {
  if (max_iters < 0) throw DomainError("AscentConfig: max_iters must be >= 0");
  if (!(step > 0.0)) throw DomainError("AscentConfig: step must be > 0");
  if (!(step_decay > 0.0 && step_decay < 1.0)) {
    throw DomainError("AscentConfig: step_decay must lie in (0, 1)");
  }
  if (!(grad_tol >= 0.0) || !(stall_tol >= 0.0)) {
    throw DomainError("AscentConfig: tolerances must be >= 0");
  }
  if (stall_window < 1 || max_backtracks < 1) {
    throw DomainError("AscentConfig: stall_window and max_backtracks must be >= 1");
  }
}

bool AscentTrace::monotone() const {
  for (std::size_t i = 1; i < quotients.size(); ++i) {
    if (quotients[i] < quotients[i - 1]) return false;
  }
  return true;
}

double ascent_quotient(const SpectralField& f, const FracIndex& idx, AscentKind kind) {
  check_kind(idx, kind, f.grid());
  const auto fh = in_view(f, View::frequency);
  const auto fx = in_view(f, View::physical);
  const double den = denominator(fh, dalpha_weights(f.grid(), idx.alpha));
  if (!(den > 0.0)) throw DegenerateInputError("ascent_quotient: zero D_alpha norm");
  return numerator(fx, idx, kind, false).value / den;
}

SpectralField quotient_gradient(const SpectralField& f, const FracIndex& idx, AscentKind kind) {
  check_kind(idx, kind, f.grid());
  const auto w = dalpha_weights(f.grid(), idx.alpha);
  return gradient_impl(in_view(f, View::frequency), in_view(f, View::physical), idx, kind, w,
                       nullptr);
}

double relative_gradient_norm(const SpectralField& f, const FracIndex& idx, AscentKind kind) {
  check_kind(idx, kind, f.grid());
  const auto w = dalpha_weights(f.grid(), idx.alpha);
  auto fh = in_view(f, View::frequency);
  const double d = denominator(fh, w);
  if (!(d > 0.0)) throw DegenerateInputError("relative_gradient_norm: zero D_alpha norm");
  fh = fh.scaled(1.0 / std::sqrt(d));
  double q = 0.0;
  const auto g = gradient_impl(fh, inverse_ft(fh), idx, kind, w, &q);
  return dual_norm(g, w) / q;
}

AscentTrace ascend(const SpectralField& f0, const FracIndex& idx, AscentKind kind,
                   const AscentConfig& cfg) {
  cfg.validate();
  check_kind(idx, kind, f0.grid());
  const auto& grid = f0.grid();
  const auto w = dalpha_weights(grid, idx.alpha);
  const double dk = grid.freq_cell_volume();

  auto c = prepare_start(f0, w);
  auto cx = inverse_ft(c);
  AscentTrace trace{{}, {}, {}, cx, false, 0, ""};

  auto fail = [&](const std::string& what) {
    std::ostringstream os;
    os << "ascend: " << what << " after " << trace.iterations_used << " iterations; trace:";
    const std::size_t from = trace.quotients.size() > 5 ? trace.quotients.size() - 5 : 0;
    for (std::size_t i = from; i < trace.quotients.size(); ++i) os << ' ' << trace.quotients[i];
    throw NumericalError(os.str());
  };

  double q = 0.0;
  auto g = gradient_impl(c, cx, idx, kind, w, &q);
  if (!std::isfinite(q)) fail("non-finite starting quotient");
  trace.quotients.push_back(q);
  trace.grad_norms.push_back(dual_norm(g, w) / q);
  trace.steps.push_back(0.0);

  double t = cfg.step;
  int stalled = 0;
  trace.stop_reason = "max_iters";
  for (int it = 0; it < cfg.max_iters; ++it) {
    if (trace.grad_norms.back() <= cfg.grad_tol) {
      trace.converged = true;
      trace.stop_reason = "grad_tol";
      break;
    }
    // Riesz representer of the gradient in the metric 2 dk w, projected onto
    // the tangent space of the unit sphere and scaled to unit D_alpha norm.
    std::vector<Complex> p(c.size());
    for (std::size_t i = 0; i < p.size(); ++i) {
      p[i] = w[i] > 0.0 ? g[i] / (2.0 * dk * w[i]) : Complex(0.0);
    }
    detail::CompensatedSum cp;
    for (std::size_t i = 0; i < p.size(); ++i) cp.add(w[i] * (std::conj(c[i]) * p[i]).real());
    const double proj = cp.value() * dk;  // <c, p>_D with D(c) = 1
    for (std::size_t i = 0; i < p.size(); ++i) p[i] -= proj * c[i];
    SpectralField dir(grid, std::move(p), View::frequency);
    const double dn = denominator(dir, w);
    if (!(dn > 0.0)) {
      trace.converged = true;
      trace.stop_reason = "zero_gradient";
      break;
    }
    dir = dir.scaled(1.0 / std::sqrt(dn));

    bool accepted = false;
    for (int b = 0; b < cfg.max_backtracks; ++b) {
      // geodesic step on the unit D_alpha sphere
      auto trial = hermitian_projection(c.scaled(std::cos(t)).plus(dir, std::sin(t)));
      const double d = denominator(trial, w);
      if (!(d > 0.0) || !std::isfinite(d)) fail("degenerate trial step");
      trial = trial.scaled(1.0 / std::sqrt(d));
      auto tx = inverse_ft(trial);
      double qt = 0.0;
      auto gt = gradient_impl(trial, tx, idx, kind, w, &qt);
      if (!std::isfinite(qt)) fail("non-finite quotient");
      if (qt > q) {
        stalled = (qt - q <= cfg.stall_tol * q) ? stalled + 1 : 0;
        c = std::move(trial);
        cx = std::move(tx);
        g = std::move(gt);
        q = qt;
        trace.quotients.push_back(q);
        trace.grad_norms.push_back(dual_norm(g, w) / q);
        trace.steps.push_back(t);
        accepted = true;
        t = std::min(cfg.step, 2.0 * t);
        break;
      }
      t *= cfg.step_decay;
    }
    if (!accepted) {
      trace.converged = true;
      trace.stop_reason = "line_search_stall";
      break;
    }
    trace.iterations_used = it + 1;
    if (stalled >= cfg.stall_window) {
      trace.converged = true;
      trace.stop_reason = "quotient_stall";
      break;
    }
  }
  trace.final_field = cx.mapped([](std::size_t, Complex v) { return Complex(v.real(), 0.0); });
  return trace;
}

void write_trace_csv(const AscentTrace& trace, std::ostream& out) {
  out << "iter,quotient,grad_norm,step\n";
  char buf[128];
  for (std::size_t i = 0; i < trace.quotients.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%zu,%.17g,%.17g,%.17g\n", i, trace.quotients[i],
                  trace.grad_norms[i], trace.steps[i]);
    out << buf;
  }
}

namespace {

struct FitProblem {
  const BoxGrid* grid = nullptr;
  std::vector<double> data;  // shifted, phase-rotated real samples
  std::vector<std::size_t> active;  // lattice points inside the fit window
  double data_norm_sq = 0.0;
  double exponent = 0.0;

  struct Eval {
    double residual = 0.0;
    double amplitude = 0.0;
    double offset = 0.0;
  };

  Eval evaluate(double gamma, const std::vector<double>& a) const {
    const std::size_t total = active.size();
    const int d = grid->dim();
    std::vector<double> u(total);
    double su = 0.0, suu = 0.0, sg = 0.0, sug = 0.0;
    for (std::size_t k = 0; k < total; ++k) {
      const std::size_t i = active[k];
      const auto x = grid->point(i);
      double r2 = gamma * gamma;
      for (int j = 0; j < d; ++j) r2 += (x[j] - a[j]) * (x[j] - a[j]);
      u[k] = std::pow(r2, -exponent);
      su += u[k];
      suu += u[k] * u[k];
      sg += data[i];
      sug += u[k] * data[i];
    }
    const double nt = static_cast<double>(total);
    const double det = nt * suu - su * su;
    Eval e;
    if (det > 0.0) {
      e.amplitude = (nt * sug - su * sg) / det;
      e.offset = (suu * sg - su * sug) / det;
    } else {
      e.amplitude = sug / suu;
    }
    detail::CompensatedSum rs;
    for (std::size_t k = 0; k < total; ++k) {
      const double r = data[active[k]] - e.amplitude * u[k] - e.offset;
      rs.add(r * r);
    }
    e.residual = std::sqrt(rs.value() / data_norm_sq);
    return e;
  }
};

template <class F>
double golden_section(const F& fn, double lo, double hi, double tol) {
  const double phi = 0.5 * (std::sqrt(5.0) - 1.0);
  double x1 = hi - phi * (hi - lo), x2 = lo + phi * (hi - lo);
  double f1 = fn(x1), f2 = fn(x2);
  while (hi - lo > tol) {
    if (f1 <= f2) {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - phi * (hi - lo);
      f1 = fn(x1);
    } else {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + phi * (hi - lo);
      f2 = fn(x2);
    }
  }
  return f1 <= f2 ? x1 : x2;
}

}  // namespace

ExtremizerFit fit_extremizer(const SpectralField& f, const FracIndex& idx, double window) {
  if (idx.m != 0) throw DomainError("fit_extremizer: needs m = 0");
  if (!(window >= 0.0)) throw DomainError("fit_extremizer: window must be >= 0");
  const auto fx = in_view(f, View::physical);
  const auto& grid = fx.grid();
  if (grid.dim() != idx.n) throw DomainError("fit_extremizer: field dimension does not match n");
  const int d = grid.dim();

  std::size_t ip = 0;
  for (std::size_t i = 1; i < fx.size(); ++i) {
    if (std::abs(fx[i]) > std::abs(fx[ip])) ip = i;
  }
  const double peak = std::abs(fx[ip]);
  if (!(peak > 0.0)) throw DegenerateInputError("fit_extremizer: field is zero");
  const Complex phase = fx[ip] / peak;

  FitProblem prob;
  prob.grid = &grid;
  prob.exponent = 0.5 * (idx.n - 2.0 * idx.alpha);
  prob.data.resize(fx.size());
  // A peak in the central half of the box is fitted in place, so a sampled
  // (non-periodic) extremizer is not wrapped; otherwise the field is rolled
  // by whole cells to bring the peak to the origin.
  auto peak_idx = grid.unflatten(ip);
  std::vector<double> shift(d, 0.0);
  bool central = true;
  for (int j = 0; j < d; ++j) {
    central = central && std::abs(grid.coordinate(j, peak_idx[j])) < 0.25 * grid.length(j);
  }
  for (int j = 0; j < d; ++j) {
    if (central) peak_idx[j] = grid.origin_index(j);
    shift[j] = grid.coordinate(j, peak_idx[j]);
  }
  double lowest = peak;
  for (std::size_t i = 0; i < fx.size(); ++i) {
    auto src = grid.unflatten(i);
    for (int j = 0; j < d; ++j) {
      const std::size_t nj = grid.size(j);
      src[j] = (src[j] + peak_idx[j] + nj - grid.origin_index(j)) % nj;
    }
    prob.data[i] = (std::conj(phase) * fx[grid.flatten(src)]).real();
    lowest = std::min(lowest, prob.data[i]);
  }
  double min_length = grid.length(0);
  for (int j = 1; j < d; ++j) min_length = std::min(min_length, grid.length(j));
  const double wr2 = window * window * min_length * min_length;
  for (std::size_t i = 0; i < fx.size(); ++i) {
    if (window > 0.0) {
      const auto x = grid.point(i);
      double r2 = 0.0;
      for (int j = 0; j < d; ++j) r2 += x[j] * x[j];
      if (r2 > wr2) continue;
    }
    prob.active.push_back(i);
    prob.data_norm_sq += prob.data[i] * prob.data[i];
  }
  if (prob.active.size() < static_cast<std::size_t>(d) + 3) {
    throw DomainError("fit_extremizer: window holds too few lattice points");
  }
  const double span = peak - lowest;
  if (!(span > 1e-12 * peak)) throw DegenerateInputError("fit_extremizer: no clear peak");

  // half-decay radius along axis 0 from the peak
  const std::size_t stride0 = grid.total() / grid.size(0);
  const std::size_t centre = grid.flatten([&] {
    auto c = grid.unflatten(ip);
    for (int j = 0; j < d; ++j) {
      const std::size_t nj = grid.size(j);
      c[j] = (c[j] + nj + grid.origin_index(j) - peak_idx[j]) % nj;
    }
    return c;
  }());
  double r_half = grid.spacing(0);
  const std::size_t c0 = grid.unflatten(centre)[0];
  for (std::size_t s = 1; c0 + s < grid.size(0); ++s) {
    const double v = (prob.data[centre + s * stride0] - lowest) / span;
    if (v <= 0.5) {
      const double prev = (prob.data[centre + (s - 1) * stride0] - lowest) / span;
      const double frac = prev > v ? (prev - 0.5) / (prev - v) : 0.0;
      r_half = grid.spacing(0) * (static_cast<double>(s - 1) + frac);
      break;
    }
  }
  r_half = std::max(r_half, 0.25 * grid.spacing(0));
  double gamma = r_half / std::sqrt(std::pow(2.0, 1.0 / prob.exponent) - 1.0);
  std::vector<double> a(d);
  {
    const auto c = grid.unflatten(centre);
    for (int j = 0; j < d; ++j) a[j] = grid.coordinate(j, c[j]);
  }

  double best = prob.evaluate(gamma, a).residual;
  for (int round = 0; round < 40; ++round) {
    const double before = best;
    const double lg = golden_section(
        [&](double l) { return prob.evaluate(std::exp(l), a).residual; },
        std::log(gamma) - 2.5, std::log(gamma) + 2.5, 1e-11);
    gamma = std::exp(lg);
    for (int j = 0; j < d; ++j) {
      const double h = grid.spacing(j);
      const double lo = a[j] - h, hi = a[j] + h;
      a[j] = golden_section(
          [&](double v) {
            auto b = a;
            b[j] = v;
            return prob.evaluate(gamma, b).residual;
          },
          lo, hi, 1e-11 * std::max(1.0, gamma));
    }
    best = prob.evaluate(gamma, a).residual;
    if (before - best <= 1e-14 + 1e-9 * best) break;
  }

  const auto e = prob.evaluate(gamma, a);
  std::vector<double> centre_box(d);
  for (int j = 0; j < d; ++j) {
    const double L = grid.length(j);
    double c = a[j] + shift[j];
    c -= L * std::floor((c + 0.5 * L) / L);
    centre_box[j] = c;
  }
  ExtremizerFit fit{ExtremizerSpec::make(Family::sobolev, idx, gamma, centre_box,
                                         phase * e.amplitude),
                    e.offset, e.residual};
  return fit;
}

}  // namespace fractrace
