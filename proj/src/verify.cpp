#include "fractrace/verify.hpp"

#include <chrono>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "fractrace/constants.hpp"
#include "fractrace/errors.hpp"
#include "fractrace/operators.hpp"
#include "fractrace/specfun.hpp"
#include "summation.hpp"

namespace fractrace {

namespace {

using Clock = std::chrono::steady_clock;

double sphere_area(int d) {
  // |S^{d-1}| = 2 pi^{d/2} / Gamma(d/2)
  return 2.0 * std::pow(std::numbers::pi, 0.5 * d) / specfun::gamma(0.5 * d);
}

RayleighReport start_report(QuotientKind kind, const FracIndex& idx, const BoxGrid& grid) {
  RayleighReport r;
  r.kind = kind;
  r.idx = idx;
  r.sizes = grid.sizes();
  r.lengths = grid.lengths();
  r.grid_summary = grid.summary();
  return r;
}

void finish_report(RayleighReport& r, double numerator, double denominator, double sharp,
                   Clock::time_point t0) {
  if (!(denominator > 0.0) || !std::isfinite(denominator)) {
    throw DegenerateInputError(std::string(to_string(r.kind)) +
                               " quotient: denominator is zero or not finite");
  }
  if (!std::isfinite(numerator)) {
    throw NumericalError(std::string(to_string(r.kind)) + " quotient: numerator not finite");
  }
  r.numerator = numerator;
  r.denominator = denominator;
  r.quotient = numerator / denominator;
  r.sharp_constant = sharp;
  r.ratio = r.quotient / sharp;
  r.tail_budget = r.spatial_tail + r.spectral_tail;
  if (!std::isfinite(r.tail_budget)) {
    r.notes.push_back("tail bound is infinite: power-law tail not integrable");
  } else if (r.tail_budget > 0.05) {
    r.notes.push_back("tail budget exceeds 5%: enlarge L or N");
  }
  r.wall_time_ms =
      std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

void note_zero_mode(RayleighReport& r, const SpectralField& f) {
  const auto fh = in_view(f, View::frequency);
  const double dc = std::abs(fh[0]);
  const double peak = fh.max_abs();
  std::ostringstream os;
  os.precision(3);
  os << "zero mode |fhat(0)|/max|fhat| = " << (peak > 0.0 ? dc / peak : 0.0)
     << "; it carries no D_alpha weight";
  r.notes.push_back(os.str());
}

void require_m(const FracIndex& idx, bool trace, const char* what) {
  if (trace && idx.m < 1) throw DomainError(std::string(what) + ": needs m >= 1");
  if (!trace && idx.m != 0) throw DomainError(std::string(what) + ": needs m = 0");
}

void require_grid(const SpectralField& f, const FracIndex& idx, const char* what) {
  if (f.grid().dim() != idx.n) {
    throw DomainError(std::string(what) + ": field dimension does not match n");
  }
}

}  // namespace

const char* to_string(QuotientKind k) {
  switch (k) {
    case QuotientKind::sobolev: return "sobolev";
    case QuotientKind::trace_norm: return "trace_norm";
    case QuotientKind::trace_sobolev: return "trace_sobolev";
    case QuotientKind::hls: return "hls";
  }
  return "unknown";
}

QuotientKind parse_quotient_kind(const std::string& s) {
  std::string t = s;
  for (auto& c : t) {
    if (c == '-') c = '_';
  }
  if (t == "sobolev") return QuotientKind::sobolev;
  if (t == "trace_norm") return QuotientKind::trace_norm;
  if (t == "trace_sobolev") return QuotientKind::trace_sobolev;
  if (t == "hls") return QuotientKind::hls;
  throw DomainError("unknown quotient kind '" + s + "'");
}

bool RayleighReport::within_upper_bound(double slack) const {
  return ratio <= 1.0 + tail_budget + slack;
}

double power_law_tail_fraction(const SpectralField& f, double p, double decay) {
  const auto fx = in_view(f, View::physical);
  const auto& grid = fx.grid();
  const int d = grid.dim();
  if (!(p * decay > d)) return std::numeric_limits<double>::infinity();
  double face = 0.0;
  detail::CompensatedSum mass;
  for (std::size_t i = 0; i < fx.size(); ++i) {
    const double v = std::pow(std::abs(fx[i]), p);
    mass.add(v);
    const auto idx = grid.unflatten(i);
    for (int j = 0; j < d; ++j) {
      if (idx[j] == 0) {
        face = std::max(face, v);
        break;
      }
    }
  }
  const double total = mass.value() * grid.cell_volume();
  if (!(total > 0.0)) return 0.0;
  double radius = grid.length(0);
  for (int j = 1; j < d; ++j) radius = std::min(radius, grid.length(j));
  radius *= 0.5;
  // |f|^p ~ face * (R/|x|)^{p decay} outside the ball of radius R
  const double q = p * decay;
  const double tail = face * sphere_area(d) * std::pow(radius, d) / (q - d);
  return tail / total;
}

double spectral_tail_fraction(const SpectralField& f, double alpha) {
  const auto fh = in_view(f, View::frequency);
  const auto& grid = fh.grid();
  detail::CompensatedSum all, outer;
  for (std::size_t i = 0; i < fh.size(); ++i) {
    const double k2 = grid.wavevector_norm_sq(i);
    if (k2 == 0.0 && alpha > 0.0) continue;
    const double w = std::norm(fh[i]) * (alpha == 0.0 ? 1.0 : std::pow(k2, alpha));
    all.add(w);
    const auto idx = grid.unflatten(i);
    for (int j = 0; j < grid.dim(); ++j) {
      const long s = grid.signed_index(j, idx[j]);
      if (std::labs(s) >= static_cast<long>(grid.size(j) / 4)) {
        outer.add(w);
        break;
      }
    }
  }
  return all.value() > 0.0 ? outer.value() / all.value() : 0.0;
}

RayleighReport sobolev_quotient(const SpectralField& f, const FracIndex& idx) {
  const auto t0 = Clock::now();
  require_m(idx, false, "sobolev_quotient");
  require_grid(f, idx, "sobolev_quotient");
  const double s = sobolev_exponent(idx);
  auto r = start_report(QuotientKind::sobolev, idx, f.grid());
  const double num = std::pow(lp_norm(f, s), 2);
  const double den = dalpha_norm_sq(f, idx.alpha);
  r.spatial_tail = power_law_tail_fraction(f, s, idx.n - 2.0 * idx.alpha) * 2.0 / s;
  r.spectral_tail = spectral_tail_fraction(f, idx.alpha);
  note_zero_mode(r, f);
  finish_report(r, num, den, sobolev_constant(idx.n, idx.alpha), t0);
  return r;
}

RayleighReport trace_norm_quotient(const SpectralField& f, const FracIndex& idx) {
  const auto t0 = Clock::now();
  require_m(idx, true, "trace_norm_quotient");
  require_grid(f, idx, "trace_norm_quotient");
  auto r = start_report(QuotientKind::trace_norm, idx, f.grid());
  const double beta = idx.alpha - 0.5 * idx.m;
  const auto tr = trace_fourier(f, idx.m);
  const double num = dalpha_norm_sq(tr, beta);
  const double den = dalpha_norm_sq(f, idx.alpha);
  r.spatial_tail = 0.0;
  r.spectral_tail = spectral_tail_fraction(f, idx.alpha);
  note_zero_mode(r, f);
  r.notes.push_back("trace taken as the dk-weighted sum over traced frequency axes");
  finish_report(r, num, den, trace_constant(idx.m, idx.alpha), t0);
  return r;
}

RayleighReport trace_sobolev_quotient(const SpectralField& f, const FracIndex& idx) {
  const auto t0 = Clock::now();
  require_m(idx, true, "trace_sobolev_quotient");
  require_grid(f, idx, "trace_sobolev_quotient");
  auto r = start_report(QuotientKind::trace_sobolev, idx, f.grid());
  const double s = sobolev_exponent(idx);
  const auto tr = trace_physical(f, idx.m);
  const double num = std::pow(lp_norm(tr, s), 2);
  const double den = dalpha_norm_sq(f, idx.alpha);
  r.spatial_tail = power_law_tail_fraction(tr, s, idx.n - 2.0 * idx.alpha) * 2.0 / s;
  r.spectral_tail = spectral_tail_fraction(f, idx.alpha);
  note_zero_mode(r, f);
  finish_report(r, num, den, composed_constant(idx), t0);
  return r;
}

RayleighReport hls_quotient(const SpectralField& g, const FracIndex& idx) {
  const auto t0 = Clock::now();
  require_m(idx, false, "hls_quotient");
  require_grid(g, idx, "hls_quotient");
  if (!(idx.alpha > 0.0 && idx.alpha < 0.5 * idx.n)) {
    throw DomainError("hls_quotient: needs 0 < alpha < n/2");
  }
  if (!in_view(g, View::physical).is_real(1e-12)) {
    throw DomainError("hls_quotient: field must be real");
  }
  auto r = start_report(QuotientKind::hls, idx, g.grid());
  const double rr = 2.0 * idx.n / (idx.n + 2.0 * idx.alpha);
  const double num = riesz_double_sum(g, idx.alpha);
  const double den = std::pow(lp_norm(g, rr), 2);
  r.spatial_tail = power_law_tail_fraction(g, rr, idx.n + 2.0 * idx.alpha) * 2.0 / rr;
  r.spectral_tail = 0.0;
  r.notes.push_back("periodic images beyond the minimum image are neglected");
  finish_report(r, num, den, hls_constant(idx.n, idx.alpha), t0);
  return r;
}

}  // namespace fractrace
