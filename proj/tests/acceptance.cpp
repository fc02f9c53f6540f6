// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fails.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <string>
#include <vector>

#include "fractrace/constants.hpp"
#include "fractrace/extremizers.hpp"
#include "fractrace/field.hpp"
#include "fractrace/operators.hpp"
#include "fractrace/optimize.hpp"
#include "fractrace/verify.hpp"

using namespace fractrace;

namespace {

constexpr double kPi = std::numbers::pi;

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

SpectralField gaussian(const BoxGrid& g) {
  return SpectralField::sample(g, [&](const BoxGrid::Point& x) {
    double r2 = 0.0;
    for (int j = 0; j < g.dim(); ++j) r2 += x[j] * x[j];
    return Complex(std::exp(-kPi * r2));
  });
}

SpectralField gaussian_difference(const BoxGrid& g) {
  const int n = g.dim();
  return SpectralField::sample(g, [&](const BoxGrid::Point& x) {
    double r2 = 0.0;
    for (int j = 0; j < n; ++j) r2 += x[j] * x[j];
    return Complex(std::exp(-kPi * r2) - std::pow(2.0, -n) * std::exp(-kPi * r2 / 4.0));
  });
}

double rel(double a, double b) { return std::abs(a - b) / std::max(std::abs(a), std::abs(b)); }

// --- 1 ---------------------------------------------------------------------
Outcome constant_identities() {
  double worst = 0.0;
  int composition = 0, escobar = 0, xiao = 0;
  auto take = [&](const ConstantsRecord& r) {
    for (const auto& [name, v] : r.identity_residuals) {
      worst = std::max(worst, std::isfinite(v) ? v : INFINITY);
      composition += name == "composition";
      escobar += name == "escobar_half";
      xiao += name == "xiao_reduction";
    }
  };
  for (int n = 3; n <= 12; ++n) {
    for (int m = 1; m <= 2; ++m) {
      for (int i = 1; i <= 10; ++i) {
        const double a = 0.5 * m + 0.5 * (n - m) * i / 11.0;
        take(evaluate_constants(FracIndex::trace(n, m, a)));
      }
    }
    take(evaluate_constants(FracIndex::trace(n, 1, 1.0)));
    for (int i = 1; i <= 10; ++i) take(evaluate_constants(FracIndex::sobolev(n, i / 11.0)));
  }
  const bool pass = worst < 1e-12 && composition >= 200 && escobar >= 10 && xiao >= 100;
  return {pass, fmt("max residual %.2e (< 1e-12) over %d composition, %d Escobar, %d Xiao checks",
                    worst, composition, escobar, xiao)};
}

// --- 2 ---------------------------------------------------------------------
Outcome riesz_equivalence_suite() {
  const double r1c = riesz_equivalence(gaussian_difference(BoxGrid::cube(1, 1024, 40.0)), 0.25).residual;
  const double r1 = riesz_equivalence(gaussian_difference(BoxGrid::cube(1, 2048, 40.0)), 0.25).residual;
  const double r2c = riesz_equivalence(gaussian_difference(BoxGrid::cube(2, 128, 40.0)), 0.5).residual;
  const double r2 = riesz_equivalence(gaussian_difference(BoxGrid::cube(2, 256, 40.0)), 0.5).residual;
  const bool pass = r1 <= 1e-2 && r2 <= 2e-2 && r1 < r1c && r2 < r2c;
  return {pass, fmt("n=1 N=2048 residual %.2e (<= 1e-2, N=1024: %.2e); n=2 N=256^2 residual %.2e "
                    "(<= 2e-2, N=128^2: %.2e)",
                    r1, r1c, r2, r2c)};
}

// --- 3 ---------------------------------------------------------------------
Outcome sobolev_attainment() {
  const auto idx = FracIndex::sobolev(1, 0.25);
  const auto grid = BoxGrid::cube(1, 8192, 400.0);
  const auto raw = sample_extremizer(ExtremizerSpec::make(Family::sobolev, idx, 0.1), grid);
  const auto f = truncate_to_level_set(raw, std::vector<double>{0.0}, 100.0).field;
  const double ext = sobolev_quotient(f, idx).ratio;
  const double gau = sobolev_quotient(gaussian(grid), idx).ratio;
  const bool pass = ext >= 0.97 && ext <= 1.0 && gau <= 0.99;
  return {pass, fmt("extremizer ratio %.5f (in [0.97, 1]), Gaussian ratio %.5f (<= 0.99)", ext, gau)};
}

// --- 4 ---------------------------------------------------------------------
Outcome hls_attainment() {
  const auto idx = FracIndex::sobolev(1, 0.25);
  const auto grid = BoxGrid::cube(1, 4096, 400.0);
  const auto spec = ExtremizerSpec::make(Family::hls, idx, 1.0);
  const double ext = hls_quotient(sample_extremizer(spec, grid), idx).ratio;
  const double pred = hls_euler_lagrange_prediction(spec);
  double worst = 0.0;
  for (double x : {0.0, 0.3, 1.0, 2.5, 7.0, 20.0, 100.0}) {
    worst = std::max(worst, rel(hls_euler_lagrange_ratio(spec, std::vector<double>{x}), pred));
  }
  const bool pass = ext >= 0.97 && ext <= 1.0 && worst <= 0.05;
  return {pass, fmt("optimizer ratio %.5f (in [0.97, 1]); Euler-Lagrange mismatch %.2e (<= 5%%)",
                    ext, worst)};
}

// --- 5 ---------------------------------------------------------------------
Outcome trace_norm_attainment() {
  const auto idx = FracIndex::trace(2, 1, 0.75);
  const auto grid = BoxGrid::cube(2, 1024, 50.0);
  FourierTraceExtremizer fe(idx, 2.0, {}, grid.leading_axes(1));
  const double ext = trace_norm_quotient(fe.lattice_field(grid), idx).ratio;
  const double gau = trace_norm_quotient(gaussian(grid), idx).ratio;
  const bool pass = ext >= 0.95 && ext <= 1.0 && gau <= 0.98;
  return {pass, fmt("equality-form ratio %.5f (in [0.95, 1]), product Gaussian %.5f (<= 0.98)", ext,
                    gau)};
}

// --- 6 ---------------------------------------------------------------------
Outcome trace_sobolev_attainment() {
  const auto idx = FracIndex::trace(2, 1, 0.75);
  const double L = 200.0;
  const auto grid = BoxGrid::cube(2, 1024, L);
  QuadratureOptions q;
  q.rel_tol = 1e-7;
  const auto raw = sample_extremizer(ExtremizerSpec::make(Family::trace, idx, 1.0), grid, q);
  const auto f = truncate_to_level_set(raw, std::vector<double>{0.0, 0.0}, L / 4).field;
  const auto rep = trace_sobolev_quotient(f, idx);

  // ((1 + t)^2 + |x|^2)^{-1/2} up to one constant, n = 3, m = 1, alpha = 1
  const auto e = FracIndex::trace(3, 1, 1.0);
  const auto espec = ExtremizerSpec::make(Family::trace, e, 1.0);
  double lo = INFINITY, hi = -INFINITY;
  for (double a : {0.0, 0.5, 1.0, 2.0, 4.0}) {
    for (double b : {0.0, 0.5, 1.0, 2.0, 4.0}) {
      const double v = trace_extremizer(espec, std::vector<double>{a, 0.0}, std::vector<double>{b});
      const double r = v * std::sqrt((1.0 + b) * (1.0 + b) + a * a);
      lo = std::min(lo, r);
      hi = std::max(hi, r);
    }
  }
  const double spread = (hi - lo) / lo;
  const bool attained = rep.ratio >= 0.93 && rep.ratio <= 1.0;
  return {attained && spread <= 0.01,
          fmt("sampled extremizer ratio %.5f (in [0.93, 1]; N=1024^2, L=200, R=L/4, tail budget "
              "%.3f); Escobar proportionality spread %.2e (<= 1%%)",
              rep.ratio, rep.tail_budget, spread)};
}

// --- 7 ---------------------------------------------------------------------
Outcome optimizer_rediscovery() {
  const auto idx = FracIndex::sobolev(1, 0.25);
  const auto grid = BoxGrid::cube(1, 32768, 200.0);
  const auto start = random_field(grid, 42);
  const auto tr = ascend(start, idx, AscentKind::sobolev);
  const double ratio = tr.final_quotient() / sobolev_constant(1, 0.25);

  // central differences against the analytic gradient along random directions,
  // at iterates spread over the run
  double worst_scaled = 0.0, worst_plain_early = 0.0;
  std::vector<int> checkpoints = {0, 5, 10, 20, 30, tr.iterations_used};
  for (int it : checkpoints) {
    AscentConfig cfg;
    cfg.max_iters = it;
    const auto f = in_view(it == tr.iterations_used ? tr.final_field
                                                    : ascend(start, idx, AscentKind::sobolev, cfg).final_field,
                           View::frequency);
    const auto G = quotient_gradient(f, idx, AscentKind::sobolev);
    double gnorm = 0.0;
    for (std::size_t i = 0; i < G.size(); ++i) gnorm += std::norm(G[i]);
    gnorm = std::sqrt(gnorm);
    for (std::uint64_t k = 0; k < 3; ++k) {
      const auto d = in_view(random_field(grid, 1000 + 10 * it + k, 0.5), View::frequency);
      double dd = 0.0, dnorm = 0.0;
      for (std::size_t i = 0; i < d.size(); ++i) {
        dd += (std::conj(G[i]) * d[i]).real();
        dnorm += std::norm(d[i]);
      }
      dnorm = std::sqrt(dnorm);
      const double eps = 1e-5 * std::sqrt(dalpha_norm_sq(f, 0.25) / dalpha_norm_sq(d, 0.25));
      const double fd = (ascent_quotient(f.plus(d, eps), idx, AscentKind::sobolev) -
                         ascent_quotient(f.plus(d, -eps), idx, AscentKind::sobolev)) /
                        (2.0 * eps);
      worst_scaled = std::max(worst_scaled, std::abs(fd - dd) / (gnorm * dnorm));
      if (it <= 10) worst_plain_early = std::max(worst_plain_early, std::abs(fd - dd) / std::abs(dd));
    }
  }
  const auto fit = fit_extremizer(tr.final_field, idx, 0.25);
  const bool pass = ratio >= 0.99 && tr.iterations_used <= 2000 && tr.monotone() &&
                    worst_scaled <= 1e-4;
  return {pass, fmt("final ratio %.5f (>= 0.99) after %d iterations (N=32768, L=200, stop: %s); "
                    "gradient vs central differences %.1e relative to |G||d| (<= 1e-4), %.1e "
                    "relative to |dQ| over iterations 0-10; fit residual %.3f",
                    ratio, tr.iterations_used, tr.stop_reason.c_str(), worst_scaled,
                    worst_plain_early, fit.residual)};
}

// --- 8 ---------------------------------------------------------------------
Outcome structural_invariants() {
  double plancherel = 0.0;
  for (const auto& g : {BoxGrid::cube(1, 4096, 30.0), BoxGrid({128, 64}, {10.0, 7.0}),
                        BoxGrid({16, 24, 32}, {3.0, 4.0, 5.0})}) {
    const auto f = random_field(g, 11, 1.0).plus(gaussian(g));
    plancherel = std::max(plancherel, rel(l2_norm_sq_frequency(forward_ft(f)), l2_norm_sq_physical(f)));
  }

  double trace_gap = 0.0;
  for (const auto& [g, m] : std::vector<std::pair<BoxGrid, int>>{
           {BoxGrid({64, 128}, {10.0, 20.0}), 1}, {BoxGrid({16, 16, 32}, {4.0, 4.0, 8.0}), 1},
           {BoxGrid({16, 32, 32}, {4.0, 8.0, 8.0}), 2}}) {
    const auto f = random_field(g, 5, 0.7);
    const auto a = trace_physical(f, m);
    const auto b = inverse_ft(trace_fourier(f, m));
    double top = 0.0, diff = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
      top = std::max(top, std::abs(a[i]));
      diff = std::max(diff, std::abs(a[i] - b[i]));
    }
    trace_gap = std::max(trace_gap, diff / top);
  }

  double scale = 0.0;
  const auto g1 = BoxGrid::cube(1, 1024, 40.0);
  const auto g2 = BoxGrid::cube(2, 64, 16.0);
  const auto f1 = gaussian(g1).plus(random_field(g1, 3), 0.1);
  const auto f2 = gaussian(g2).plus(random_field(g2, 3), 0.1);
  const auto s = FracIndex::sobolev(1, 0.25);
  const auto t = FracIndex::trace(2, 1, 0.75);
  for (double c : {1e-3, 0.37, 25.0}) {
    scale = std::max(scale, rel(sobolev_quotient(f1.scaled(c), s).ratio, sobolev_quotient(f1, s).ratio));
    scale = std::max(scale, rel(hls_quotient(f1.scaled(c), s).ratio, hls_quotient(f1, s).ratio));
    scale = std::max(scale, rel(trace_norm_quotient(f2.scaled(c), t).ratio, trace_norm_quotient(f2, t).ratio));
    scale = std::max(scale, rel(trace_sobolev_quotient(f2.scaled(c), t).ratio,
                                trace_sobolev_quotient(f2, t).ratio));
  }

  bool monotone = true;
  AscentConfig cfg;
  cfg.max_iters = 100;
  for (std::uint64_t seed = 1; seed <= 4; ++seed) {
    monotone = monotone && ascend(random_field(BoxGrid::cube(1, 2048, 100.0), seed), s,
                                  AscentKind::sobolev, cfg).monotone();
  }
  cfg.max_iters = 20;
  monotone = monotone && ascend(random_field(BoxGrid::cube(2, 32, 10.0), 9), t,
                                AscentKind::trace_sobolev, cfg).monotone();

  const bool pass = plancherel <= 1e-10 && trace_gap <= 1e-12 && scale <= 1e-12 && monotone;
  return {pass, fmt("Plancherel %.1e (<= 1e-10), trace physical/Fourier %.1e (<= 1e-12), "
                    "scale invariance %.1e (<= 1e-12), ascent monotone: %s",
                    plancherel, trace_gap, scale, monotone ? "yes" : "no")};
}

}  // namespace

int main() {
  const std::vector<std::pair<int, std::function<Outcome()>>> suite = {
      {1, constant_identities},    {2, riesz_equivalence_suite}, {3, sobolev_attainment},
      {4, hls_attainment},         {5, trace_norm_attainment},   {6, trace_sobolev_attainment},
      {7, optimizer_rediscovery},  {8, structural_invariants},
  };
  std::printf("fractrace %s acceptance\n", FRACTRACE_VERSION);
  int failed = 0;
  for (const auto& [k, run] : suite) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = run();
    } catch (const std::exception& e) {
      o = {false, std::string("threw: ") + e.what()};
    }
    const double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::printf("criterion %d: %s  %s  [%.2f s]\n", k, o.pass ? "PASS" : "FAIL", o.detail.c_str(), s);
    std::fflush(stdout);
    failed += !o.pass;
  }
  std::printf("%d of %zu criteria pass\n", static_cast<int>(suite.size()) - failed, suite.size());
  return failed == 0 ? 0 : 1;
}
