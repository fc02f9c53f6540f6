#include <gtest/gtest.h>

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>
#include <cmath>
#include <numbers>

#include "fractrace/constants.hpp"
#include "fractrace/errors.hpp"
#include "fractrace/operators.hpp"
#include "test_support.hpp"

using namespace fractrace;
using fractrace::testing::rel_err;

namespace {
constexpr double kPi = std::numbers::pi;

SpectralField random_complex(const BoxGrid& g, std::uint64_t seed) {
  fractrace::testing::Rng rng(seed);
  std::vector<Complex> v(g.total());
  for (auto& x : v) x = Complex(rng.normal(), rng.normal());
  return SpectralField(g, std::move(v), View::physical);
}

// e^{-pi |x|^2} - 2^{-n} e^{-pi |x/2|^2}: smooth, rapidly decaying, mean zero
SpectralField gaussian_difference(const BoxGrid& g) {
  const int n = g.dim();
  return SpectralField::sample(g, [&](const BoxGrid::Point& x) {
    double r2 = 0;
    for (int j = 0; j < n; ++j) r2 += x[j] * x[j];
    return Complex(std::exp(-kPi * r2) - std::pow(2.0, -n) * std::exp(-kPi * r2 / 4.0));
  });
}

double max_diff(const SpectralField& a, const SpectralField& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}
}  // namespace

TEST(FracLaplacian, SingleModeEigenvalue) {
  const auto g = BoxGrid::cube(2, 16, 4.0);
  const double k0[2] = {0.75, -1.25};
  const auto f = SpectralField::sample(g, [&](const BoxGrid::Point& x) {
    return std::exp(Complex(0.0, 2.0 * kPi * (k0[0] * x[0] + k0[1] * x[1])));
  });
  const double k2 = k0[0] * k0[0] + k0[1] * k0[1];
  for (double a : {0.3, 1.0}) {
    const auto lf = inverse_ft(frac_laplacian(f, a));
    const double lam = std::pow(4.0 * kPi * kPi * k2, a);
    EXPECT_LT(max_diff(lf, f.scaled(lam)) / lam, 1e-12);
  }
  EXPECT_LT(max_diff(inverse_ft(frac_laplacian(f, 0.0)), f), 1e-12);
  EXPECT_THROW(frac_laplacian(f, -0.5), DomainError);
}

TEST(FracLaplacian, AlphaOneMatchesFiniteDifferences) {
  // -u'' for the bump u = exp(-1/(1 - x^2)) on |x| < 1
  auto err_at = [](std::size_t n) {
    const auto g = BoxGrid::cube(1, n, 4.0);
    auto bump = [](double x) { return std::abs(x) < 1 ? std::exp(-1.0 / (1.0 - x * x)) : 0.0; };
    const auto f = SpectralField::sample(g, [&](const BoxGrid::Point& x) { return Complex(bump(x[0])); });
    const auto lf = inverse_ft(frac_laplacian(f, 1.0));
    const double h = g.spacing(0);
    double err = 0.0;
    for (std::size_t i = 1; i + 1 < n; ++i) {
      const double fd = -(f[i + 1].real() - 2.0 * f[i].real() + f[i - 1].real()) / (h * h);
      err = std::max(err, std::abs(fd - lf[i].real()));
    }
    return err;
  };
  const double e1 = err_at(512), e2 = err_at(1024);
  EXPECT_LT(e1, 0.05);
  EXPECT_NEAR(e1 / e2, 4.0, 0.3);  // second order
}

TEST(FracLaplacian, QuadraticFormIsDalphaNormAndRealNonNegative) {
  for (const auto& g : {BoxGrid::cube(1, 64, 3.0), BoxGrid({16, 8}, {2.0, 5.0}),
                        BoxGrid::cube(3, 8, 1.0)}) {
    const auto f = random_complex(g, g.total());
    for (double a : {0.0, 0.25, 0.9, 1.6}) {
      const Complex q = laplacian_quadratic_form(f, a);
      EXPECT_LE(std::abs(q.imag()), 1e-12 * std::abs(q));
      EXPECT_GE(q.real(), 0.0);
      EXPECT_LT(rel_err(q.real(), dalpha_norm_sq(f, a)), 1e-12);
    }
  }
}

TEST(FracLaplacian, MultiplierComposition) {
  const auto g = BoxGrid({32, 16}, {3.0, 2.0});
  const auto f = random_complex(g, 4);
  const auto ab = frac_laplacian(inverse_ft(frac_laplacian(f, 0.3)), 0.45);
  const auto direct = frac_laplacian(f, 0.75);
  EXPECT_LT(max_diff(ab, direct) / direct.max_abs(), 1e-11);
}

TEST(RieszPotential, SingleModeAndInverse) {
  const auto g = BoxGrid::cube(1, 32, 2.0);
  const double k0 = 2.5;
  const auto f = SpectralField::sample(g, [&](const BoxGrid::Point& x) {
    return std::exp(Complex(0.0, 2.0 * kPi * k0 * x[0]));
  });
  const auto r = inverse_ft(riesz_potential(f, 0.25));
  EXPECT_LT(max_diff(r, f.scaled(std::pow(k0, -0.5))), 1e-12);

  const auto h = random_complex(g, 8);
  const auto hh = forward_ft(h);
  const auto mean_free = inverse_ft(hh.mapped([](std::size_t i, Complex v) {
    return i == 0 ? Complex(0.0) : v;
  }));
  const double a = 0.35;
  const auto back = inverse_ft(frac_laplacian(inverse_ft(riesz_potential(mean_free, a)), a))
                        .scaled(std::pow(2.0 * kPi, -2.0 * a));
  EXPECT_LT(max_diff(back, mean_free) / mean_free.max_abs(), 1e-10);
  EXPECT_THROW(riesz_potential(h, 0.5), DomainError);
  EXPECT_THROW(riesz_potential(h, 0.0), DomainError);
}

TEST(RieszPotential, MatchesRealSpaceConvolutionQuadrature) {
  const double a = 0.25;
  const auto g = BoxGrid::cube(1, 4096, 160.0);
  const auto gd = gaussian_difference(g);
  const auto pot = inverse_ft(riesz_potential(gd, a));
  const double c = riesz_kernel_prefactor(1, a);
  auto gfun = [](double y) { return std::exp(-kPi * y * y) - 0.5 * std::exp(-kPi * y * y / 4.0); };
  boost::math::quadrature::tanh_sinh<double> fin;
  boost::math::quadrature::exp_sinh<double> tail;
  for (std::size_t i : {g.origin_index(0), g.origin_index(0) + 13, g.origin_index(0) + 40}) {
    const double x = g.coordinate(0, i);
    double total = 0.0;
    for (int side : {1, -1}) {
      auto h = [&](double s) { return std::pow(s, -(1.0 - 2.0 * a)) * gfun(x + side * s); };
      total += fin.integrate([&](double, double xc) { return h(xc < 0 ? -xc : 10.0 - xc); }, 0.0, 10.0);
      total += tail.integrate([&](double s) { return h(10.0 + s); });
    }
    const double want = c * total;
    EXPECT_LT(std::abs(pot[i].real() - want) / std::abs(want), 1e-3) << "x=" << x;
  }
}

TEST(CellIntegral, ClosedFormsAndQuadrature) {
  // 1-D: 2 (h/2)^{1-p} / (1-p)
  for (double p : {0.2, 0.5, 0.9}) {
    const double h = 0.3;
    EXPECT_LT(rel_err(cell_singular_integral({h}, p), 2.0 * std::pow(h / 2, 1 - p) / (1 - p)),
              1e-12);
  }
  // 2-D square against polar quadrature of the quarter cell
  boost::math::quadrature::tanh_sinh<double> rule;
  for (double p : {0.5, 1.0, 1.5}) {
    const double hx = 0.4, hy = 0.25;
    auto corner = [&](double a, double b) {
      // integral over [0,a]x[0,b] split along the diagonal
      const double t = std::atan2(b, a);
      auto piece = [&](double lim, double lo, double hi, bool cosine) {
        return rule.integrate([&](double th) {
          const double rmax = lim / (cosine ? std::cos(th) : std::sin(th));
          return std::pow(rmax, 2.0 - p) / (2.0 - p);
        }, lo, hi);
      };
      return piece(a, 0.0, t, true) + piece(b, t, kPi / 2, false);
    };
    const double want = 4.0 * corner(hx / 2, hy / 2);
    EXPECT_LT(rel_err(cell_singular_integral({hx, hy}, p), want), 1e-10) << p;
  }
  EXPECT_THROW(cell_singular_integral({0.1}, 1.0), DomainError);
}

TEST(RieszDoubleSum, FftEqualsDirectDoubleSum) {
  const auto g = BoxGrid({16, 12}, {3.0, 2.0});
  fractrace::testing::Rng rng(77);
  std::vector<Complex> v(g.total());
  for (auto& x : v) x = rng.normal();
  const SpectralField f(g, v, View::physical);
  const double a = 0.6;
  const auto table = riesz_kernel_table(g, a);
  double direct = 0.0;
  for (std::size_t i = 0; i < g.total(); ++i) {
    const auto ii = g.unflatten(i);
    for (std::size_t j = 0; j < g.total(); ++j) {
      const auto jj = g.unflatten(j);
      BoxGrid::Index d{};
      for (int ax = 0; ax < 2; ++ax) d[ax] = (ii[ax] + g.size(ax) - jj[ax]) % g.size(ax);
      direct += v[i].real() * v[j].real() * table[g.flatten(d)];
    }
  }
  direct *= g.cell_volume() * g.cell_volume();
  EXPECT_LT(rel_err(riesz_double_sum(f, a), direct), 1e-12);
}

TEST(RieszKernelTable, MinimumImageSymmetry) {
  const auto g = BoxGrid::cube(1, 16, 4.0);
  const auto t = riesz_kernel_table(g, 0.3);
  for (std::size_t i = 1; i < 16; ++i) EXPECT_DOUBLE_EQ(t[i], t[16 - i]);
  for (std::size_t i = 1; i < 8; ++i) EXPECT_GT(t[i], t[i + 1]);
  EXPECT_GT(t[0], t[1]);
}

TEST(RieszEquivalence, OneDimension) {
  const auto coarse = riesz_equivalence(gaussian_difference(BoxGrid::cube(1, 1024, 40.0)), 0.25);
  const auto fine = riesz_equivalence(gaussian_difference(BoxGrid::cube(1, 2048, 40.0)), 0.25);
  EXPECT_LE(fine.residual, 1e-2);
  EXPECT_LT(fine.residual, coarse.residual * 1.1);
}

TEST(RieszEquivalence, TwoDimensionsDecreasesWithN) {
  std::vector<double> res;
  for (std::size_t n : {64, 128, 256}) {
    res.push_back(riesz_equivalence(gaussian_difference(BoxGrid::cube(2, n, 40.0)), 0.5).residual);
  }
  EXPECT_LE(res[2], 2e-2);
  EXPECT_LT(res[1], res[0] * 1.1);
  EXPECT_LT(res[2], res[1] * 1.1);
}

TEST(RieszEquivalence, AmplitudeInvarianceAndErrors) {
  const auto g = gaussian_difference(BoxGrid::cube(1, 256, 20.0));
  EXPECT_NEAR(riesz_equivalence_check(g.scaled(-3.7), 0.3), riesz_equivalence_check(g, 0.3), 1e-13);
  EXPECT_THROW(riesz_equivalence(SpectralField::zeros(g.grid(), View::physical), 0.3),
               DegenerateInputError);
  EXPECT_THROW(riesz_equivalence(g, 0.5), DomainError);
}

TEST(Trace, PhysicalExamples) {
  const auto g = BoxGrid({16, 8}, {4.0, 2.0});
  const auto c = trace_physical(SpectralField::sample(g, [](const BoxGrid::Point&) { return Complex(2.5); }), 1);
  for (std::size_t i = 0; i < c.size(); ++i) EXPECT_EQ(c[i], Complex(2.5));
  auto u = [](double x) { return std::sin(x) + 2.0; };
  auto v = [](double y) { return std::cos(3.0 * y) + 0.5; };
  const auto sep = trace_physical(SpectralField::sample(g, [&](const BoxGrid::Point& x) {
    return Complex(u(x[0]) * v(x[1]));
  }), 1);
  for (std::size_t i = 0; i < sep.size(); ++i) {
    EXPECT_NEAR(sep[i].real(), u(sep.grid().coordinate(0, i)) * v(0.0), 1e-15);
  }
  const auto gg = trace_physical(SpectralField::sample(g, [](const BoxGrid::Point& x) {
    return Complex(std::exp(-kPi * (x[0] * x[0] + x[1] * x[1])));
  }), 1);
  for (std::size_t i = 0; i < gg.size(); ++i) {
    const double x = gg.grid().coordinate(0, i);
    EXPECT_NEAR(gg[i].real(), std::exp(-kPi * x * x), 1e-15);
  }
  EXPECT_THROW(trace_physical(c, 1), DomainError);  // m >= n
}

TEST(Trace, FourierSingleModeWeight) {
  const BoxGrid g({8, 8}, {2.0, 4.0});
  std::vector<Complex> v(g.total(), 0.0);
  const std::size_t k1 = g.storage_index(0, 3), k2 = g.storage_index(1, -2);
  v[k1 * 8 + k2] = Complex(1.5, -0.5);
  const auto tr = trace_fourier(SpectralField(g, v, View::frequency), 1);
  for (std::size_t i = 0; i < tr.size(); ++i) {
    const Complex want = i == k1 ? Complex(1.5, -0.5) * 0.25 : Complex(0.0);
    EXPECT_NEAR(std::abs(tr[i] - want), 0.0, 1e-15);
  }
}

TEST(Trace, FourierAndPhysicalAgreeExactly) {
  for (const auto& [g, m] : std::vector<std::pair<BoxGrid, int>>{
           {BoxGrid({32, 16}, {3.0, 5.0}), 1},
           {BoxGrid({8, 6, 10}, {1.0, 2.0, 3.0}), 1},
           {BoxGrid({8, 6, 10}, {1.0, 2.0, 3.0}), 2}}) {
    const auto f = random_complex(g, 500 + m);
    const auto a = inverse_ft(trace_fourier(f, m));
    const auto b = trace_physical(f, m);
    EXPECT_LT(max_diff(a, b) / b.max_abs(), 1e-12);
    EXPECT_EQ(TraceSlice::make(g, m).target_grid, g.leading_axes(g.dim() - m));
  }
}
