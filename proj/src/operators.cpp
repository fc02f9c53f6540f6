#include "fractrace/operators.hpp"

#include <boost/math/quadrature/gauss.hpp>
#include <cmath>
#include <numbers>

#include "fft.hpp"
#include "fractrace/constants.hpp"
#include "fractrace/errors.hpp"
#include "summation.hpp"

namespace fractrace {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

void require_order(const BoxGrid& grid, double alpha, const char* what) {
  if (!(alpha > 0.0) || alpha >= 0.5 * grid.dim()) {
    throw DomainError(std::string(what) + ": requires 0 < alpha < n/2");
  }
}

using Gauss = boost::math::quadrature::gauss<double, 30>;

// int over the face {z_axis = a_axis, |z_j| <= a_j} of |z|^{-p}.
double face_integral(const std::vector<double>& half, int axis, double p) {
  const int d = static_cast<int>(half.size());
  std::vector<int> others;
  for (int j = 0; j < d; ++j) {
    if (j != axis) others.push_back(j);
  }
  const double a2 = half[axis] * half[axis];
  auto radial = [p](double r2) { return std::pow(r2, -0.5 * p); };
  if (others.empty()) return radial(a2);
  if (others.size() == 1) {
    const double b = half[others[0]];
    return Gauss::integrate([&](double u) { return radial(a2 + u * u); }, -b, b);
  }
  const double b = half[others[0]];
  const double c = half[others[1]];
  return Gauss::integrate(
      [&](double u) {
        return Gauss::integrate([&](double v) { return radial(a2 + u * u + v * v); }, -c, c);
      },
      -b, b);
}

}  // namespace

SpectralField frac_laplacian(const SpectralField& f, double alpha) {
  if (!(alpha >= 0.0) || !std::isfinite(alpha)) {
    throw DomainError("frac_laplacian: alpha must be >= 0");
  }
  const auto fh = in_view(f, View::frequency);
  const auto& grid = fh.grid();
  return fh.mapped([&](std::size_t i, Complex c) {
    if (alpha == 0.0) return c;
    const double k2 = grid.wavevector_norm_sq(i);
    return k2 == 0.0 ? Complex(0.0) : c * std::pow(kTwoPi * kTwoPi * k2, alpha);
  });
}

SpectralField riesz_potential(const SpectralField& g, double alpha) {
  require_order(g.grid(), alpha, "riesz_potential");
  const auto gh = in_view(g, View::frequency);
  const auto& grid = gh.grid();
  return gh.mapped([&](std::size_t i, Complex c) {
    const double k2 = grid.wavevector_norm_sq(i);
    return k2 == 0.0 ? Complex(0.0) : c * std::pow(k2, -alpha);
  });
}

Complex laplacian_quadratic_form(const SpectralField& f, double alpha) {
  const auto fh = in_view(f, View::frequency);
  const auto lf = frac_laplacian(fh, alpha);
  detail::CompensatedSum re, im;
  for (std::size_t i = 0; i < fh.size(); ++i) {
    const Complex t = std::conj(fh[i]) * lf[i];
    re.add(t.real());
    im.add(t.imag());
  }
  const double dk = fh.grid().freq_cell_volume();
  return {dk * re.value(), dk * im.value()};
}

double riesz_fourier_energy(const SpectralField& g, double alpha) {
  require_order(g.grid(), alpha, "riesz_fourier_energy");
  const auto gh = in_view(g, View::frequency);
  const auto& grid = gh.grid();
  detail::CompensatedSum sum;
  for (std::size_t i = 0; i < gh.size(); ++i) {
    const double k2 = grid.wavevector_norm_sq(i);
    if (k2 == 0.0) continue;
    sum.add(std::norm(gh[i]) * std::pow(k2, -alpha));
  }
  return grid.freq_cell_volume() * sum.value();
}

double cell_singular_integral(const std::vector<double>& spacings, double p) {
  const int d = static_cast<int>(spacings.size());
  if (d < 1 || d > 3) throw DomainError("cell_singular_integral: dimension must be 1..3");
  if (!(p > 0.0) || !(p < d)) throw DomainError("cell_singular_integral: requires 0 < p < d");
  std::vector<double> half(spacings);
  for (auto& h : half) h *= 0.5;
  double flux = 0.0;
  for (int axis = 0; axis < d; ++axis) {
    // two opposite faces, each with outward normal component z.nu = half[axis]
    flux += 2.0 * half[axis] * face_integral(half, axis, p);
  }
  return flux / (d - p);
}

std::vector<double> riesz_kernel_table(const BoxGrid& grid, double alpha) {
  require_order(grid, alpha, "riesz_kernel_table");
  const int d = grid.dim();
  const double p = d - 2.0 * alpha;
  std::vector<double> h(d);
  for (int j = 0; j < d; ++j) h[j] = grid.spacing(j);

  std::vector<double> table(grid.total());
  for (std::size_t flat = 0; flat < table.size(); ++flat) {
    const auto idx = grid.unflatten(flat);
    double z[BoxGrid::kMaxDim] = {0.0, 0.0, 0.0};
    double r2 = 0.0;
    for (int j = 0; j < d; ++j) {
      z[j] = static_cast<double>(grid.signed_index(j, idx[j])) * h[j];
      r2 += z[j] * z[j];
    }
    if (r2 == 0.0) continue;
    const double base = std::pow(r2, -0.5 * p);
    double curvature = 0.0;
    for (int j = 0; j < d; ++j) {
      // d^2/dz_j^2 |z|^{-p} = -p |z|^{-p-2} + p (p+2) z_j^2 |z|^{-p-4}
      curvature += h[j] * h[j] / 24.0 * (-p + p * (p + 2.0) * z[j] * z[j] / r2);
    }
    table[flat] = base * (1.0 + curvature / r2);
  }
  table[0] = cell_singular_integral(h, p) / grid.cell_volume();
  return table;
}

double riesz_double_sum(const SpectralField& g, double alpha) {
  const auto gx = in_view(g, View::physical);
  const auto& grid = gx.grid();
  const auto table = riesz_kernel_table(grid, alpha);

  std::vector<Complex> kernel(table.begin(), table.end());
  std::vector<Complex> conv(gx.values().begin(), gx.values().end());
  detail::dft_inplace(kernel, grid.sizes(), -1);
  detail::dft_inplace(conv, grid.sizes(), -1);
  for (std::size_t i = 0; i < conv.size(); ++i) conv[i] *= kernel[i];
  detail::dft_inplace(conv, grid.sizes(), +1);

  // conv[x] / total = sum_y K(x - y) g(y)
  const double dx = grid.cell_volume();
  const double norm = 1.0 / static_cast<double>(grid.total());
  detail::CompensatedSum sum;
  for (std::size_t i = 0; i < conv.size(); ++i) {
    sum.add((std::conj(gx[i]) * conv[i]).real());
  }
  return dx * dx * norm * sum.value();
}

RieszEquivalence riesz_equivalence(const SpectralField& g, double alpha) {
  const auto& grid = g.grid();
  require_order(grid, alpha, "riesz_equivalence");
  RieszEquivalence out;
  out.fourier_side = riesz_fourier_energy(g, alpha);
  if (!(out.fourier_side > 0.0)) {
    throw DegenerateInputError("riesz_equivalence: Fourier side is not positive");
  }
  out.physical_side = riesz_kernel_prefactor(grid.dim(), alpha) * riesz_double_sum(g, alpha);
  out.residual = std::abs(out.fourier_side - out.physical_side) / std::abs(out.fourier_side);
  return out;
}

TraceSlice TraceSlice::make(const BoxGrid& source, int m) {
  if (m < 1 || m >= source.dim()) {
    throw DomainError("trace: codimension must satisfy 1 <= m < n");
  }
  return TraceSlice{source, source.leading_axes(source.dim() - m), m};
}

SpectralField trace_physical(const SpectralField& f, int m) {
  const auto slice = TraceSlice::make(f.grid(), m);
  const auto fx = in_view(f, View::physical);
  const auto& src = slice.source_grid;
  const auto& dst = slice.target_grid;
  std::vector<Complex> out(dst.total());
  for (std::size_t t = 0; t < out.size(); ++t) {
    const auto ti = dst.unflatten(t);
    BoxGrid::Index si{};
    for (int j = 0; j < dst.dim(); ++j) si[j] = ti[j];
    for (int j = dst.dim(); j < src.dim(); ++j) si[j] = src.origin_index(j);
    out[t] = fx[src.flatten(si)];
  }
  return SpectralField(dst, std::move(out), View::physical);
}

SpectralField trace_fourier(const SpectralField& f, int m) {
  const auto slice = TraceSlice::make(f.grid(), m);
  const auto fh = in_view(f, View::frequency);
  const auto& src = slice.source_grid;
  const auto& dst = slice.target_grid;
  // Row-major layout: the traced axes are the trailing ones, so each target
  // coefficient owns one contiguous block of the source.
  const std::size_t block = src.total() / dst.total();
  double dk2 = 1.0;
  for (int j = dst.dim(); j < src.dim(); ++j) dk2 /= src.length(j);
  std::vector<Complex> out(dst.total());
  for (std::size_t t = 0; t < out.size(); ++t) {
    detail::CompensatedSum re, im;
    for (std::size_t b = 0; b < block; ++b) {
      const Complex c = fh[t * block + b];
      re.add(c.real());
      im.add(c.imag());
    }
    out[t] = dk2 * Complex(re.value(), im.value());
  }
  return SpectralField(dst, std::move(out), View::frequency);
}

}  // namespace fractrace
