#include "fractrace/field.hpp"

#include <cmath>
#include <cstring>
#include <istream>
#include <numbers>
#include <random>
#include <ostream>
#include <sstream>
#include <string>

#include "fft.hpp"
#include "fractrace/errors.hpp"
#include "summation.hpp"

namespace fractrace {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// (-1)^{sum_j s_j} for the signed frequency indices of a flat storage index.
// This is the phase exp(2 pi i (L/2).k) that moves the DFT origin from x = -L/2
// to the box centre.
double centering_sign(const BoxGrid& grid, std::size_t flat) {
  const auto idx = grid.unflatten(flat);
  long parity = 0;
  for (int j = 0; j < grid.dim(); ++j) parity += grid.signed_index(j, idx[j]);
  return (parity % 2 == 0) ? 1.0 : -1.0;
}

std::vector<double> parse_list(const std::string& s) {
  std::vector<double> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(std::stod(item));
  return out;
}

}  // namespace

const char* to_string(View v) { return v == View::physical ? "physical" : "frequency"; }

SpectralField::SpectralField(BoxGrid grid, std::vector<Complex> values, View view)
    : grid_(std::move(grid)), values_(std::move(values)), view_(view) {
  if (values_.size() != grid_.total()) {
    throw DomainError("SpectralField: value count does not match grid");
  }
}

SpectralField SpectralField::sample(const BoxGrid& grid,
                                    const std::function<Complex(const BoxGrid::Point&)>& fn) {
  std::vector<Complex> v(grid.total());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = fn(grid.point(i));
  return SpectralField(grid, std::move(v), View::physical);
}

SpectralField SpectralField::from_coefficients(
    const BoxGrid& grid, const std::function<Complex(const BoxGrid::Point&)>& fn) {
  std::vector<Complex> v(grid.total());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = fn(grid.wavevector(i));
  return SpectralField(grid, std::move(v), View::frequency);
}

SpectralField SpectralField::zeros(const BoxGrid& grid, View view) {
  return SpectralField(grid, std::vector<Complex>(grid.total()), view);
}

SpectralField SpectralField::scaled(Complex c) const {
  std::vector<Complex> v(values_);
  for (auto& x : v) x *= c;
  return SpectralField(grid_, std::move(v), view_);
}

SpectralField SpectralField::mapped(const std::function<Complex(std::size_t, Complex)>& fn) const {
  std::vector<Complex> v(values_.size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = fn(i, values_[i]);
  return SpectralField(grid_, std::move(v), view_);
}

SpectralField SpectralField::plus(const SpectralField& other, Complex weight) const {
  if (!(other.grid_ == grid_) || other.view_ != view_) {
    throw DomainError("SpectralField::plus: grid or view mismatch");
  }
  std::vector<Complex> v(values_);
  for (std::size_t i = 0; i < v.size(); ++i) v[i] += weight * other.values_[i];
  return SpectralField(grid_, std::move(v), view_);
}

bool SpectralField::is_real(double tol) const {
  if (view_ != View::physical) throw DomainError("is_real: physical view required");
  double worst_im = 0.0;
  for (const auto& x : values_) worst_im = std::max(worst_im, std::abs(x.imag()));
  return worst_im <= tol * max_abs();
}

double SpectralField::max_abs() const {
  double m = 0.0;
  for (const auto& x : values_) m = std::max(m, std::abs(x));
  return m;
}

SpectralField forward_ft(const SpectralField& f) {
  if (f.view() != View::physical) throw DomainError("forward_ft: field is not physical");
  const auto& grid = f.grid();
  std::vector<Complex> v(f.values().begin(), f.values().end());
  detail::dft_inplace(v, grid.sizes(), -1);
  const double dx = grid.cell_volume();
  for (std::size_t i = 0; i < v.size(); ++i) v[i] *= dx * centering_sign(grid, i);
  return SpectralField(grid, std::move(v), View::frequency);
}

SpectralField inverse_ft(const SpectralField& f) {
  if (f.view() != View::frequency) throw DomainError("inverse_ft: field is not in frequency view");
  const auto& grid = f.grid();
  std::vector<Complex> v(f.values().begin(), f.values().end());
  const double dk = grid.freq_cell_volume();
  for (std::size_t i = 0; i < v.size(); ++i) v[i] *= dk * centering_sign(grid, i);
  detail::dft_inplace(v, grid.sizes(), +1);
  return SpectralField(grid, std::move(v), View::physical);
}

SpectralField in_view(const SpectralField& f, View view) {
  if (f.view() == view) return f;
  return view == View::frequency ? forward_ft(f) : inverse_ft(f);
}

double dalpha_norm_sq(const SpectralField& f, double alpha) {
  if (!(alpha >= 0.0) || !std::isfinite(alpha)) {
    throw DomainError("dalpha_norm_sq: alpha must be >= 0");
  }
  const auto fh = in_view(f, View::frequency);
  const auto& grid = fh.grid();
  detail::CompensatedSum sum;
  for (std::size_t i = 0; i < fh.size(); ++i) {
    const double a2 = std::norm(fh[i]);
    if (alpha == 0.0) {
      sum.add(a2);
      continue;
    }
    const double k2 = grid.wavevector_norm_sq(i);
    if (k2 == 0.0) continue;
    sum.add(a2 * std::pow(kTwoPi * kTwoPi * k2, alpha));
  }
  return grid.freq_cell_volume() * sum.value();
}

double lp_norm(const SpectralField& f, double p) {
  if (!(p >= 1.0) || !std::isfinite(p)) throw DomainError("lp_norm: p must be >= 1");
  const auto fx = in_view(f, View::physical);
  detail::CompensatedSum sum;
  for (const auto& x : fx.values()) sum.add(std::pow(std::abs(x), p));
  return std::pow(fx.grid().cell_volume() * sum.value(), 1.0 / p);
}

double l2_norm_sq_physical(const SpectralField& f) {
  const auto fx = in_view(f, View::physical);
  detail::CompensatedSum sum;
  for (const auto& x : fx.values()) sum.add(std::norm(x));
  return fx.grid().cell_volume() * sum.value();
}

double l2_norm_sq_frequency(const SpectralField& f) {
  const auto fh = in_view(f, View::frequency);
  detail::CompensatedSum sum;
  for (const auto& x : fh.values()) sum.add(std::norm(x));
  return fh.grid().freq_cell_volume() * sum.value();
}

double sobolev_exponent(const FracIndex& idx) {
  const auto checked = FracIndex::make(idx.n, idx.m, idx.alpha);
  const double denom = checked.n - 2.0 * checked.alpha;
  return 2.0 * (checked.n - checked.m) / denom;
}

void write_csv(const SpectralField& f, std::ostream& out) {
  const auto& g = f.grid();
  out << "# fractrace-field v1\n# view=" << to_string(f.view()) << "\n# sizes=";
  for (int j = 0; j < g.dim(); ++j) out << (j ? "," : "") << g.size(j);
  out << "\n# lengths=";
  char buf[64];
  for (int j = 0; j < g.dim(); ++j) {
    std::snprintf(buf, sizeof buf, "%.17g", g.length(j));
    out << (j ? "," : "") << buf;
  }
  out << "\nindex,re,im\n";
  for (std::size_t i = 0; i < f.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%.17g,%.17g", f[i].real(), f[i].imag());
    out << i << ',' << buf << '\n';
  }
}

SpectralField read_csv(std::istream& in) {
  std::string line;
  std::string view_s;
  std::vector<double> sizes_d, lengths;
  bool magic = false;
  while (std::getline(in, line)) {
    if (line.rfind("# fractrace-field v1", 0) == 0) {
      magic = true;
    } else if (line.rfind("# view=", 0) == 0) {
      view_s = line.substr(7);
    } else if (line.rfind("# sizes=", 0) == 0) {
      sizes_d = parse_list(line.substr(8));
    } else if (line.rfind("# lengths=", 0) == 0) {
      lengths = parse_list(line.substr(10));
    } else if (line == "index,re,im") {
      break;
    }
  }
  if (!magic || sizes_d.empty()) throw DomainError("read_csv: missing field header");
  std::vector<std::size_t> sizes(sizes_d.begin(), sizes_d.end());
  BoxGrid grid(sizes, lengths);
  std::vector<Complex> v(grid.total());
  std::size_t rows = 0;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string a, b, c;
    std::getline(ss, a, ',');
    std::getline(ss, b, ',');
    std::getline(ss, c, ',');
    const auto i = static_cast<std::size_t>(std::stoull(a));
    if (i >= v.size()) throw DomainError("read_csv: index out of range");
    v[i] = Complex(std::stod(b), std::stod(c));
    ++rows;
  }
  if (rows != v.size()) throw DomainError("read_csv: row count does not match grid");
  const View view = view_s == "frequency" ? View::frequency : View::physical;
  return SpectralField(std::move(grid), std::move(v), view);
}

void write_binary(const SpectralField& f, std::ostream& out) {
  const auto& g = f.grid();
  out.write("FTFIELD1", 8);
  const std::uint32_t view = f.view() == View::physical ? 0 : 1;
  const std::uint32_t dim = static_cast<std::uint32_t>(g.dim());
  out.write(reinterpret_cast<const char*>(&view), sizeof view);
  out.write(reinterpret_cast<const char*>(&dim), sizeof dim);
  for (int j = 0; j < g.dim(); ++j) {
    const std::uint64_t n = g.size(j);
    out.write(reinterpret_cast<const char*>(&n), sizeof n);
  }
  for (int j = 0; j < g.dim(); ++j) {
    const double l = g.length(j);
    out.write(reinterpret_cast<const char*>(&l), sizeof l);
  }
  out.write(reinterpret_cast<const char*>(f.values().data()),
            static_cast<std::streamsize>(f.size() * sizeof(Complex)));
}

SpectralField read_binary(std::istream& in) {
  char magic[8];
  in.read(magic, 8);
  if (!in || std::memcmp(magic, "FTFIELD1", 8) != 0) {
    throw DomainError("read_binary: bad magic");
  }
  std::uint32_t view = 0, dim = 0;
  in.read(reinterpret_cast<char*>(&view), sizeof view);
  in.read(reinterpret_cast<char*>(&dim), sizeof dim);
  if (!in || dim < 1 || dim > BoxGrid::kMaxDim) throw DomainError("read_binary: bad header");
  std::vector<std::size_t> sizes(dim);
  std::vector<double> lengths(dim);
  for (auto& n : sizes) {
    std::uint64_t v = 0;
    in.read(reinterpret_cast<char*>(&v), sizeof v);
    n = v;
  }
  for (auto& l : lengths) in.read(reinterpret_cast<char*>(&l), sizeof l);
  BoxGrid grid(sizes, lengths);
  std::vector<Complex> v(grid.total());
  in.read(reinterpret_cast<char*>(v.data()), static_cast<std::streamsize>(v.size() * sizeof(Complex)));
  if (!in) throw DomainError("read_binary: truncated payload");
  return SpectralField(std::move(grid), std::move(v), view == 0 ? View::physical : View::frequency);
}

SpectralField hermitian_projection(const SpectralField& fh) {
  if (fh.view() != View::frequency) {
    throw DomainError("hermitian_projection: field is not in frequency view");
  }
  const auto& grid = fh.grid();
  std::vector<Complex> out(fh.size());
  for (std::size_t i = 0; i < fh.size(); ++i) {
    auto idx = grid.unflatten(i);
    for (int j = 0; j < grid.dim(); ++j) idx[j] = (grid.size(j) - idx[j]) % grid.size(j);
    out[i] = 0.5 * (fh[i] + std::conj(fh[grid.flatten(idx)]));
  }
  return SpectralField(grid, std::move(out), View::frequency);
}

SpectralField random_field(const BoxGrid& grid, std::uint64_t seed, double band_fraction) {
  if (!(band_fraction > 0.0 && band_fraction <= 1.0)) {
    throw DomainError("random_field: band_fraction must lie in (0, 1]");
  }
  std::mt19937_64 engine(seed);
  auto uniform = [&] {
    // 53 random mantissa bits in (0, 1)
    return (static_cast<double>(engine() >> 11) + 0.5) * 0x1.0p-53;
  };
  std::vector<Complex> coef(grid.total());
  for (std::size_t i = 0; i < coef.size(); ++i) {
    const double r = std::sqrt(-2.0 * std::log(uniform()));
    const double t = 2.0 * std::numbers::pi * uniform();
    const auto idx = grid.unflatten(i);
    bool inside = i != 0;
    for (int j = 0; j < grid.dim(); ++j) {
      const double limit = band_fraction * 0.5 * static_cast<double>(grid.size(j));
      if (std::abs(static_cast<double>(grid.signed_index(j, idx[j]))) >= limit) inside = false;
    }
    coef[i] = inside ? Complex(r * std::cos(t), r * std::sin(t)) : Complex(0.0);
  }
  auto fh = hermitian_projection(SpectralField(grid, std::move(coef), View::frequency));
  auto fx = inverse_ft(fh);
  return fx.mapped([](std::size_t, Complex v) { return Complex(v.real(), 0.0); });
}

}  // namespace fractrace
