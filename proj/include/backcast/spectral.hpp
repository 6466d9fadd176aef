#pragma once

// Truncated-line Fourier analysis.
//
// The real line is replaced by the periodic interval [-L, L) sampled at N
// uniform nodes. The continuous transform
//
//   f^(xi) = (2 pi)^{-1/2} int f(x) e^{-i xi x} dx
//
// is realized as the quadrature sum
//
//   c_k = dx / sqrt(2 pi) * sum_j f_j e^{-i xi_k x_j},   xi_k = k pi / L,
//
// for k = -N/2 .. N/2-1, so the discrete norms below satisfy Parseval
// exactly (dx * dxi * N = 2 pi). Callers are expected to use functions that
// have decayed below 1e-14 at |x| = L; the periodic wrap is otherwise
// visible.

#include <backcast/detail/fft.hpp>
#include <backcast/errors.hpp>

#include <charconv>
#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdio>
#include <istream>
#include <numbers>
#include <ostream>
#include <span>
#include <string>
#include <vector>

namespace backcast {

class Grid {
 public:
  Grid(double half_width, std::size_t n_points) : half_width_(half_width), n_(n_points) {
    if (!(std::isfinite(half_width) && half_width > 0.0)) {
      throw DomainError("grid half-width must be positive and finite");
    }
    if (n_points < 8 || n_points % 2 != 0) {
      throw DomainError("grid point count must be even and >= 8");
    }
  }

  double half_width() const noexcept { return half_width_; }
  std::size_t size() const noexcept { return n_; }
  double dx() const noexcept { return 2.0 * half_width_ / static_cast<double>(n_); }
  double dxi() const noexcept { return std::numbers::pi / half_width_; }

  double node(std::size_t j) const noexcept {
    return -half_width_ + static_cast<double>(j) * dx();
  }

  /// Frequency of coefficient slot `k`; slots run in monotone order -N/2 .. N/2-1.
  double freq(std::size_t k) const noexcept {
    return (static_cast<double>(k) - static_cast<double>(n_ / 2)) * dxi();
  }

  /// Largest |xi| on the grid (the unpaired -N/2 mode).
  double max_freq() const noexcept { return static_cast<double>(n_ / 2) * dxi(); }

  std::vector<double> nodes() const {
    std::vector<double> x(n_);
    for (std::size_t j = 0; j < n_; ++j) x[j] = node(j);
    return x;
  }

  std::vector<double> freqs() const {
    std::vector<double> xi(n_);
    for (std::size_t k = 0; k < n_; ++k) xi[k] = freq(k);
    return xi;
  }

  friend bool operator==(const Grid&, const Grid&) = default;

 private:
  double half_width_;
  std::size_t n_;
};

/// Real samples of a profile on a grid.
class Field {
 public:
  Field(Grid grid, std::vector<double> values) : grid_(grid), values_(std::move(values)) {
    if (values_.size() != grid_.size()) throw DomainError("field length does not match grid");
    for (double v : values_) {
      if (!std::isfinite(v)) throw DomainError("field contains a non-finite value");
    }
  }

  static Field zeros(Grid grid) { return Field(grid, std::vector<double>(grid.size(), 0.0)); }

  template <class F>
  static Field sample(Grid grid, F&& f) {
    std::vector<double> v(grid.size());
    for (std::size_t j = 0; j < v.size(); ++j) v[j] = f(grid.node(j));
    return Field(grid, std::move(v));
  }

  const Grid& grid() const noexcept { return grid_; }
  std::span<const double> values() const noexcept { return values_; }
  double operator[](std::size_t j) const { return values_[j]; }
  std::size_t size() const noexcept { return values_.size(); }

 private:
  Grid grid_;
  std::vector<double> values_;
};

/// Fourier coefficients in monotone frequency order.
class Spectrum {
 public:
  Spectrum(Grid grid, std::vector<std::complex<double>> coeffs)
      : grid_(grid), coeffs_(std::move(coeffs)) {
    if (coeffs_.size() != grid_.size()) throw DomainError("spectrum length does not match grid");
    for (const auto& c : coeffs_) {
      if (!std::isfinite(c.real()) || !std::isfinite(c.imag())) {
        throw DomainError("spectrum contains a non-finite coefficient");
      }
    }
  }

  const Grid& grid() const noexcept { return grid_; }
  std::span<const std::complex<double>> coeffs() const noexcept { return coeffs_; }
  const std::complex<double>& operator[](std::size_t k) const { return coeffs_[k]; }
  std::size_t size() const noexcept { return coeffs_.size(); }

 private:
  Grid grid_;
  std::vector<std::complex<double>> coeffs_;
};

namespace detail {

inline double sign_of_mode(std::size_t slot, std::size_t n) {
  // (-1)^k for k = slot - n/2
  return ((slot + n / 2) % 2 == 0) ? 1.0 : -1.0;
}

inline void require_same_grid(const Grid& a, const Grid& b) {
  if (!(a == b)) throw GridMismatch("operands live on different grids");
}

/// Forward quadrature without the finiteness check on the output.
inline std::vector<std::complex<double>> forward_raw(const Grid& grid,
                                                     std::span<const double> values) {
  const std::size_t n = grid.size();
  std::vector<std::complex<double>> in(values.begin(), values.end());
  const auto out = dft(in, true);
  const double w = grid.dx() / std::sqrt(2.0 * std::numbers::pi);
  std::vector<std::complex<double>> c(n);
  for (std::size_t slot = 0; slot < n; ++slot) {
    // slot holds k = slot - n/2, which sits at DFT index k mod n
    const std::size_t idx = (slot + n / 2) % n;
    c[slot] = w * sign_of_mode(slot, n) * out[idx];
  }
  return c;
}

/// Inverse quadrature returning the complex samples; no validation.
inline std::vector<std::complex<double>> inverse_raw(const Grid& grid,
                                                     std::span<const std::complex<double>> c) {
  const std::size_t n = grid.size();
  std::vector<std::complex<double>> in(n);
  for (std::size_t slot = 0; slot < n; ++slot) {
    in[(slot + n / 2) % n] = sign_of_mode(slot, n) * c[slot];
  }
  auto out = dft(in, false);
  const double w = grid.dxi() / std::sqrt(2.0 * std::numbers::pi);
  for (auto& v : out) v *= w;
  return out;
}

}  // namespace detail

inline Spectrum forward_transform(const Field& f) {
  return Spectrum(f.grid(), detail::forward_raw(f.grid(), f.values()));
}

/// Inverse transform to a real field. The imaginary part is discarded after
/// checking that its discrete L2 norm is below 1e-9 of the real part's.
inline Field inverse_transform(const Spectrum& s) {
  const auto z = detail::inverse_raw(s.grid(), s.coeffs());
  std::vector<double> re(z.size());
  double re2 = 0.0;
  double im2 = 0.0;
  for (std::size_t j = 0; j < z.size(); ++j) {
    re[j] = z[j].real();
    re2 += z[j].real() * z[j].real();
    im2 += z[j].imag() * z[j].imag();
  }
  if (std::sqrt(im2) > 1e-9 * std::sqrt(re2)) {
    throw ImaginaryResidueTooLarge("spectrum is not Hermitian: imaginary residue " +
                                   std::to_string(std::sqrt(im2 / re2)) + " of real part");
  }
  return Field(s.grid(), std::move(re));
}

/// Pointwise product of a spectrum with a real multiplier m(xi).
template <class M>
Spectrum apply_multiplier(const Spectrum& s, M&& m) {
  std::vector<std::complex<double>> out(s.size());
  for (std::size_t k = 0; k < s.size(); ++k) out[k] = m(s.grid().freq(k)) * s[k];
  return Spectrum(s.grid(), std::move(out));
}

inline double l2_norm(const Field& f) {
  double acc = 0.0;
  for (double v : f.values()) acc += v * v;
  return std::sqrt(f.grid().dx() * acc);
}

inline double l2_norm(const Spectrum& s) {
  double acc = 0.0;
  for (const auto& c : s.coeffs()) acc += std::norm(c);
  return std::sqrt(s.grid().dxi() * acc);
}

/// H^k norm (int (1 + xi^2)^k |c(xi)|^2 dxi)^{1/2} as a grid sum.
inline double sobolev_norm(const Spectrum& s, double k) {
  if (!(k >= 0.0)) throw DomainError("Sobolev index must be nonnegative");
  double acc = 0.0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    const double xi = s.grid().freq(i);
    acc += std::pow(1.0 + xi * xi, k) * std::norm(s[i]);
  }
  return std::sqrt(s.grid().dxi() * acc);
}

// Field arithmetic -----------------------------------------------------------

inline Field operator+(const Field& a, const Field& b) {
  detail::require_same_grid(a.grid(), b.grid());
  std::vector<double> v(a.size());
  for (std::size_t j = 0; j < v.size(); ++j) v[j] = a[j] + b[j];
  return Field(a.grid(), std::move(v));
}

inline Field operator-(const Field& a, const Field& b) {
  detail::require_same_grid(a.grid(), b.grid());
  std::vector<double> v(a.size());
  for (std::size_t j = 0; j < v.size(); ++j) v[j] = a[j] - b[j];
  return Field(a.grid(), std::move(v));
}

inline Field operator*(double s, const Field& a) {
  std::vector<double> v(a.size());
  for (std::size_t j = 0; j < v.size(); ++j) v[j] = s * a[j];
  return Field(a.grid(), std::move(v));
}

// CSV ------------------------------------------------------------------------

/// Shortest round-trippable decimal for every double: 17 significant digits.
inline std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline void write_field_csv(std::ostream& os, const Field& f) {
  os << "x,value\n";
  for (std::size_t j = 0; j < f.size(); ++j) {
    os << format_double(f.grid().node(j)) << ',' << format_double(f[j]) << '\n';
  }
}

inline void write_spectrum_csv(std::ostream& os, const Spectrum& s) {
  os << "xi,re,im\n";
  for (std::size_t k = 0; k < s.size(); ++k) {
    os << format_double(s.grid().freq(k)) << ',' << format_double(s[k].real()) << ','
       << format_double(s[k].imag()) << '\n';
  }
}

namespace detail {

inline double parse_double(std::string_view tok, std::size_t line) {
  while (!tok.empty() && (tok.front() == ' ' || tok.front() == '\t')) tok.remove_prefix(1);
  while (!tok.empty() && (tok.back() == ' ' || tok.back() == '\t' || tok.back() == '\r')) {
    tok.remove_suffix(1);
  }
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (ec != std::errc{} || ptr != tok.data() + tok.size()) {
    throw ParseError("line " + std::to_string(line) + ": not a number: '" + std::string(tok) +
                     "'");
  }
  return v;
}

}  // namespace detail

/// Reads a Field CSV (`x,value` header, `#` comment lines allowed). The grid
/// is reconstructed from the node column, which must be the uniform grid
/// -L + j * 2L/N.
inline Field read_field_csv(std::istream& is) {
  std::string line;
  std::size_t lineno = 0;
  bool have_header = false;
  std::vector<double> xs;
  std::vector<double> vs;
  while (std::getline(is, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line.front() == '#') continue;
    if (!have_header) {
      if (line != "x,value") throw ParseError("expected header 'x,value', got '" + line + "'");
      have_header = true;
      continue;
    }
    const auto comma = line.find(',');
    if (comma == std::string::npos || line.find(',', comma + 1) != std::string::npos) {
      throw ParseError("line " + std::to_string(lineno) + ": expected two columns");
    }
    xs.push_back(detail::parse_double(std::string_view(line).substr(0, comma), lineno));
    vs.push_back(detail::parse_double(std::string_view(line).substr(comma + 1), lineno));
  }
  if (!have_header) throw ParseError("missing 'x,value' header");
  if (xs.size() < 8 || xs.size() % 2 != 0) {
    throw ParseError("field CSV needs an even number (>= 8) of rows, got " +
                     std::to_string(xs.size()));
  }
  const double half_width = -xs.front();
  if (!(half_width > 0.0)) throw ParseError("first node must be -L with L > 0");
  Grid grid(half_width, xs.size());
  for (std::size_t j = 0; j < xs.size(); ++j) {
    if (std::abs(xs[j] - grid.node(j)) > 1e-9 * half_width) {
      throw ParseError("nodes are not the uniform grid on [-L, L) (row " + std::to_string(j) +
                       ")");
    }
  }
  for (double v : vs) {
    if (!std::isfinite(v)) throw ParseError("field CSV contains a non-finite value");
  }
  return Field(grid, std::move(vs));
}

}  // namespace backcast
