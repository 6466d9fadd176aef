#pragma once

// Test-only reference computations. Nothing here calls into the library's
// transform or multiplier code.

#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <random>
#include <vector>

namespace oracle {

using real = long double;

inline constexpr real kPi = 3.141592653589793238462643383279502884L;

namespace detail {

inline real simpson(const std::function<real(real)>& f, real a, real b, real fa, real fm, real fb,
                    real whole, real tol, int depth) {
  const real m = 0.5L * (a + b);
  const real lm = 0.5L * (a + m);
  const real rm = 0.5L * (m + b);
  const real flm = f(lm);
  const real frm = f(rm);
  const real left = (m - a) / 6.0L * (fa + 4.0L * flm + fm);
  const real right = (b - m) / 6.0L * (fm + 4.0L * frm + fb);
  const real delta = left + right - whole;
  if (depth <= 0 || std::fabs(delta) <= 15.0L * tol) return left + right + delta / 15.0L;
  return simpson(f, a, m, fa, flm, fm, left, 0.5L * tol, depth - 1) +
         simpson(f, m, b, fm, frm, fb, right, 0.5L * tol, depth - 1);
}

}  // namespace detail

/// Adaptive Simpson quadrature in extended precision, split into `pieces`
/// panels so narrow features are not skipped by the first coarse estimate.
inline real integrate(const std::function<real(real)>& f, real a, real b, real tol = 1e-16L,
                      int pieces = 64) {
  real acc = 0.0L;
  const real h = (b - a) / pieces;
  for (int i = 0; i < pieces; ++i) {
    const real lo = a + h * i;
    const real hi = lo + h;
    const real flo = f(lo);
    const real fhi = f(hi);
    const real fm = f(0.5L * (lo + hi));
    const real whole = (hi - lo) / 6.0L * (flo + 4.0L * fm + fhi);
    acc += detail::simpson(f, lo, hi, flo, fm, fhi, whole, tol / pieces, 40);
  }
  return acc;
}

/// Direct O(N^2) quadrature sum dx/sqrt(2 pi) sum_j f_j e^{-i xi_k x_j}, in
/// monotone frequency order, with the grid rebuilt from (L, N).
inline std::vector<std::complex<double>> direct_transform(const std::vector<double>& f, real L) {
  const std::size_t n = f.size();
  const real dx = 2.0L * L / n;
  const real dxi = kPi / L;
  std::vector<std::complex<double>> c(n);
  for (std::size_t k = 0; k < n; ++k) {
    const real xi = (static_cast<real>(k) - static_cast<real>(n / 2)) * dxi;
    real re = 0.0L;
    real im = 0.0L;
    for (std::size_t j = 0; j < n; ++j) {
      const real x = -L + dx * static_cast<real>(j);
      re += f[j] * std::cos(xi * x);
      im -= f[j] * std::sin(xi * x);
    }
    const real w = dx / std::sqrt(2.0L * kPi);
    c[k] = {static_cast<double>(w * re), static_cast<double>(w * im)};
  }
  return c;
}

/// (2 pi)^{-1/2} int e^{-x^2} e^{-i xi x} dx by quadrature (the sine part vanishes).
/// The integrand is even and below 1e-18 past |x| = 6.5.
inline real gaussian_transform_quadrature(real xi) {
  return 2.0L *
         integrate([xi](real x) { return std::exp(-x * x) * std::cos(xi * x); }, 0.0L, 6.5L, 1e-13L) /
         std::sqrt(2.0L * kPi);
}

/// Heat-kernel convolution (4 pi t)^{-1/2} int e^{-(x-y)^2/(4t)} u0(y) dy.
inline real heat_convolution(const std::function<real(real)>& u0, real x, real t) {
  const real w = 1.0L / std::sqrt(4.0L * kPi * t);
  return w * integrate([&](real y) { return std::exp(-(x - y) * (x - y) / (4.0L * t)) * u0(y); },
                       -20.0L, 20.0L);
}

/// Reproducible random field values in [-1, 1] with a Gaussian envelope, so
/// they satisfy the decay contract at |x| = L.
inline std::vector<double> random_decaying_field(std::size_t n, double L, std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<double> v(n);
  const double dx = 2.0 * L / static_cast<double>(n);
  for (std::size_t j = 0; j < n; ++j) {
    const double x = -L + dx * static_cast<double>(j);
    v[j] = u(gen) * std::exp(-x * x / 8.0);
  }
  return v;
}

/// Plain white random values in [-1, 1].
inline std::vector<double> random_field(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<double> v(n);
  for (auto& x : v) x = u(gen);
  return v;
}

}  // namespace oracle
