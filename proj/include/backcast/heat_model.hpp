#pragma once

// The heat equation u_t = u_xx on the line, in Fourier variables: forward
// evolution multiplies by e^{-t xi^2}, exact backward evolution by
// e^{(T-t) xi^2}. Gaussians u(x,0) = c e^{-a x^2} are the closed-form
// fixtures used throughout the tests.

#include <backcast/errors.hpp>
#include <backcast/kernel.hpp>
#include <backcast/spectral.hpp>

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <vector>

namespace backcast {

/// u(x, 0) = amplitude * e^{-width x^2}
struct GaussianInitial {
  double amplitude = 1.0;
  double width = 1.0;

  GaussianInitial(double c, double a) : amplitude(c), width(a) {
    if (!std::isfinite(c)) throw DomainError("Gaussian amplitude must be finite");
    if (!(std::isfinite(a) && a > 0.0)) throw DomainError("Gaussian width must be positive");
  }

  /// True when c e^{-a L^2} < 1e-14 |c| on `grid`.
  bool decays_on(const Grid& grid) const {
    const double L = grid.half_width();
    return width * L * L > -std::log(1e-14);
  }
};

/// Spectral multiplier e^{-t xi^2}; the result is never larger in L2 than u0.
inline Field forward_evolve(const Field& u0, double t) {
  if (!(t >= 0.0)) throw DomainError("forward evolution needs t >= 0");
  const auto s = apply_multiplier(forward_transform(u0),
                                  [t](double xi) { return std::exp(-t * xi * xi); });
  return inverse_transform(s);
}

/// Output of the unregularized inversion. `values` may hold huge, infinite or
/// NaN entries; they are kept as computed.
struct NaiveReconstruction {
  Grid grid;
  std::vector<double> values;
  /// Some amplified coefficient exceeded 1e300 or was not finite.
  bool blown_up = false;

  bool finite() const {
    return std::all_of(values.begin(), values.end(), [](double v) { return std::isfinite(v); });
  }

  /// The reconstruction as a Field; throws DomainError if it is not finite.
  Field field() const { return Field(grid, values); }
};

/// Backward step with the exact multiplier e^{(T-t) xi^2}. Deliberately
/// unclamped.
inline NaiveReconstruction naive_backward(const Field& phi, double t, double final_time) {
  if (!(0.0 <= t && t <= final_time)) throw DomainError("t must lie in [0, T]");
  const Grid& grid = phi.grid();
  auto c = detail::forward_raw(grid, phi.values());
  bool blown_up = false;
  for (std::size_t k = 0; k < c.size(); ++k) {
    c[k] *= exact_backward_multiplier(grid.freq(k), t, final_time);
    const double mag = std::abs(c[k]);
    if (!std::isfinite(mag) || mag > 1e300) blown_up = true;
  }
  const auto z = detail::inverse_raw(grid, c);
  std::vector<double> values(z.size());
  for (std::size_t j = 0; j < z.size(); ++j) values[j] = z[j].real();
  return {grid, std::move(values), blown_up};
}

/// Natural log of || naive_backward(data, t, T) - exact_t ||, evaluated in
/// log space so it stays finite long after the reconstruction itself has
/// overflowed. Uses Parseval and the identity
///   e^{(T-t) xi^2} d^(xi) - u^(xi) = e^{(T-t) xi^2} (d^(xi) - e^{-(T-t) xi^2} u^(xi)).
inline double naive_backward_log_error(const Field& data, const Field& exact_t, double t,
                                       double final_time) {
  if (!(0.0 <= t && t <= final_time)) throw DomainError("t must lie in [0, T]");
  detail::require_same_grid(data.grid(), exact_t.grid());
  const Grid& grid = data.grid();
  const auto d = detail::forward_raw(grid, data.values());
  const auto u = detail::forward_raw(grid, exact_t.values());
  std::vector<double> log_sq(d.size(), -std::numeric_limits<double>::infinity());
  double peak = -std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < d.size(); ++k) {
    const double gain = (final_time - t) * grid.freq(k) * grid.freq(k);
    const double mag = std::abs(d[k] - std::exp(-gain) * u[k]);
    if (mag == 0.0) continue;
    log_sq[k] = 2.0 * (gain + std::log(mag));
    peak = std::max(peak, log_sq[k]);
  }
  if (peak == -std::numeric_limits<double>::infinity()) return peak;
  double acc = 0.0;
  for (double v : log_sq) acc += std::exp(v - peak);
  return 0.5 * (std::log(grid.dxi()) + peak + std::log(acc));
}

/// Closed-form solution (1 + 4at)^{-1/2} c e^{-a x^2 / (1 + 4at)}.
inline Field gaussian_exact(const GaussianInitial& g, double t, const Grid& grid) {
  if (!(t >= 0.0)) throw DomainError("t must be >= 0");
  if (!g.decays_on(grid)) {
    throw DomainError("Gaussian fixture does not decay below 1e-14 at |x| = L");
  }
  const double spread = 1.0 + 4.0 * g.width * t;
  const double scale = g.amplitude / std::sqrt(spread);
  return Field::sample(grid, [&](double x) { return scale * std::exp(-g.width * x * x / spread); });
}

/// Closed-form transform c / sqrt(2a) e^{-xi^2/(4a)} e^{-t xi^2} at the grid frequencies.
inline Spectrum gaussian_spectrum(const GaussianInitial& g, double t, const Grid& grid) {
  if (!(t >= 0.0)) throw DomainError("t must be >= 0");
  std::vector<std::complex<double>> c(grid.size());
  const double scale = g.amplitude / std::sqrt(2.0 * g.width);
  for (std::size_t k = 0; k < c.size(); ++k) {
    const double xi = grid.freq(k);
    c[k] = scale * std::exp(-(0.25 / g.width + t) * xi * xi);
  }
  return Spectrum(grid, std::move(c));
}

/// A-priori constants of u(., 0): L2 norm, H^2 norm and Gevrey-weighted norm.
struct PriorConstants {
  double e1;
  double e2;
  double e3;
};

/// E3 uses the closed-form spectrum: FFT round-off in the top modes would be
/// multiplied by e^{2 gamma xi^2} otherwise.
inline PriorConstants prior_constants(const GaussianInitial& g, const Grid& grid, double gamma) {
  if (!(gamma >= 0.0)) throw DomainError("gamma must be >= 0");
  if (gamma >= 0.25 / g.width) {
    throw GammaTooLarge("Gevrey weight e^{2 gamma xi^2} is not integrable against the fixture "
                        "spectrum: need gamma < 1/(4a)");
  }
  const Field u0 = gaussian_exact(g, 0.0, grid);
  const double e1 = l2_norm(u0);
  const double e2 = sobolev_norm(forward_transform(u0), 2.0);
  const double c2 = g.amplitude * g.amplitude / (2.0 * g.width);
  double acc = 0.0;
  for (std::size_t k = 0; k < grid.size(); ++k) {
    const double xi = grid.freq(k);
    acc += c2 * std::exp((2.0 * gamma - 0.5 / g.width) * xi * xi);
  }
  return {e1, e2, std::sqrt(grid.dxi() * acc)};
}

}  // namespace backcast
