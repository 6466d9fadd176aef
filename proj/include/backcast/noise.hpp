#pragma once

// Measured data phi_eps = phi + delta with ||delta|| = eps exactly.

#include <backcast/errors.hpp>
#include <backcast/spectral.hpp>

#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>
#include <random>
#include <span>
#include <string>
#include <variant>
#include <vector>

namespace backcast {

struct WhiteNoise {
  friend bool operator==(const WhiteNoise&, const WhiteNoise&) = default;
};

/// White noise with all spectral content above |xi| > cut removed.
struct BandLimitedNoise {
  double cut;
  friend bool operator==(const BandLimitedNoise&, const BandLimitedNoise&) = default;
};

using NoiseKind = std::variant<WhiteNoise, BandLimitedNoise>;

inline std::string to_string(const NoiseKind& kind) {
  if (const auto* b = std::get_if<BandLimitedNoise>(&kind)) return "band:" + format_double(b->cut);
  return "white";
}

struct NoiseSpec {
  double epsilon = 0.0;
  std::uint64_t seed = 0;
  NoiseKind kind = WhiteNoise{};
};

/// Seed for the i-th task of a sweep: seed XOR i.
inline std::uint64_t task_seed(std::uint64_t seed, std::uint64_t task_index) {
  return seed ^ task_index;
}

namespace detail {

inline std::vector<double> gaussian_draws(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<double> eta(n);
  for (auto& v : eta) v = normal(gen);
  return eta;
}

inline double raw_l2(std::span<const double> v, double dx) {
  double acc = 0.0;
  for (double x : v) acc += x * x;
  return std::sqrt(dx * acc);
}

/// phi + eps * eta / ||eta||, with the realized difference rescaled so its
/// norm is eps despite the rounding in phi_j + delta_j.
inline Field add_scaled(const Field& phi, std::span<const double> eta, double epsilon) {
  const Grid& grid = phi.grid();
  const double norm = detail::raw_l2(eta, grid.dx());
  if (norm == 0.0) throw ZeroNoiseVector("noise draw has zero norm");

  std::vector<double> delta(eta.size());
  for (std::size_t j = 0; j < eta.size(); ++j) delta[j] = epsilon * eta[j] / norm;

  std::vector<double> out(eta.size());
  std::vector<double> best;
  double best_miss = std::numeric_limits<double>::infinity();
  std::vector<double> realized(eta.size());
  for (int pass = 0; pass < 4; ++pass) {
    for (std::size_t j = 0; j < out.size(); ++j) {
      out[j] = phi[j] + delta[j];
      realized[j] = out[j] - phi[j];
    }
    const double got = detail::raw_l2(realized, grid.dx());
    const double miss = std::abs(got - epsilon);
    if (miss < best_miss) {
      best_miss = miss;
      best = out;
    }
    if (miss == 0.0 || got == 0.0) break;
    const double fix = epsilon / got;
    for (std::size_t j = 0; j < delta.size(); ++j) delta[j] = realized[j] * fix;
  }
  out = std::move(best);
  return Field(grid, std::move(out));
}

}  // namespace detail

/// Returns phi + eps * eta / ||eta|| for seeded i.i.d. standard normal eta
/// (band-limited first when requested). Deterministic in (phi, spec).
inline Field perturb(const Field& phi, const NoiseSpec& spec) {
  if (!(std::isfinite(spec.epsilon) && spec.epsilon >= 0.0)) {
    throw DomainError("noise level must be finite and >= 0");
  }
  const Grid& grid = phi.grid();
  if (const auto* band = std::get_if<BandLimitedNoise>(&spec.kind)) {
    if (!(band->cut > 0.0 && band->cut <= grid.max_freq())) {
      throw DomainError("band cut must lie in (0, max grid frequency]");
    }
  }
  if (spec.epsilon == 0.0) return phi;

  std::vector<double> eta = detail::gaussian_draws(grid.size(), spec.seed);
  if (const auto* band = std::get_if<BandLimitedNoise>(&spec.kind)) {
    auto c = detail::forward_raw(grid, eta);
    for (std::size_t k = 0; k < c.size(); ++k) {
      if (std::abs(grid.freq(k)) > band->cut) c[k] = 0.0;
    }
    const auto z = detail::inverse_raw(grid, c);
    for (std::size_t j = 0; j < eta.size(); ++j) eta[j] = z[j].real();
  }
  return detail::add_scaled(phi, eta, spec.epsilon);
}

}  // namespace backcast
