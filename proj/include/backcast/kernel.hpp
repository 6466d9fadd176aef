#pragma once

// Fourier multipliers of the backward heat problem and their sup bounds.
//
// Exact backward step from T to t:      e^{(T-t) xi^2}
// Regularized step (data -> time t):   A(xi,t)   = e^{(T-t) xi^2}   / (1 + beta e^{pT xi^2})
// Regularized step between s and t:    B(xi,s,t) = e^{(s-t) xi^2}   / (1 + beta e^{pT xi^2})
//
// All regularized multipliers are evaluated without forming e^{pT xi^2}
// once it would overflow.

#include <backcast/errors.hpp>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <string>
#include <type_traits>
#include <variant>

namespace backcast {

class RegParams {
 public:
  RegParams(double beta, double p, double final_time) : beta_(beta), p_(p), final_time_(final_time) {
    if (!(std::isfinite(beta) && beta > 0.0 && beta < 1.0)) {
      throw DomainError("beta must lie in (0, 1), got " + std::to_string(beta));
    }
    if (!(std::isfinite(p) && p > 1.0)) throw DomainError("p must be > 1");
    if (!(std::isfinite(final_time) && final_time > 0.0)) throw DomainError("T must be > 0");
  }

  double beta() const noexcept { return beta_; }
  double p() const noexcept { return p_; }
  double final_time() const noexcept { return final_time_; }
  /// pT, the damping exponent scale.
  double damping() const noexcept { return p_ * final_time_; }

  friend bool operator==(const RegParams&, const RegParams&) = default;

 private:
  double beta_;
  double p_;
  double final_time_;
};

namespace detail {

/// e^{r} / (1 + beta e^{q}) for q >= 0, r <= q + log(1/beta) regime included.
inline double damped_exp_ratio(double r, double q, double beta) {
  if (q > 700.0) return std::exp(r - q - std::log(beta + std::exp(-q)));
  return std::exp(r) / (1.0 + beta * std::exp(q));
}

}  // namespace detail

/// e^{(T-t) xi^2}. Overflows to +inf for large xi; that is the ill-posedness,
/// not an error.
inline double exact_backward_multiplier(double xi, double t, double final_time) {
  if (!(0.0 <= t && t <= final_time)) throw DomainError("t must lie in [0, T]");
  return std::exp((final_time - t) * xi * xi);
}

inline double reg_multiplier_A(double xi, double t, const RegParams& params) {
  const double T = params.final_time();
  if (!(0.0 <= t && t <= T)) throw DomainError("t must lie in [0, T]");
  const double y = xi * xi;
  return detail::damped_exp_ratio((T - t) * y, params.damping() * y, params.beta());
}

inline double reg_multiplier_B(double xi, double s, double t, const RegParams& params) {
  if (!(0.0 <= t && t <= s && s <= params.final_time())) {
    throw DomainError("need 0 <= t <= s <= T");
  }
  const double y = xi * xi;
  return detail::damped_exp_ratio((s - t) * y, params.damping() * y, params.beta());
}

/// sup over xi of e^{a xi^2} / (1 + beta e^{b xi^2}) is at most beta^{-a/b}.
inline double bound_11(double a, double b, double beta) {
  if (!(a >= 0.0 && b > 0.0 && a <= b)) throw DomainError("need 0 <= a <= b, b > 0");
  if (!(beta > 0.0 && beta < 1.0)) throw DomainError("beta must lie in (0, 1)");
  return std::pow(beta, -a / b);
}

/// Upper bound beta^{(t-T)/(pT)} for A(., t).
inline double bound_13(double t, const RegParams& params) {
  const double T = params.final_time();
  if (!(0.0 <= t && t <= T)) throw DomainError("t must lie in [0, T]");
  return bound_11(T - t, params.damping(), params.beta());
}

/// Upper bound beta^{(t-s)/(pT)} for B(., s, t).
inline double bound_14(double s, double t, const RegParams& params) {
  if (!(0.0 <= t && t <= s && s <= params.final_time())) {
    throw DomainError("need 0 <= t <= s <= T");
  }
  return bound_11(s - t, params.damping(), params.beta());
}

// The H^2 error estimate divides the bias multiplier by xi^2:
//   H(xi, t) = beta e^{(pT - t) xi^2} / (xi^2 (1 + beta e^{pT xi^2})),
// which is singular at xi = 0. It is only evaluated for |xi| >= xi_min > 0.
inline double h2_bias_multiplier(double xi, double t, const RegParams& params) {
  const double T = params.final_time();
  if (!(0.0 <= t && t <= T)) throw DomainError("t must lie in [0, T]");
  if (xi == 0.0) throw DomainError("H^2 bias multiplier is singular at xi = 0");
  const double y = xi * xi;
  const double pT = params.damping();
  // beta e^{(pT-t)y} / (1 + beta e^{pT y}) = e^{(pT-t)y + log beta} / (1 + beta e^{pT y})
  return detail::damped_exp_ratio((pT - t) * y + std::log(params.beta()), pT * y,
                                  params.beta()) /
         y;
}

/// The value the H^2 proof claims for sup_xi H(xi, t): pT/ln(1/beta) * beta^{t/(pT)}.
inline double h2_claimed_bound(double t, const RegParams& params) {
  const double pT = params.damping();
  return pT / std::log(1.0 / params.beta()) * std::pow(params.beta(), t / pT);
}

// Sup sweeps -----------------------------------------------------------------

struct ExactBackward {
  double t;
  double final_time;
};

struct RegularizedA {
  double t;
  RegParams params;
};

struct RegularizedB {
  double s;
  double t;
  RegParams params;
};

/// |xi| >= xi_min restriction of the H^2 bias multiplier.
struct H2Bias {
  double t;
  RegParams params;
  double xi_min;
};

using Multiplier = std::variant<ExactBackward, RegularizedA, RegularizedB, H2Bias>;

inline double evaluate(const Multiplier& m, double xi) {
  return std::visit(
      [xi](const auto& k) -> double {
        using K = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<K, ExactBackward>) {
          return exact_backward_multiplier(xi, k.t, k.final_time);
        } else if constexpr (std::is_same_v<K, RegularizedA>) {
          return reg_multiplier_A(xi, k.t, k.params);
        } else if constexpr (std::is_same_v<K, RegularizedB>) {
          return reg_multiplier_B(xi, k.s, k.t, k.params);
        } else {
          if (std::abs(xi) < k.xi_min) return 0.0;
          return h2_bias_multiplier(xi, k.t, k.params);
        }
      },
      m);
}

/// Default sweep half-width sqrt(1400/(pT)) + 10: well past the point where
/// beta e^{pT xi^2} has swamped every numerator.
inline double default_sweep_xi_max(const RegParams& params) {
  return std::sqrt(1400.0 / params.damping()) + 10.0;
}

inline constexpr std::size_t kDefaultSweepSteps = 200'000;

/// max of the multiplier over xi_i = -xi_max + 2 xi_max i / steps, i = 0..steps.
/// Doubling `steps` refines the sample set, so the result never decreases.
inline double sup_multiplier(const Multiplier& m, double xi_max,
                             std::size_t steps = kDefaultSweepSteps) {
  if (!(xi_max > 0.0)) throw DomainError("xi_max must be positive");
  if (steps < 1000) throw DomainError("sup sweep needs at least 1000 steps");
  double best = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i <= steps; ++i) {
    // i/steps is the same double for (i, steps) and (2i, 2 steps), so refined
    // sweeps contain every coarse node exactly.
    const double frac = static_cast<double>(i) / static_cast<double>(steps);
    const double xi = -xi_max + 2.0 * xi_max * frac;
    best = std::max(best, evaluate(m, xi));
  }
  return best;
}

}  // namespace backcast
