#pragma once

// Error bounds for the regularized backward solution, measured errors, and
// empirical convergence rates.

#include <backcast/errors.hpp>
#include <backcast/heat_model.hpp>
#include <backcast/kernel.hpp>
#include <backcast/noise.hpp>
#include <backcast/regularizer.hpp>
#include <backcast/spectral.hpp>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <tuple>
#include <utility>
#include <variant>
#include <vector>

namespace backcast {

// A-priori assumptions on u(., 0) ------------------------------------------

/// ||u(., 0)|| <= e1; rate eps^{t/T} under beta = eps^p.
struct L2Prior {
  double e1;
};

/// ||u(., 0)||_{H^2} <= e2; logarithmic-plus-power rate under beta = eps.
struct H2Prior {
  double e2;
};

/// int e^{2 gamma xi^2} |u^(xi, 0)|^2 dxi <= e3^2; rate eps^{(t+h)/(pT)} under beta = eps.
struct GevreyPrior {
  double gamma;
  double e3;
};

using PriorBound = std::variant<L2Prior, H2Prior, GevreyPrior>;

namespace detail {

inline void require_positive_finite(double v, const char* what) {
  if (!(std::isfinite(v) && v > 0.0)) throw DomainError(std::string(what) + " must be positive");
}

inline bool close_rel(double a, double b, double tol) {
  return std::abs(a - b) <= tol * std::max(std::abs(a), std::abs(b));
}

inline void require_bound_args(double t, double epsilon, const RegParams& params) {
  if (!(0.0 <= t && t <= params.final_time())) throw DomainError("t must lie in [0, T]");
  if (!(epsilon > 0.0 && epsilon < 1.0)) throw DomainError("epsilon must lie in (0, 1)");
}

}  // namespace detail

/// h = min{gamma, (p - 1) T}
inline double gevrey_shift(double gamma, const RegParams& params) {
  return std::min(gamma, (params.p() - 1.0) * params.final_time());
}

/// Bound on ||u(., t) - v_eps(., t)|| for the given prior. Throws RuleMismatch
/// if beta does not follow the parameter choice the bound was proved for
/// (beta = eps^p for L2, beta = eps otherwise).
inline double theorem_bound(const PriorBound& prior, double t, double epsilon,
                            const RegParams& params) {
  detail::require_bound_args(t, epsilon, params);
  const double T = params.final_time();
  const double pT = params.damping();
  const double beta = params.beta();
  return std::visit(
      [&](const auto& pr) -> double {
        using P = std::decay_t<decltype(pr)>;
        if constexpr (std::is_same_v<P, L2Prior>) {
          detail::require_positive_finite(pr.e1, "E1");
          if (!detail::close_rel(beta, std::pow(epsilon, params.p()), 1e-9)) {
            throw RuleMismatch("L2 bound requires beta = eps^p");
          }
          return std::pow(epsilon, t / T) * (pr.e1 + 1.0);
        } else if constexpr (std::is_same_v<P, H2Prior>) {
          detail::require_positive_finite(pr.e2, "E2");
          if (!detail::close_rel(beta, epsilon, 1e-9)) {
            throw RuleMismatch("H2 bound requires beta = eps");
          }
          return pT / std::log(1.0 / epsilon) * std::pow(epsilon, t / pT) * pr.e2 +
                 std::pow(epsilon, (t - T + pT) / pT);
        } else {
          detail::require_positive_finite(pr.e3, "E3");
          if (!(pr.gamma > 0.0 && pr.gamma < pT)) {
            throw DomainError("Gevrey prior needs gamma in (0, pT)");
          }
          if (!detail::close_rel(beta, epsilon, 1e-9)) {
            throw RuleMismatch("Gevrey bound requires beta = eps");
          }
          return std::pow(epsilon, (t + gevrey_shift(pr.gamma, params)) / pT) * (pr.e3 + 1.0);
        }
      },
      prior);
}

/// H2 bound at t = 0: pT/ln(1/eps) E2 + eps^{(p-1)/p}.
inline double h2_bound_at_zero(double e2, double epsilon, const RegParams& params) {
  return theorem_bound(H2Prior{e2}, 0.0, epsilon, params);
}

/// The L2 bound with the exponent t/(pT) instead of t/T. Logged next to the
/// implemented bound, never used for pass/fail.
inline double l2_bound_as_printed(double e1, double t, double epsilon, const RegParams& params) {
  detail::require_bound_args(t, epsilon, params);
  return std::pow(epsilon, t / params.damping()) * (e1 + 1.0);
}

/// Exponent k of the eps^k factor in each bound (the logarithmic factor of
/// the H2 bound is ignored).
inline double theoretical_rate(const PriorBound& prior, double t, const RegParams& params) {
  return std::visit(
      [&](const auto& pr) -> double {
        using P = std::decay_t<decltype(pr)>;
        if constexpr (std::is_same_v<P, L2Prior>) {
          return t / params.final_time();
        } else if constexpr (std::is_same_v<P, H2Prior>) {
          return t / params.damping();
        } else {
          return (t + gevrey_shift(pr.gamma, params)) / params.damping();
        }
      },
      prior);
}

inline double measure_error(const RegSolution& approx, const Field& exact) {
  return l2_norm(approx.field - exact);
}

/// Least-squares slope of log(error) against log(eps).
inline double fit_rate(std::span<const std::pair<double, double>> pairs) {
  if (pairs.size() < 3) throw DegenerateInput("rate fit needs at least 3 (eps, error) pairs");
  std::vector<double> eps;
  for (const auto& [e, err] : pairs) {
    if (!(e > 0.0 && e < 1.0)) throw DegenerateInput("rate fit needs eps in (0, 1)");
    if (!(err > 0.0 && std::isfinite(err))) {
      throw DegenerateInput("rate fit needs positive finite errors");
    }
    eps.push_back(e);
  }
  std::sort(eps.begin(), eps.end());
  if (std::adjacent_find(eps.begin(), eps.end()) != eps.end()) {
    throw DegenerateInput("rate fit needs distinct eps values");
  }
  const double n = static_cast<double>(pairs.size());
  double mx = 0.0;
  double my = 0.0;
  for (const auto& [e, err] : pairs) {
    mx += std::log(e);
    my += std::log(err);
  }
  mx /= n;
  my /= n;
  double sxy = 0.0;
  double sxx = 0.0;
  for (const auto& [e, err] : pairs) {
    const double dx = std::log(e) - mx;
    sxy += dx * (std::log(err) - my);
    sxx += dx * dx;
  }
  return sxy / sxx;
}

// Theorem verification -------------------------------------------------------

enum class TheoremId { T1, T2, T3a, T3b, T4 };

inline std::string to_string(TheoremId id) {
  switch (id) {
    case TheoremId::T1: return "T1";
    case TheoremId::T2: return "T2";
    case TheoremId::T3a: return "T3a";
    case TheoremId::T3b: return "T3b";
    case TheoremId::T4: return "T4";
  }
  return "?";
}

inline std::optional<TheoremId> parse_theorem(std::string_view s) {
  if (s == "T1") return TheoremId::T1;
  if (s == "T2") return TheoremId::T2;
  if (s == "T3a") return TheoremId::T3a;
  if (s == "T3b") return TheoremId::T3b;
  if (s == "T4") return TheoremId::T4;
  return std::nullopt;
}

/// The beta rule each theorem is stated with. T1 and T2 hold for any beta;
/// they default to beta = eps.
inline BetaRule natural_rule(TheoremId id, double p) {
  if (id == TheoremId::T3a) return PowerOfEps{p};
  return EqualEps{};
}

inline void require_rule(TheoremId id, const BetaRule& rule, double p) {
  switch (id) {
    case TheoremId::T1:
    case TheoremId::T2:
      return;
    case TheoremId::T3a: {
      const auto* r = std::get_if<PowerOfEps>(&rule);
      if (r == nullptr || r->p != p) throw RuleMismatch("T3a requires beta-rule eps^p");
      return;
    }
    case TheoremId::T3b:
    case TheoremId::T4:
      if (!std::holds_alternative<EqualEps>(rule)) {
        throw RuleMismatch(to_string(id) + " requires beta-rule eps");
      }
      return;
  }
}

/// Fixture plus sweep description for one verification or rate study.
struct Scenario {
  Grid grid{12.0, 512};
  GaussianInitial fixture{1.0, 1.0};
  double final_time = 1.0;
  double p = 2.0;
  /// Unset: each theorem uses natural_rule().
  std::optional<BetaRule> rule;
  std::vector<double> epsilons;
  std::vector<double> times;
  std::uint64_t seed = 7;
  std::size_t n_seeds = 1;
  NoiseKind noise = WhiteNoise{};
  /// Gevrey weight for T4.
  double gamma = 0.2;
};

struct ReportRow {
  TheoremId theorem;
  double epsilon;
  double t;
  double beta;
  double p;
  double final_time;
  std::uint64_t seed;
  double error_l2;
  double bound;
  double slack;
  bool pass;
};

/// The prior a theorem's bound is evaluated with, from the scenario fixture.
inline std::optional<PriorBound> theorem_prior(TheoremId id, const Scenario& sc) {
  switch (id) {
    case TheoremId::T3a:
      return L2Prior{prior_constants(sc.fixture, sc.grid, 0.0).e1};
    case TheoremId::T3b:
      return H2Prior{prior_constants(sc.fixture, sc.grid, 0.0).e2};
    case TheoremId::T4:
      return GevreyPrior{sc.gamma, prior_constants(sc.fixture, sc.grid, sc.gamma).e3};
    default:
      return std::nullopt;
  }
}

namespace detail {

/// Second, independent noise stream for T1's comparison data.
inline std::uint64_t companion_seed(std::uint64_t seed) { return ~seed; }

inline void sort_rows(std::vector<ReportRow>& rows) {
  std::sort(rows.begin(), rows.end(), [](const ReportRow& a, const ReportRow& b) {
    return std::tie(a.epsilon, a.t, a.seed) < std::tie(b.epsilon, b.t, b.seed);
  });
}

}  // namespace detail

/// One row per (eps, t, seed). A bound violation is a FAIL row, never an error.
inline std::vector<ReportRow> verify_theorem(TheoremId id, const Scenario& sc) {
  const BetaRule rule = sc.rule.value_or(natural_rule(id, sc.p));
  require_rule(id, rule, sc.p);
  const auto prior = theorem_prior(id, sc);
  const Field phi = gaussian_exact(sc.fixture, sc.final_time, sc.grid);

  std::vector<ReportRow> rows;
  for (double eps : sc.epsilons) {
    const RegParams params(select_beta(rule, eps), sc.p, sc.final_time);
    for (std::size_t i = 0; i < sc.n_seeds; ++i) {
      const std::uint64_t seed = task_seed(sc.seed, i);
      const Field data = perturb(phi, {eps, seed, sc.noise});
      const NoisyData kind{eps, seed};
      for (double t : sc.times) {
        const RegSolution v = regularize(data, t, params, kind, rule);
        double measured = 0.0;
        double bound = 0.0;
        switch (id) {
          case TheoremId::T1: {
            const Field other = perturb(phi, {eps, detail::companion_seed(seed), sc.noise});
            measured = l2_norm(v.field - regularize(other, t, params).field);
            bound = bound_13(t, params) * l2_norm(data - other);
            break;
          }
          case TheoremId::T2:
            measured = l2_norm(v.field - regularize(phi, t, params).field);
            bound = bound_13(t, params) * eps;
            break;
          default:
            measured = measure_error(v, gaussian_exact(sc.fixture, t, sc.grid));
            bound = theorem_bound(*prior, t, eps, params);
            break;
        }
        rows.push_back({id, eps, t, params.beta(), sc.p, sc.final_time, seed, measured, bound,
                        bound - measured, measured <= bound * (1.0 + 1e-9)});
      }
    }
  }
  detail::sort_rows(rows);
  return rows;
}

inline bool all_pass(std::span<const ReportRow> rows) {
  return std::all_of(rows.begin(), rows.end(), [](const ReportRow& r) { return r.pass; });
}

/// Where the H2 reconstruction error lives: the xi = 0 mode versus the rest,
/// split again into the bias (exact data) and total (noisy data) parts.
struct ZeroModeRow {
  double epsilon;
  double t;
  std::uint64_t seed;
  double error_l2;
  double zero_mode_error;
  double nonzero_mode_error;
  double bias_error;
  double bias_zero_mode_error;
  double bound;
};

namespace detail {

/// (zero-mode part, remaining part) of ||a - b|| via Parseval.
inline std::pair<double, double> split_zero_mode(const Field& a, const Field& b) {
  const Spectrum e = forward_transform(a - b);
  const Grid& g = e.grid();
  const std::size_t zero = g.size() / 2;
  double rest = 0.0;
  for (std::size_t k = 0; k < e.size(); ++k) {
    if (k != zero) rest += std::norm(e[k]);
  }
  return {std::sqrt(g.dxi()) * std::abs(e[zero]), std::sqrt(g.dxi() * rest)};
}

}  // namespace detail

inline std::vector<ZeroModeRow> h2_zero_mode_diagnostics(const Scenario& sc) {
  const BetaRule rule = sc.rule.value_or(EqualEps{});
  require_rule(TheoremId::T3b, rule, sc.p);
  const double e2 = prior_constants(sc.fixture, sc.grid, 0.0).e2;
  const Field phi = gaussian_exact(sc.fixture, sc.final_time, sc.grid);
  std::vector<ZeroModeRow> rows;
  for (double eps : sc.epsilons) {
    const RegParams params(select_beta(rule, eps), sc.p, sc.final_time);
    for (std::size_t i = 0; i < sc.n_seeds; ++i) {
      const std::uint64_t seed = task_seed(sc.seed, i);
      const Field data = perturb(phi, {eps, seed, sc.noise});
      for (double t : sc.times) {
        const Field exact = gaussian_exact(sc.fixture, t, sc.grid);
        const Field v = regularize(data, t, params).field;
        const Field w = regularize(phi, t, params).field;
        const auto [z, rest] = detail::split_zero_mode(v, exact);
        const auto [bz, brest] = detail::split_zero_mode(w, exact);
        rows.push_back({eps, t, seed, l2_norm(v - exact), z, rest, std::hypot(bz, brest), bz,
                        theorem_bound(H2Prior{e2}, t, eps, params)});
      }
    }
  }
  std::sort(rows.begin(), rows.end(), [](const ZeroModeRow& a, const ZeroModeRow& b) {
    return std::tie(a.epsilon, a.t, a.seed) < std::tie(b.epsilon, b.t, b.seed);
  });
  return rows;
}

// Rate studies ----------------------------------------------------------------

struct RateReport {
  std::vector<ReportRow> rows;
  /// Slope of the seed-averaged log error against log eps.
  std::map<double, double> fitted_slope_per_t;
  std::map<double, double> theoretical_rate_per_t;
  std::map<double, std::size_t> n_points_per_t;
  /// (eps, exp(mean log error)) per t, in increasing eps.
  std::map<double, std::vector<std::pair<double, double>>> mean_error_per_t;
  /// Single-seed fits, for variance inspection.
  std::map<double, std::vector<std::pair<std::uint64_t, double>>> per_seed_slope;
};

/// Runs T3a, T3b or T4 over the scenario
/// and fits eps-rates per t.
inline RateReport rate_study(TheoremId id, const Scenario& sc) {
  if (id != TheoremId::T3a && id != TheoremId::T3b && id != TheoremId::T4) {
    throw DomainError("rate studies run T3a, T3b or T4");
  }
  if (sc.epsilons.size() < 3) throw DegenerateInput("need >= 3 epsilon values");
  RateReport rep;
  rep.rows = verify_theorem(id, sc);
  const auto prior = theorem_prior(id, sc);

  std::map<double, std::map<double, std::vector<double>>> log_err;  // t -> eps -> logs
  std::map<double, std::map<std::uint64_t, std::vector<std::pair<double, double>>>> by_seed;
  for (const auto& r : rep.rows) {
    if (!(r.error_l2 > 0.0)) throw DegenerateInput("zero reconstruction error; cannot fit");
    log_err[r.t][r.epsilon].push_back(std::log(r.error_l2));
    by_seed[r.t][r.seed].emplace_back(r.epsilon, r.error_l2);
  }
  for (const auto& [t, per_eps] : log_err) {
    std::vector<std::pair<double, double>> pts;
    for (const auto& [eps, logs] : per_eps) {
      double m = 0.0;
      for (double l : logs) m += l;
      pts.emplace_back(eps, std::exp(m / static_cast<double>(logs.size())));
    }
    const RegParams params(select_beta(sc.rule.value_or(natural_rule(id, sc.p)), pts.front().first),
                           sc.p, sc.final_time);
    rep.fitted_slope_per_t[t] = fit_rate(pts);
    rep.theoretical_rate_per_t[t] = theoretical_rate(*prior, t, params);
    rep.n_points_per_t[t] = pts.size();
    rep.mean_error_per_t[t] = pts;
    for (const auto& [seed, seed_pts] : by_seed[t]) {
      rep.per_seed_slope[t].emplace_back(seed, fit_rate(seed_pts));
    }
  }
  return rep;
}

// Multiplier bound lattice ----------------------------------------------------

struct MultiplierCheckRow {
  char kind;  // 'A' or 'B'
  double beta;
  double p;
  double final_time;
  double t;
  double s;  // equals T for A rows
  double sup;
  double bound;
  double slack;
  bool pass;
};

struct MultiplierLattice {
  std::vector<double> betas{1e-1, 1e-2, 1e-3, 1e-4, 1e-5, 1e-6, 1e-7, 1e-8};
  std::vector<double> ps{1.5, 2.0, 4.0};
  std::vector<double> final_times{0.5, 1.0, 2.0};
  /// Fractions of T at which t is placed.
  std::vector<double> t_fractions{0.0, 0.25, 0.5, 0.75, 1.0};
  std::size_t steps = kDefaultSweepSteps;
};

/// sup_xi A <= beta^{(t-T)/(pT)} and sup_xi B <= beta^{(t-s)/(pT)} over the
/// lattice, with s in {t, (t+T)/2, T}. Tolerance 1e-12 relative.
inline std::vector<MultiplierCheckRow> verify_multiplier_bounds(const MultiplierLattice& lat = {}) {
  std::vector<MultiplierCheckRow> rows;
  for (double beta : lat.betas) {
    for (double p : lat.ps) {
      for (double T : lat.final_times) {
        const RegParams params(beta, p, T);
        const double xi_max = default_sweep_xi_max(params);
        for (double frac : lat.t_fractions) {
          const double t = frac * T;
          const double sup_a = sup_multiplier(RegularizedA{t, params}, xi_max, lat.steps);
          const double ba = bound_13(t, params);
          rows.push_back({'A', beta, p, T, t, T, sup_a, ba, ba - sup_a,
                          sup_a <= ba * (1.0 + 1e-12)});
          for (double s : {t, 0.5 * (t + T), T}) {
            const double sup_b = sup_multiplier(RegularizedB{s, t, params}, xi_max, lat.steps);
            const double bb = bound_14(s, t, params);
            rows.push_back({'B', beta, p, T, t, s, sup_b, bb, bb - sup_b,
                            sup_b <= bb * (1.0 + 1e-12)});
          }
        }
      }
    }
  }
  return rows;
}

struct H2RestrictedRow {
  double beta;
  double p;
  double final_time;
  double t;
  double xi_min;
  double sup;
  double claimed;
  bool holds;
};

/// Checks the H^2 proof's claimed sup of the bias multiplier divided by xi^2
/// on |xi| >= xi_min. Informational: the unrestricted statement is false near
/// xi = 0.
inline std::vector<H2RestrictedRow> check_h2_restricted(double xi_min,
                                                        const MultiplierLattice& lat = {}) {
  std::vector<H2RestrictedRow> rows;
  for (double beta : lat.betas) {
    for (double p : lat.ps) {
      for (double T : lat.final_times) {
        const RegParams params(beta, p, T);
        const double xi_max = default_sweep_xi_max(params);
        for (double frac : lat.t_fractions) {
          const double t = frac * T;
          const double sup = sup_multiplier(H2Bias{t, params, xi_min}, xi_max, lat.steps);
          const double claimed = h2_claimed_bound(t, params);
          rows.push_back({beta, p, T, t, xi_min, sup, claimed, sup <= claimed * (1.0 + 1e-12)});
        }
      }
    }
  }
  return rows;
}

// CSV -------------------------------------------------------------------------

inline void write_report_csv(std::ostream& os, std::span<const ReportRow> rows) {
  os << "theorem,epsilon,t,beta,p,T,seed,error_l2,bound,slack,pass\n";
  for (const auto& r : rows) {
    os << to_string(r.theorem) << ',' << format_double(r.epsilon) << ',' << format_double(r.t)
       << ',' << format_double(r.beta) << ',' << format_double(r.p) << ','
       << format_double(r.final_time) << ',' << r.seed << ',' << format_double(r.error_l2) << ','
       << format_double(r.bound) << ',' << format_double(r.slack) << ','
       << (r.pass ? "PASS" : "FAIL") << '\n';
  }
}

inline void write_rate_summary_csv(std::ostream& os, const RateReport& rep) {
  os << "t,fitted_slope,theoretical_rate,n_points\n";
  for (const auto& [t, slope] : rep.fitted_slope_per_t) {
    os << format_double(t) << ',' << format_double(slope) << ','
       << format_double(rep.theoretical_rate_per_t.at(t)) << ',' << rep.n_points_per_t.at(t)
       << '\n';
  }
}

/// One `log10_eps,log10_error` block per t, blocks separated by a blank line.
inline void write_plot_data(std::ostream& os, const RateReport& rep) {
  bool first = true;
  for (const auto& [t, pts] : rep.mean_error_per_t) {
    if (!first) os << "\n\n";
    first = false;
    os << "# t=" << format_double(t) << '\n' << "log10_eps,log10_error\n";
    for (const auto& [eps, err] : pts) {
      os << format_double(std::log10(eps)) << ',' << format_double(std::log10(err)) << '\n';
    }
  }
}

inline void write_multiplier_check_csv(std::ostream& os, std::span<const MultiplierCheckRow> rows) {
  os << "kind,beta,p,T,t,s,sup,bound,slack,pass\n";
  for (const auto& r : rows) {
    os << r.kind << ',' << format_double(r.beta) << ',' << format_double(r.p) << ','
       << format_double(r.final_time) << ',' << format_double(r.t) << ',' << format_double(r.s)
       << ',' << format_double(r.sup) << ',' << format_double(r.bound) << ','
       << format_double(r.slack) << ',' << (r.pass ? "PASS" : "FAIL") << '\n';
  }
}

inline void write_h2_restricted_csv(std::ostream& os, std::span<const H2RestrictedRow> rows) {
  os << "beta,p,T,t,xi_min,sup,claimed_bound,holds\n";
  for (const auto& r : rows) {
    os << format_double(r.beta) << ',' << format_double(r.p) << ',' << format_double(r.final_time)
       << ',' << format_double(r.t) << ',' << format_double(r.xi_min) << ','
       << format_double(r.sup) << ',' << format_double(r.claimed) << ','
       << (r.holds ? "yes" : "no") << '\n';
  }
}

inline void write_zero_mode_csv(std::ostream& os, std::span<const ZeroModeRow> rows) {
  os << "epsilon,t,seed,error_l2,zero_mode_error,nonzero_mode_error,bias_error,"
        "bias_zero_mode_error,bound\n";
  for (const auto& r : rows) {
    os << format_double(r.epsilon) << ',' << format_double(r.t) << ',' << r.seed << ','
       << format_double(r.error_l2) << ',' << format_double(r.zero_mode_error) << ','
       << format_double(r.nonzero_mode_error) << ',' << format_double(r.bias_error) << ','
       << format_double(r.bias_zero_mode_error) << ',' << format_double(r.bound) << '\n';
  }
}

}  // namespace backcast
