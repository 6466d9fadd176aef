#pragma once

// Regularized backward reconstruction: the data spectrum is multiplied by
// A(xi, t) = e^{(T-t) xi^2} / (1 + beta e^{pT xi^2}) and transformed back.
// Exact data gives w_eps, measured data gives v_eps; both come from the same
// call and are told apart by DataKind.

#include <backcast/errors.hpp>
#include <backcast/kernel.hpp>
#include <backcast/spectral.hpp>

#include <cmath>
#include <cstdint>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <type_traits>
#include <variant>
#include <vector>

namespace backcast {

// Parameter-choice rules ----------------------------------------------------

/// beta = eps^p
struct PowerOfEps {
  double p;
  friend bool operator==(const PowerOfEps&, const PowerOfEps&) = default;
};

/// beta = eps
struct EqualEps {
  friend bool operator==(const EqualEps&, const EqualEps&) = default;
};

struct ManualBeta {
  double beta;
  friend bool operator==(const ManualBeta&, const ManualBeta&) = default;
};

using BetaRule = std::variant<PowerOfEps, EqualEps, ManualBeta>;

inline std::string to_string(const BetaRule& rule) {
  return std::visit(
      [](const auto& r) -> std::string {
        using R = std::decay_t<decltype(r)>;
        if constexpr (std::is_same_v<R, PowerOfEps>) {
          return "eps^p(p=" + format_double(r.p) + ")";
        } else if constexpr (std::is_same_v<R, EqualEps>) {
          return "eps";
        } else {
          return "manual:" + format_double(r.beta);
        }
      },
      rule);
}

inline double select_beta(const BetaRule& rule, double epsilon) {
  if (!(epsilon > 0.0 && epsilon < 1.0)) {
    throw DomainError("epsilon must lie in (0, 1) to choose beta");
  }
  const double beta = std::visit(
      [epsilon](const auto& r) -> double {
        using R = std::decay_t<decltype(r)>;
        if constexpr (std::is_same_v<R, PowerOfEps>) {
          if (!(r.p > 1.0)) throw DomainError("beta = eps^p needs p > 1");
          return std::pow(epsilon, r.p);
        } else if constexpr (std::is_same_v<R, EqualEps>) {
          return epsilon;
        } else {
          return r.beta;
        }
      },
      rule);
  if (!(beta > 0.0 && beta < 1.0)) {
    throw DomainError("beta rule produced a value outside (0, 1)");
  }
  return beta;
}

// Solutions -------------------------------------------------------------------

struct ExactData {
  friend bool operator==(const ExactData&, const ExactData&) = default;
};

struct NoisyData {
  double epsilon;
  std::uint64_t seed;
  friend bool operator==(const NoisyData&, const NoisyData&) = default;
};

using DataKind = std::variant<ExactData, NoisyData>;

struct RegSolution {
  Field field;
  double t;
  RegParams params;
  DataKind data_kind;
  BetaRule rule;
};

/// Reconstruction at time t from final-time data. Its L2 norm is at most
/// beta^{(t-T)/(pT)} ||data||.
inline RegSolution regularize(const Field& data, double t, const RegParams& params,
                              DataKind kind = ExactData{},
                              std::optional<BetaRule> rule = std::nullopt) {
  if (!(0.0 <= t && t <= params.final_time())) throw DomainError("t must lie in [0, T]");
  const auto s = apply_multiplier(forward_transform(data),
                                  [&](double xi) { return reg_multiplier_A(xi, t, params); });
  return {inverse_transform(s), t, params, kind, rule.value_or(ManualBeta{params.beta()})};
}

inline std::vector<RegSolution> reconstruct_sweep(const Field& data, std::span<const double> times,
                                                  const RegParams& params,
                                                  DataKind kind = ExactData{},
                                                  std::optional<BetaRule> rule = std::nullopt) {
  for (double t : times) {
    if (!(0.0 <= t && t <= params.final_time())) throw DomainError("t must lie in [0, T]");
  }
  std::vector<RegSolution> out;
  out.reserve(times.size());
  for (double t : times) out.push_back(regularize(data, t, params, kind, rule));
  return out;
}

/// `# t=.. beta=.. p=.. T=.. kind=.. epsilon=.. seed=..`
inline std::string manifest_line(const RegSolution& sol) {
  std::string kind = "exact";
  std::string eps = "0";
  std::string seed = "0";
  if (const auto* noisy = std::get_if<NoisyData>(&sol.data_kind)) {
    kind = "noisy";
    eps = format_double(noisy->epsilon);
    seed = std::to_string(noisy->seed);
  }
  return "# t=" + format_double(sol.t) + " beta=" + format_double(sol.params.beta()) +
         " p=" + format_double(sol.params.p()) + " T=" + format_double(sol.params.final_time()) +
         " kind=" + kind + " epsilon=" + eps + " seed=" + seed;
}

inline void write_reg_solution_csv(std::ostream& os, const RegSolution& sol) {
  os << manifest_line(sol) << '\n';
  write_field_csv(os, sol.field);
}

}  // namespace backcast
