#pragma once

// Command-line front end. `run_cli` is the whole program minus `main`, so
// the test suites can drive it in-process.
//
// Exit codes: 0 success, 1 a checked bound failed, 2 usage error, 3 input
// or output error.

#include <backcast/analysis.hpp>
#include <backcast/errors.hpp>
#include <backcast/heat_model.hpp>
#include <backcast/kernel.hpp>
#include <backcast/noise.hpp>
#include <backcast/regularizer.hpp>
#include <backcast/spectral.hpp>

#include <CLI11.hpp>

#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

namespace backcast::cli {

inline constexpr const char* kVersion = "0.1.0";

enum ExitCode : int { kOk = 0, kCheckFailed = 1, kUsage = 2, kInput = 3 };

class UsageError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

/// Raw flag values shared by all subcommands.
struct Options {
  std::string fixture;
  std::string input;
  std::string output_dir;
  double final_time = 1.0;
  std::vector<double> times;
  std::vector<double> epsilons;
  std::string beta_rule;
  double p = 2.0;
  double half_width = 12.0;
  std::size_t n_points = 512;
  std::uint64_t seed = 7;
  std::optional<std::size_t> seeds;
  std::string noise = "white";
  std::string prior = "l2";
  std::string theorem = "all";
};

// Flag value parsers -----------------------------------------------------------

namespace detail {

inline double parse_number(const std::string& s, const std::string& what) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    throw UsageError(what + ": not a number: '" + s + "'");
  }
  if (used != s.size()) throw UsageError(what + ": not a number: '" + s + "'");
  return v;
}

}  // namespace detail

/// `gaussian:a=<width>,c=<amplitude>`; either key may be omitted (default 1).
inline GaussianInitial parse_fixture(const std::string& spec) {
  const std::string prefix = "gaussian";
  if (spec.rfind(prefix, 0) != 0) throw UsageError("unknown fixture '" + spec + "'");
  double a = 1.0;
  double c = 1.0;
  std::string rest = spec.substr(prefix.size());
  if (!rest.empty()) {
    if (rest.front() != ':') throw UsageError("fixture syntax is gaussian:a=<..>,c=<..>");
    std::stringstream ss(rest.substr(1));
    std::string kv;
    while (std::getline(ss, kv, ',')) {
      const auto eq = kv.find('=');
      if (eq == std::string::npos) throw UsageError("fixture entry '" + kv + "' lacks '='");
      const std::string key = kv.substr(0, eq);
      const double v = detail::parse_number(kv.substr(eq + 1), "fixture " + key);
      if (key == "a") {
        a = v;
      } else if (key == "c") {
        c = v;
      } else {
        throw UsageError("unknown fixture key '" + key + "'");
      }
    }
  }
  try {
    return GaussianInitial(c, a);
  } catch (const DomainError& e) {
    throw UsageError(e.what());
  }
}

/// `eps`, `eps^p` or `manual:<beta>`.
inline BetaRule parse_beta_rule(const std::string& s, double p) {
  if (s == "eps") return EqualEps{};
  if (s == "eps^p") return PowerOfEps{p};
  if (s.rfind("manual:", 0) == 0) {
    const double b = detail::parse_number(s.substr(7), "manual beta");
    if (!(b > 0.0 && b < 1.0)) throw UsageError("manual beta must lie in (0, 1)");
    return ManualBeta{b};
  }
  throw UsageError("beta-rule must be eps, eps^p or manual:<b>");
}

/// `white` or `band:<cut>`.
inline NoiseKind parse_noise(const std::string& s) {
  if (s == "white") return WhiteNoise{};
  if (s.rfind("band:", 0) == 0) return BandLimitedNoise{detail::parse_number(s.substr(5), "band cut")};
  throw UsageError("noise must be white or band:<cut>");
}

struct PriorChoice {
  TheoremId theorem;
  double gamma = 0.0;
};

/// `l2`, `h2` or `gevrey:gamma=<g>`.
inline PriorChoice parse_prior(const std::string& s) {
  if (s == "l2") return {TheoremId::T3a};
  if (s == "h2") return {TheoremId::T3b};
  const std::string prefix = "gevrey:gamma=";
  if (s.rfind(prefix, 0) == 0) {
    return {TheoremId::T4, detail::parse_number(s.substr(prefix.size()), "gamma")};
  }
  throw UsageError("prior must be l2, h2 or gevrey:gamma=<g>");
}

// Run manifest -----------------------------------------------------------------

namespace detail {

inline std::string join(const std::vector<double>& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += ';';
    out += format_double(v[i]);
  }
  return out;
}

inline std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

}  // namespace detail

/// Every parameter that determines a run's output, echoed as `#` lines at the
/// top of each file it writes. The timestamp sits alone on its own line.
struct RunManifest {
  std::string command;
  std::vector<std::pair<std::string, std::string>> params;
  std::string started = detail::utc_timestamp();

  void add(std::string key, std::string value) { params.emplace_back(std::move(key), std::move(value)); }

  void write(std::ostream& os) const {
    os << "# backcast " << kVersion << " command=" << command << '\n';
    os << "# started=" << started << '\n';
    for (const auto& [k, v] : params) os << "# " << k << '=' << v << '\n';
  }
};

// Output helpers ---------------------------------------------------------------

namespace detail {

inline std::filesystem::path output_dir(const Options& o) {
  std::filesystem::path dir = o.output_dir;
  if (dir.empty()) {
    const char* env = std::getenv("BACKCAST_OUTPUT_DIR");
    dir = (env != nullptr && *env != '\0') ? env : ".";
  }
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw IoError("cannot create output directory " + dir.string() + ": " + ec.message());
  return dir;
}

template <class Body>
void write_file(const std::filesystem::path& path, const RunManifest& manifest, Body&& body) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw IoError("cannot open " + path.string() + " for writing");
  manifest.write(os);
  body(os);
  if (!os) throw IoError("write to " + path.string() + " failed");
}

inline void require_times(const std::vector<double>& times, double final_time) {
  for (double t : times) {
    if (!(0.0 <= t && t <= final_time)) throw UsageError("t must lie in [0, T]");
  }
}

inline Grid make_grid(const Options& o) {
  try {
    return Grid(o.half_width, o.n_points);
  } catch (const DomainError& e) {
    throw UsageError(e.what());
  }
}

inline void require_basics(const Options& o) {
  if (!(o.final_time > 0.0 && std::isfinite(o.final_time))) throw UsageError("T must be > 0");
  if (!(o.p > 1.0 && std::isfinite(o.p))) throw UsageError("p must be > 1");
}

inline void require_epsilons(const std::vector<double>& eps) {
  for (double e : eps) {
    if (!(e > 0.0 && e < 1.0)) throw UsageError("epsilon values must lie in (0, 1)");
  }
}

inline std::string describe_rule(const Options& o, const BetaRule& rule) {
  return o.beta_rule.empty() ? to_string(rule) + " (default)" : to_string(rule);
}

inline void add_common(RunManifest& m, const Options& o, const Grid& grid) {
  m.add("L", format_double(grid.half_width()));
  m.add("N", std::to_string(grid.size()));
  m.add("T", format_double(o.final_time));
  m.add("p", format_double(o.p));
}

}  // namespace detail

// Commands -------------------------------------------------------------------

/// Regularized reconstruction at each requested t from a fixture (with
/// synthetic noise) or from measured data in a Field CSV.
inline int cmd_solve(const Options& o, std::ostream& out) {
  detail::require_basics(o);
  if (o.input.empty() == o.fixture.empty()) {
    throw UsageError("solve needs exactly one of --input <csv> or --fixture gaussian:a=..,c=..");
  }
  const std::vector<double> times = o.times.empty() ? std::vector<double>{0.0} : o.times;
  detail::require_times(times, o.final_time);
  if (o.epsilons.size() > 1) throw UsageError("solve takes a single --epsilon");
  const double eps = o.epsilons.empty() ? 1e-2 : o.epsilons.front();
  detail::require_epsilons({eps});
  const BetaRule rule = o.beta_rule.empty() ? BetaRule{PowerOfEps{o.p}} : parse_beta_rule(o.beta_rule, o.p);
  const NoiseKind noise = parse_noise(o.noise);
  const RegParams params(select_beta(rule, eps), o.p, o.final_time);

  std::optional<Field> data;
  std::optional<GaussianInitial> fixture;
  if (!o.input.empty()) {
    std::ifstream is(o.input);
    if (!is) throw IoError("cannot open input " + o.input);
    data = read_field_csv(is);
  } else {
    fixture = parse_fixture(o.fixture);
    const Grid grid = detail::make_grid(o);
    if (!fixture->decays_on(grid)) throw UsageError("fixture does not decay below 1e-14 at |x| = L");
    try {
      data = perturb(gaussian_exact(*fixture, o.final_time, grid), {eps, o.seed, noise});
    } catch (const DomainError& e) {
      throw UsageError(e.what());
    }
  }

  RunManifest m{"solve", {}};
  detail::add_common(m, o, data->grid());
  m.add("beta_rule", detail::describe_rule(o, rule));
  m.add("beta", format_double(params.beta()));
  m.add("epsilon", format_double(eps));
  m.add("t", detail::join(times));
  m.add("source", o.input.empty() ? "fixture:" + o.fixture : "input:" + o.input);
  if (fixture) {
    m.add("seed", std::to_string(o.seed));
    m.add("noise", to_string(noise));
  }

  const auto dir = detail::output_dir(o);
  const DataKind kind = fixture ? DataKind{NoisyData{eps, o.seed}} : DataKind{NoisyData{eps, 0}};
  const auto sols = reconstruct_sweep(*data, times, params, kind, rule);
  for (std::size_t i = 0; i < sols.size(); ++i) {
    const auto path = dir / ("solve_t" + format_double(times[i]) + ".csv");
    detail::write_file(path, m, [&](std::ostream& os) { write_reg_solution_csv(os, sols[i]); });
    out << "wrote " << path.string();
    if (fixture) {
      const double err = measure_error(sols[i], gaussian_exact(*fixture, times[i], data->grid()));
      out << "  error_l2=" << format_double(err);
    }
    out << '\n';
  }
  detail::write_file(dir / "solve_manifest.txt", m, [](std::ostream&) {});
  return kOk;
}

/// Naive versus regularized reconstruction error across grid refinements.
inline int cmd_demo_illposed(const Options& o, std::ostream& out) {
  detail::require_basics(o);
  const GaussianInitial fixture = parse_fixture(o.fixture.empty() ? "gaussian:a=1,c=1" : o.fixture);
  if (o.epsilons.size() > 1) throw UsageError("demo-illposed takes a single --epsilon");
  const double eps = o.epsilons.empty() ? 1e-2 : o.epsilons.front();
  if (!(eps >= 0.0 && eps < 1.0)) throw UsageError("epsilon must lie in [0, 1)");
  if (o.times.size() > 1) throw UsageError("demo-illposed takes a single --t");
  const double t = o.times.empty() ? 0.0 : o.times.front();
  detail::require_times({t}, o.final_time);
  const BetaRule rule = o.beta_rule.empty() ? BetaRule{PowerOfEps{o.p}} : parse_beta_rule(o.beta_rule, o.p);
  double beta = 0.0;
  if (eps == 0.0) {
    const auto* manual = std::get_if<ManualBeta>(&rule);
    if (manual == nullptr) throw UsageError("epsilon = 0 requires --beta-rule manual:<b>");
    beta = manual->beta;
  } else {
    beta = select_beta(rule, eps);
  }
  const RegParams params(beta, o.p, o.final_time);
  const NoiseKind noise = parse_noise(o.noise);
  const std::size_t n_seeds = eps == 0.0 ? 1 : o.seeds.value_or(8);
  if (n_seeds == 0) throw UsageError("--seeds must be >= 1");
  const std::vector<std::size_t> sizes{128, 256, 512, 1024};

  RunManifest m{"demo-illposed", {}};
  m.add("L", format_double(o.half_width));
  m.add("N", "128;256;512;1024");
  m.add("T", format_double(o.final_time));
  m.add("p", format_double(o.p));
  m.add("t", format_double(t));
  m.add("beta_rule", detail::describe_rule(o, rule));
  m.add("beta", format_double(beta));
  m.add("epsilon", format_double(eps));
  m.add("seed", std::to_string(o.seed));
  m.add("seeds", std::to_string(n_seeds));
  m.add("noise", to_string(noise));
  m.add("fixture", o.fixture.empty() ? "gaussian:a=1,c=1" : o.fixture);

  std::ostringstream body;
  body << "N,naive_log10_error,naive_blown_up,regularized_error,relative_regularized_error,"
          "expected_regularized_error\n";
  for (std::size_t n : sizes) {
    Grid grid(1.0, 8);
    try {
      grid = Grid(o.half_width, n);
    } catch (const DomainError& e) {
      throw UsageError(e.what());
    }
    if (!fixture.decays_on(grid)) throw UsageError("fixture does not decay below 1e-14 at |x| = L");
    const Field phi = gaussian_exact(fixture, o.final_time, grid);
    const Field exact = gaussian_exact(fixture, t, grid);
    double naive_log = 0.0;
    double reg_log = 0.0;
    bool blown = false;
    for (std::size_t i = 0; i < n_seeds; ++i) {
      Field data = phi;
      try {
        data = perturb(phi, {eps, task_seed(o.seed, i), noise});
      } catch (const DomainError& e) {
        throw UsageError(e.what());
      }
      naive_log += naive_backward_log_error(data, exact, t, o.final_time);
      blown = blown || naive_backward(data, t, o.final_time).blown_up;
      reg_log += std::log(measure_error(regularize(data, t, params), exact));
    }
    const double denom = static_cast<double>(n_seeds);
    const double reg_err = std::exp(reg_log / denom);

    // E||error||^2 = bias^2 + eps^2 * (mean of A^2 over the modes the noise occupies)
    const double bias = measure_error(regularize(phi, t, params), exact);
    const auto* band = std::get_if<BandLimitedNoise>(&noise);
    double a2 = 0.0;
    std::size_t modes = 0;
    for (std::size_t k = 0; k < grid.size(); ++k) {
      const double xi = grid.freq(k);
      if (band != nullptr && std::abs(xi) > band->cut) continue;
      a2 += std::pow(reg_multiplier_A(xi, t, params), 2);
      ++modes;
    }
    const double expected = std::sqrt(bias * bias + eps * eps * a2 / static_cast<double>(modes));

    body << n << ',' << format_double(naive_log / denom / std::log(10.0)) << ','
         << (blown ? "yes" : "no") << ',' << format_double(reg_err) << ','
         << format_double(reg_err / l2_norm(exact)) << ',' << format_double(expected) << '\n';
  }
  const auto path = detail::output_dir(o) / "demo_illposed.csv";
  detail::write_file(path, m, [&](std::ostream& os) { os << body.str(); });
  out << body.str();
  out << "wrote " << path.string() << '\n';
  return kOk;
}

/// Multiplier bound lattice and theorem checks; exit 1 if any gated check fails.
inline int cmd_verify_bounds(const Options& o, std::ostream& out) {
  detail::require_basics(o);
  const Grid grid = detail::make_grid(o);
  const GaussianInitial fixture = parse_fixture(o.fixture.empty() ? "gaussian:a=1,c=1" : o.fixture);
  std::vector<TheoremId> theorems;
  if (o.theorem == "all") {
    theorems = {TheoremId::T1, TheoremId::T2, TheoremId::T3a, TheoremId::T3b, TheoremId::T4};
  } else if (auto id = parse_theorem(o.theorem)) {
    theorems = {*id};
  } else {
    throw UsageError("theorem must be T1, T2, T3a, T3b, T4 or all");
  }
  Scenario sc;
  sc.grid = grid;
  sc.fixture = fixture;
  sc.final_time = o.final_time;
  sc.p = o.p;
  sc.epsilons = o.epsilons.empty() ? std::vector<double>{1e-2, 1e-3, 1e-4} : o.epsilons;
  sc.times = o.times.empty() ? std::vector<double>{0.0, 0.25 * o.final_time, 0.5 * o.final_time,
                                                   0.75 * o.final_time, o.final_time}
                             : o.times;
  sc.seed = o.seed;
  sc.n_seeds = o.seeds.value_or(1);
  sc.noise = parse_noise(o.noise);
  const PriorChoice prior = parse_prior(o.prior);
  sc.gamma = prior.theorem == TheoremId::T4 ? prior.gamma : 0.2;
  detail::require_epsilons(sc.epsilons);
  detail::require_times(sc.times, sc.final_time);
  if (sc.n_seeds == 0) throw UsageError("--seeds must be >= 1");
  if (!fixture.decays_on(grid)) throw UsageError("fixture does not decay below 1e-14 at |x| = L");
  if (!o.beta_rule.empty()) {
    sc.rule = parse_beta_rule(o.beta_rule, o.p);
    for (TheoremId id : theorems) {
      try {
        require_rule(id, *sc.rule, sc.p);
      } catch (const RuleMismatch& e) {
        throw UsageError(e.what());
      }
    }
  }

  RunManifest m{"verify-bounds", {}};
  detail::add_common(m, o, grid);
  m.add("theorem", o.theorem);
  m.add("beta_rule", o.beta_rule.empty() ? "per-theorem (T1,T2,T3b,T4: eps; T3a: eps^p)"
                                         : o.beta_rule);
  m.add("epsilon", detail::join(sc.epsilons));
  m.add("t", detail::join(sc.times));
  m.add("seed", std::to_string(sc.seed));
  m.add("seeds", std::to_string(sc.n_seeds));
  m.add("noise", to_string(sc.noise));
  m.add("gamma", format_double(sc.gamma));
  m.add("fixture", o.fixture.empty() ? "gaussian:a=1,c=1" : o.fixture);

  const auto dir = detail::output_dir(o);
  bool ok = true;
  std::vector<ReportRow> rows;
  for (TheoremId id : theorems) {
    std::vector<ReportRow> r;
    try {
      r = verify_theorem(id, sc);
    } catch (const GammaTooLarge& e) {
      throw UsageError(e.what());
    } catch (const DomainError& e) {
      throw UsageError(e.what());
    }
    const auto fails = std::count_if(r.begin(), r.end(), [](const ReportRow& x) { return !x.pass; });
    out << to_string(id) << ": " << r.size() - fails << '/' << r.size() << " PASS\n";
    ok = ok && fails == 0;
    rows.insert(rows.end(), r.begin(), r.end());
    if (id == TheoremId::T3b) {
      const auto diag = h2_zero_mode_diagnostics(sc);
      detail::write_file(dir / "verify_h2_zero_mode.csv", m,
                         [&](std::ostream& os) { write_zero_mode_csv(os, diag); });
    }
  }
  detail::write_file(dir / "verify_report.csv", m,
                     [&](std::ostream& os) { write_report_csv(os, rows); });

  if (o.theorem == "all") {
    const auto kernel_rows = verify_multiplier_bounds();
    const auto fails = std::count_if(kernel_rows.begin(), kernel_rows.end(),
                                     [](const MultiplierCheckRow& x) { return !x.pass; });
    out << "multiplier bounds: " << kernel_rows.size() - fails << '/' << kernel_rows.size()
        << " PASS\n";
    ok = ok && fails == 0;
    detail::write_file(dir / "verify_kernel.csv", m,
                       [&](std::ostream& os) { write_multiplier_check_csv(os, kernel_rows); });

    const auto h2 = check_h2_restricted(grid.dxi());
    const auto holds = std::count_if(h2.begin(), h2.end(),
                                     [](const H2RestrictedRow& x) { return x.holds; });
    out << "H2 bias multiplier on |xi| >= " << format_double(grid.dxi()) << ": claimed bound holds in "
        << holds << '/' << h2.size() << " cases (informational)\n";
    detail::write_file(dir / "verify_h2_restricted.csv", m,
                       [&](std::ostream& os) { write_h2_restricted_csv(os, h2); });
  }
  out << (ok ? "ALL PASS" : "FAIL") << '\n';
  return ok ? kOk : kCheckFailed;
}

/// Convergence-rate study for one prior class.
inline int cmd_study(const Options& o, std::ostream& out) {
  detail::require_basics(o);
  const Grid grid = detail::make_grid(o);
  const GaussianInitial fixture = parse_fixture(o.fixture.empty() ? "gaussian:a=1,c=1" : o.fixture);
  const PriorChoice prior = parse_prior(o.prior);
  Scenario sc;
  sc.grid = grid;
  sc.fixture = fixture;
  sc.final_time = o.final_time;
  sc.p = o.p;
  sc.epsilons = o.epsilons.empty() ? std::vector<double>{1e-1, 1e-2, 1e-3, 1e-4, 1e-5} : o.epsilons;
  if (sc.epsilons.size() < 3) throw UsageError("need >= 3 epsilon values");
  sc.times = o.times.empty() ? std::vector<double>{0.0, 0.25 * o.final_time, 0.5 * o.final_time,
                                                   0.75 * o.final_time}
                             : o.times;
  sc.seed = o.seed;
  sc.n_seeds = o.seeds.value_or(8);
  sc.noise = parse_noise(o.noise);
  if (prior.theorem == TheoremId::T4) sc.gamma = prior.gamma;
  detail::require_epsilons(sc.epsilons);
  detail::require_times(sc.times, sc.final_time);
  if (sc.n_seeds == 0) throw UsageError("--seeds must be >= 1");
  if (!fixture.decays_on(grid)) throw UsageError("fixture does not decay below 1e-14 at |x| = L");
  if (!o.beta_rule.empty()) {
    sc.rule = parse_beta_rule(o.beta_rule, o.p);
    try {
      require_rule(prior.theorem, *sc.rule, sc.p);
    } catch (const RuleMismatch& e) {
      throw UsageError(e.what());
    }
  }

  RateReport rep;
  try {
    rep = rate_study(prior.theorem, sc);
  } catch (const GammaTooLarge& e) {
    throw UsageError(e.what());
  } catch (const DomainError& e) {
    throw UsageError(e.what());
  }

  RunManifest m{"study", {}};
  detail::add_common(m, o, grid);
  m.add("prior", o.prior);
  m.add("theorem", to_string(prior.theorem));
  m.add("beta_rule", detail::describe_rule(o, sc.rule.value_or(natural_rule(prior.theorem, sc.p))));
  m.add("epsilon", detail::join(sc.epsilons));
  m.add("t", detail::join(sc.times));
  m.add("seed", std::to_string(sc.seed));
  m.add("seeds", std::to_string(sc.n_seeds));
  m.add("noise", to_string(sc.noise));
  m.add("fixture", o.fixture.empty() ? "gaussian:a=1,c=1" : o.fixture);

  const auto dir = detail::output_dir(o);
  detail::write_file(dir / "study_report.csv", m,
                     [&](std::ostream& os) { write_report_csv(os, rep.rows); });
  detail::write_file(dir / "study_rates.csv", m,
                     [&](std::ostream& os) { write_rate_summary_csv(os, rep); });
  detail::write_file(dir / "study_plot.dat", m, [&](std::ostream& os) { write_plot_data(os, rep); });
  detail::write_file(dir / "study_seed_slopes.csv", m, [&](std::ostream& os) {
    os << "t,seed,fitted_slope\n";
    for (const auto& [t, slopes] : rep.per_seed_slope) {
      for (const auto& [seed, slope] : slopes) {
        os << format_double(t) << ',' << seed << ',' << format_double(slope) << '\n';
      }
    }
  });
  write_rate_summary_csv(out, rep);
  const bool ok = all_pass(rep.rows);
  if (!ok) out << "some measured errors exceed their bound; see study_report.csv\n";
  return ok ? kOk : kCheckFailed;
}

// Entry point ----------------------------------------------------------------

namespace detail {

inline void add_shared_flags(CLI::App* sub, Options& o) {
  sub->add_option("--fixture", o.fixture, "gaussian:a=<width>,c=<amplitude>");
  sub->add_option("--output-dir", o.output_dir, "output directory (default $BACKCAST_OUTPUT_DIR or .)");
  sub->add_option("--T", o.final_time, "final time T")->capture_default_str();
  sub->add_option("--t", o.times, "reconstruction time(s) in [0, T]; repeatable");
  sub->add_option("--epsilon", o.epsilons, "noise level(s); repeatable");
  sub->add_option("--beta-rule", o.beta_rule, "eps | eps^p | manual:<b>");
  sub->add_option("--p", o.p, "damping exponent p > 1")->capture_default_str();
  sub->add_option("--L", o.half_width, "domain half-width")->capture_default_str();
  sub->add_option("--seed", o.seed, "base noise seed")->capture_default_str();
  sub->add_option("--noise", o.noise, "white | band:<cut>")->capture_default_str();
}

}  // namespace detail

inline int run_cli(std::vector<std::string> args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Fourier-multiplier regularization of the backward heat equation"};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);
  Options o;
  std::size_t seeds = 0;

  auto* solve = app.add_subcommand("solve", "regularized reconstruction at the requested times");
  detail::add_shared_flags(solve, o);
  solve->add_option("--input", o.input, "measured final-time data (Field CSV)");
  solve->add_option("--N", o.n_points, "grid points (even, >= 8)")->capture_default_str();

  auto* demo = app.add_subcommand("demo-illposed", "naive vs regularized error across N");
  detail::add_shared_flags(demo, o);
  demo->add_option("--seeds", seeds, "number of noise draws (default 8)");

  auto* verify = app.add_subcommand("verify-bounds", "multiplier bounds and theorem checks");
  detail::add_shared_flags(verify, o);
  verify->add_option("--N", o.n_points, "grid points (even, >= 8)")->capture_default_str();
  verify->add_option("--seeds", seeds, "noise draws per point (default 1)");
  verify->add_option("--prior", o.prior, "gevrey:gamma=<g> sets the T4 weight");
  verify->add_option("--theorem", o.theorem, "T1 | T2 | T3a | T3b | T4 | all")->capture_default_str();

  auto* study = app.add_subcommand("study", "convergence-rate study");
  detail::add_shared_flags(study, o);
  study->add_option("--N", o.n_points, "grid points (even, >= 8)")->capture_default_str();
  study->add_option("--seeds", seeds, "noise draws per point (default 8)");
  study->add_option("--prior", o.prior, "l2 | h2 | gevrey:gamma=<g>")->capture_default_str();

  std::vector<const char*> argv{"backcast"};
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForVersion&) {
    out << kVersion << '\n';
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  }
  for (auto* sub : {demo, verify, study}) {
    if (sub->parsed() && sub->count("--seeds") > 0) o.seeds = seeds;
  }

  try {
    if (solve->parsed()) return cmd_solve(o, out);
    if (demo->parsed()) return cmd_demo_illposed(o, out);
    if (verify->parsed()) return cmd_verify_bounds(o, out);
    return cmd_study(o, out);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const RuleMismatch& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const GammaTooLarge& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const ParseError& e) {
    err << "error: " << o.input << ": " << e.what() << '\n';
    return kInput;
  } catch (const IoError& e) {
    err << "error: " << e.what() << '\n';
    return kInput;
  } catch (const DomainError& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  }
}

}  // namespace backcast::cli
