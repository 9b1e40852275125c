#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "config.hpp"
#include "demi_check.hpp"
#include "fractional.hpp"
#include "generators.hpp"
#include "gronwall.hpp"
#include "report.hpp"
#include "rng.hpp"
#include "sde_bem.hpp"

namespace demigron {

enum class Command { DemiCheck, GronwallLemma, GronwallTheorem, Fractional, Bem, All };

inline std::string to_string(Command c) {
  switch (c) {
    case Command::DemiCheck: return "demi-check";
    case Command::GronwallLemma: return "gronwall-lemma";
    case Command::GronwallTheorem: return "gronwall-theorem";
    case Command::Fractional: return "fractional";
    case Command::Bem: return "bem";
    case Command::All: return "all";
  }
  return "?";
}

inline Command parse_command(const std::string& name) {
  for (Command c : {Command::DemiCheck, Command::GronwallLemma, Command::GronwallTheorem, Command::Fractional,
                    Command::Bem, Command::All})
    if (to_string(c) == name) return c;
  fail(ErrorCode::ConfigError, "command: unknown command '" + name + "'");
}

struct GronwallSettings {
  std::string g = "both";  // deterministic | random | both
  double g_value = 0.05;
  double x_offset = 1.0;
  double noise_scale = 1.0;
};

struct BemSettings {
  std::string model = "ou";  // ou | bounded | frozen
  double kappa = 1.0;
  double sigma = 1.0;
  double x0 = 1.0;
  double T = 1.0;
  double h0 = 0.25;
  std::vector<double> h_grid{0.02, 0.05, 0.1, 0.2};
  NewtonControls newton{};
  double probe_box = 10.0;
};

/// Fully resolved, validated run parameters for one command.
struct RunConfig {
  Command command = Command::All;
  std::vector<std::uint64_t> seeds{20261016};
  std::size_t n_paths = 100000;
  std::size_t n_steps = 50;
  std::vector<double> p_grid{0.25, 0.5, 0.75};
  std::vector<double> mu{kInf};
  std::vector<double> nu{1.0};
  std::vector<std::size_t> time_indices;  // empty: {1, floor(N/2), N}
  std::string output_dir = "out";
  GeneratorSpec generator = GeneratorSpec::random_walk();
  DemiMode mode = DemiMode::Demi;
  double level = 0.999;
  double stop_threshold = 0.0;  // > 0: also check the stopped batch
  GronwallSettings gronwall{};
  FractionalModel fractional{{0.3, 0.7}, {1.0, 1.0}, 0.05, 20, 0.5, 0.5};
  double fractional_theta = 0.5;
  BemSettings bem{};

  std::vector<std::size_t> resolved_time_indices(std::size_t horizon) const {
    if (!time_indices.empty()) return time_indices;
    std::vector<std::size_t> out{1, horizon / 2, horizon};
    out.erase(std::remove(out.begin(), out.end(), std::size_t{0}), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
  }
};

/// Bundled defaults for each command.
inline RunConfig default_config(Command command) {
  RunConfig cfg;
  cfg.command = command;
  switch (command) {
    case Command::DemiCheck:
      cfg.generator = GeneratorSpec::two_point(0.3);
      cfg.n_steps = 2;
      cfg.mode = DemiMode::Demisub;
      break;
    case Command::GronwallLemma:
      cfg.generator = GeneratorSpec::random_walk();
      cfg.n_steps = 50;
      break;
    case Command::GronwallTheorem:
      cfg.generator = GeneratorSpec::bounded_associated(0.5, 1.0);
      cfg.n_steps = 20;
      cfg.n_paths = 20000;
      cfg.p_grid = {0.25, 0.45};
      cfg.mu = {kInf, 2.0};
      cfg.nu = {1.0, 2.0};
      break;
    case Command::Fractional:
      cfg.n_paths = 10000;
      cfg.p_grid = {0.25, 0.5};
      break;
    case Command::Bem:
      cfg.p_grid = {0.25, 0.5};
      break;
    case Command::All: break;
  }
  return cfg;
}

namespace detail {

template <class Check>
void config_check(bool ok, const std::string& key, const Check& describe) {
  if (!ok) fail(ErrorCode::ConfigError, key + ": " + describe());
}

inline BaseLaw parse_law(const std::string& key, const std::string& name) {
  if (name == "rademacher") return BaseLaw::Rademacher;
  if (name == "gaussian") return BaseLaw::Gaussian;
  if (name == "uniform") return BaseLaw::Uniform;
  fail(ErrorCode::ConfigError, key + ": unknown distribution '" + name + "'");
}

inline GeneratorKind parse_kind(const std::string& name) {
  for (GeneratorKind k : {GeneratorKind::RandomWalk, GeneratorKind::AssociatedPartialSum,
                          GeneratorKind::TwoPointDemisub, GeneratorKind::BoundedAssociatedPartialSum})
    if (to_string(k) == name) return k;
  fail(ErrorCode::ConfigError, "generator.kind: unknown generator '" + name + "'");
}

}  // namespace detail

/// Resolves a parsed file (plus command-line overrides already merged into it)
/// onto the defaults of its command and validates every parameter before any
/// simulation starts. Errors are ConfigError and name the offending key.
inline RunConfig resolve_config(const KeyValueConfig& kv, std::optional<Command> forced = std::nullopt) {
  const Command command = forced ? *forced : parse_command(kv.get_string("command", "all"));
  RunConfig cfg = default_config(command);
  using detail::config_check;

  cfg.seeds = kv.get_u64s("seeds", cfg.seeds);
  cfg.n_paths = kv.get_u64("n_paths", cfg.n_paths);
  cfg.n_steps = kv.get_u64("n_steps", cfg.n_steps);
  cfg.p_grid = kv.get_doubles("p_grid", cfg.p_grid);
  cfg.mu = kv.get_doubles("mu", cfg.mu);
  cfg.nu = kv.get_doubles("nu", cfg.nu);
  cfg.output_dir = kv.get_string("output_dir", cfg.output_dir);
  if (kv.has("time_indices")) {
    cfg.time_indices.clear();
    for (std::uint64_t v : kv.get_u64s("time_indices", {})) cfg.time_indices.push_back(v);
  }

  config_check(cfg.n_paths >= 1, "n_paths", [] { return "must be >= 1"; });
  for (double p : cfg.p_grid)
    config_check(p > 0.0 && p < 1.0, "p_grid", [p] { return "p = " + format_double(p) + " is outside (0,1)"; });
  config_check(cfg.mu.size() == cfg.nu.size(), "mu", [] { return "mu and nu lists must have equal length"; });
  for (std::size_t i = 0; i < cfg.mu.size(); ++i) {
    const double mu = cfg.mu[i], nu = cfg.nu[i];
    config_check(mu >= 1.0 && nu >= 1.0, "mu", [] { return "mu and nu must lie in [1, inf]"; });
    const double s = (std::isinf(mu) ? 0.0 : 1.0 / mu) + (std::isinf(nu) ? 0.0 : 1.0 / nu);
    config_check(std::abs(s - 1.0) <= 1e-12, "nu", [] { return "1/mu + 1/nu must equal 1"; });
  }

  GeneratorSpec& g = cfg.generator;
  if (kv.has("generator.kind")) g.kind = detail::parse_kind(*kv.get("generator.kind"));
  if (kv.has("generator.increment")) g.increment.law = detail::parse_law("generator.increment", *kv.get("generator.increment"));
  if (kv.has("generator.shock")) g.shock.law = detail::parse_law("generator.shock", *kv.get("generator.shock"));
  g.increment.scale = kv.get_double("generator.scale", g.increment.scale);
  g.shock.scale = kv.get_double("generator.shock_scale", g.shock.scale);
  g.theta = kv.get_double("generator.theta", g.theta);
  g.p = kv.get_double("generator.p", g.p);
  g.bound = kv.get_double("generator.bound", g.bound);
  g.starts_at_zero = kv.get_bool("generator.starts_at_zero", g.starts_at_zero);
  config_check(g.p >= 0.0 && g.p <= 1.0, "generator.p", [] { return "must lie in [0,1]"; });
  config_check(g.theta >= 0.0, "generator.theta", [] { return "must be >= 0"; });
  config_check(g.bound > 0.0, "generator.bound", [] { return "must be > 0"; });
  config_check(g.increment.scale > 0.0, "generator.scale", [] { return "must be > 0"; });
  config_check(g.shock.scale > 0.0, "generator.shock_scale", [] { return "must be > 0"; });
  config_check(g.starts_at_zero || g.kind != GeneratorKind::TwoPointDemisub, "generator.starts_at_zero",
               [] { return "two_point_demisub always starts at zero"; });

  if (kv.has("demi.mode")) {
    const std::string m = *kv.get("demi.mode");
    config_check(m == "demi" || m == "demisub", "demi.mode", [&] { return "expected demi or demisub, got '" + m + "'"; });
    cfg.mode = m == "demi" ? DemiMode::Demi : DemiMode::Demisub;
  }
  cfg.level = kv.get_double("demi.level", cfg.level);
  config_check(cfg.level > 0.0 && cfg.level < 1.0, "demi.level", [] { return "must lie in (0,1)"; });
  cfg.stop_threshold = kv.get_double("demi.stop_threshold", cfg.stop_threshold);
  config_check(cfg.stop_threshold >= 0.0, "demi.stop_threshold", [] { return "must be >= 0 (0 disables)"; });

  auto& gw = cfg.gronwall;
  gw.g = kv.get_string("gronwall.g", gw.g);
  config_check(gw.g == "deterministic" || gw.g == "random" || gw.g == "both", "gronwall.g",
               [&] { return "expected deterministic, random or both"; });
  gw.g_value = kv.get_double("gronwall.g_value", gw.g_value);
  gw.x_offset = kv.get_double("gronwall.x_offset", gw.x_offset);
  gw.noise_scale = kv.get_double("gronwall.noise_scale", gw.noise_scale);
  config_check(gw.g_value >= 0.0, "gronwall.g_value", [] { return "must be >= 0"; });
  config_check(gw.x_offset >= 0.0, "gronwall.x_offset", [] { return "must be >= 0"; });
  config_check(gw.noise_scale >= 0.0, "gronwall.noise_scale", [] { return "must be >= 0"; });

  auto& fm = cfg.fractional;
  fm.betas = kv.get_doubles("fractional.betas", fm.betas);
  fm.q = kv.get_doubles("fractional.q", fm.q);
  fm.tau = kv.get_double("fractional.tau", fm.tau);
  fm.N = kv.get_u64("fractional.N", fm.N);
  fm.lambda1 = kv.get_double("fractional.lambda1", fm.lambda1);
  fm.lambda2 = kv.get_double("fractional.lambda2", fm.lambda2);
  cfg.fractional_theta = kv.get_double("fractional.theta", cfg.fractional_theta);
  config_check(fm.betas.size() == fm.q.size(), "fractional.q", [] { return "needs one weight per order"; });
  for (std::size_t r = 0; r < fm.betas.size(); ++r) {
    config_check(fm.betas[r] > 0.0 && fm.betas[r] < 1.0 && (r == 0 || fm.betas[r] > fm.betas[r - 1]),
                 "fractional.betas", [] { return "orders must be strictly increasing in (0,1)"; });
    config_check(fm.q[r] > 0.0, "fractional.q", [] { return "weights must be > 0"; });
  }
  config_check(fm.tau > 0.0, "fractional.tau", [] { return "must be > 0"; });
  config_check(fm.N >= 1, "fractional.N", [] { return "must be >= 1"; });
  config_check(fm.lambda1 >= 0.0, "fractional.lambda1", [] { return "must be >= 0"; });
  config_check(fm.lambda2 >= 0.0, "fractional.lambda2", [] { return "must be >= 0"; });
  config_check(cfg.fractional_theta >= 0.0, "fractional.theta", [] { return "must be >= 0"; });

  auto& bm = cfg.bem;
  bm.model = kv.get_string("bem.model", bm.model);
  config_check(bm.model == "ou" || bm.model == "bounded" || bm.model == "frozen", "bem.model",
               [&] { return "expected ou, bounded or frozen, got '" + bm.model + "'"; });
  bm.kappa = kv.get_double("bem.kappa", bm.kappa);
  bm.sigma = kv.get_double("bem.sigma", bm.sigma);
  bm.x0 = kv.get_double("bem.x0", bm.x0);
  bm.T = kv.get_double("bem.T", bm.T);
  bm.h0 = kv.get_double("bem.h0", bm.h0);
  bm.h_grid = kv.get_doubles("bem.h_grid", bm.h_grid);
  bm.newton.tol = kv.get_double("bem.newton_tol", bm.newton.tol);
  bm.newton.max_iter = kv.get_u64("bem.newton_max_iter", bm.newton.max_iter);
  bm.probe_box = kv.get_double("bem.probe_box", bm.probe_box);
  config_check(bm.kappa >= 0.0, "bem.kappa", [] { return "must be >= 0"; });
  config_check(bm.T > 0.0, "bem.T", [] { return "must be > 0"; });
  config_check(bm.newton.tol > 0.0, "bem.newton_tol", [] { return "must be > 0"; });
  config_check(bm.newton.max_iter >= 1, "bem.newton_max_iter", [] { return "must be >= 1"; });
  config_check(bm.probe_box > 0.0, "bem.probe_box", [] { return "must be > 0"; });
  const double L = bm.model == "frozen" ? 0.0 : 0.5 * bm.sigma * bm.sigma;
  config_check(bm.h0 > 0.0 && (L == 0.0 || 2.0 * bm.h0 * L < 1.0), "bem.h0", [] { return "must lie in (0, 1/(2L))"; });
  for (double h : bm.h_grid)
    config_check(h > 0.0 && h < bm.h0 && h < 1.0, "bem.h_grid",
                 [h] { return "h = " + format_double(h) + " must lie in (0, min(h0, 1))"; });

  const bool needs_demi = command == Command::DemiCheck;
  config_check(!needs_demi || cfg.n_paths >= 30, "n_paths", [] { return "the demimartingale check needs >= 30 paths"; });
  config_check(!needs_demi || cfg.n_steps >= 2, "n_steps", [] { return "the demimartingale check needs N >= 2"; });
  const std::size_t horizon = command == Command::Fractional ? fm.N : cfg.n_steps;
  for (std::size_t n : cfg.time_indices)
    config_check(n >= 1 && n <= horizon, "time_indices", [n] { return std::to_string(n) + " is outside 1..N"; });
  return cfg;
}

/// Output of one command: the cases.csv body, a JSON body that is a pure
/// function of (config, seeds), and extra CSV files to write next to it.
struct CommandResult {
  Command command = Command::All;
  bool passed = true;
  std::string cases_csv;
  nlohmann::ordered_json body;
  std::vector<std::pair<std::string, std::string>> extra_files;
};

namespace recipes {

/// Salts separating the random streams a harness derives from one seed.
enum Salt : std::uint64_t { kSaltS = 1, kSaltX = 2, kSaltG = 3, kSaltY = 4, kSaltXi = 5, kSaltBem = 6 };

/// Nonnegative X with X_n = max(0, offset + noise_scale * E_n + S_n + sum_{k<n} G_k X_k),
/// E_n ~ Exp(1): a near-tight instance of the Gronwall hypothesis.
inline TrajectoryBatch gronwall_x(const TrajectoryBatch& s, const GSequence& g, std::uint64_t seed, double offset,
                                  double noise_scale) {
  TrajectoryBatch x(s.n_paths(), s.n_steps(), "X");
  for (std::size_t r = 0; r < s.n_paths(); ++r) {
    Substream rng(StreamSeed{derive_seed(seed, kSaltX), r});
    double feedback = 0.0;
    for (std::size_t n = 0; n <= s.n_steps(); ++n) {
      x(r, n) = std::max(0.0, offset + noise_scale * rng.exponential() + s(r, n) + feedback);
      const double gk = std::holds_alternative<std::vector<double>>(g) ? std::get<std::vector<double>>(g)[n]
                                                                        : std::get<TrajectoryBatch>(g)(r, n);
      feedback += gk * x(r, n);
    }
  }
  return x;
}

/// G_k = 2 g_value U_k with U_k ~ U[0,1) independent of everything else.
inline TrajectoryBatch random_g(std::size_t n_paths, std::size_t n_steps, double g_value, std::uint64_t seed) {
  TrajectoryBatch g(n_paths, n_steps, "G");
  for (std::size_t r = 0; r < n_paths; ++r) {
    Substream rng(StreamSeed{derive_seed(seed, kSaltG), r});
    for (std::size_t k = 0; k <= n_steps; ++k) g(r, k) = 2.0 * g_value * rng.uniform();
  }
  return g;
}

struct FractionalInputs {
  TrajectoryBatch x;
  TrajectoryBatch y;
  TrajectoryBatch y_increments;
};

/// X_n = xi_n^2 for associated increments xi_0..xi_N (so X_0 is random), and
/// Y_n = eta_n, n = 1..N, the increments of an independent associated partial sum.
inline FractionalInputs fractional_inputs(std::size_t n_paths, std::size_t horizon, double theta, std::uint64_t seed) {
  const auto xi = increments_of(generate_paths(GeneratorSpec::associated(theta), horizon + 1, n_paths,
                                               derive_seed(seed, kSaltXi)));
  const auto eta = increments_of(generate_paths(GeneratorSpec::associated(theta), horizon, n_paths,
                                                derive_seed(seed, kSaltY)));
  TrajectoryBatch x(n_paths, horizon, "X");
  TrajectoryBatch y(n_paths, horizon, "Y");
  for (std::size_t r = 0; r < n_paths; ++r) {
    for (std::size_t n = 0; n <= horizon; ++n) x(r, n) = xi(r, n) * xi(r, n);
    for (std::size_t n = 1; n <= horizon; ++n) y(r, n) = eta(r, n - 1);
  }
  return {std::move(x), std::move(y), eta};
}

inline SdeModel bem_model(const BemSettings& s) {
  if (s.model == "bounded") return zoo::bounded_diffusion(s.kappa, s.sigma);
  if (s.model == "frozen") return zoo::frozen();
  return zoo::ornstein_uhlenbeck(s.kappa, s.sigma);
}

}  // namespace recipes

namespace detail {

inline std::vector<HolderPair> pairs_for(const RunConfig& cfg, double p) {
  std::vector<HolderPair> out;
  for (std::size_t i = 0; i < cfg.mu.size(); ++i)
    if (p * cfg.nu[i] < 1.0 - 1e-9) out.push_back({cfg.mu[i], cfg.nu[i], p});
  return out;
}

inline nlohmann::ordered_json seed_list(const RunConfig& cfg) {
  nlohmann::ordered_json j = nlohmann::ordered_json::array();
  for (auto s : cfg.seeds) j.push_back(s);
  return j;
}

}  // namespace detail

inline CommandResult run_demi_check(const RunConfig& cfg) {
  CommandResult result{Command::DemiCheck, true, {}, {}, {}};
  std::ostringstream csv;
  csv << "j,function,estimate,stderr,z,verdict\n";
  nlohmann::ordered_json per_seed = nlohmann::ordered_json::array();
  for (std::uint64_t seed : cfg.seeds) {
    const TrajectoryBatch batch = generate_paths(cfg.generator, cfg.n_steps, cfg.n_paths, seed);
    const DemiReport report = check_demimartingale(batch, standard_family(batch), cfg.level, cfg.mode);
    std::ostringstream rows;
    report.write_csv(rows);
    csv << rows.str().substr(rows.str().find('\n') + 1);
    nlohmann::ordered_json entry{{"seed", seed}, {"demi", report.summary()}};
    result.passed = result.passed && report.passed;
    if (cfg.stop_threshold > 0.0) {
      const TrajectoryBatch stopped = stopped_batch(batch, cfg.stop_threshold);
      const DemiReport sreport = check_demimartingale(stopped, standard_family(stopped), cfg.level, DemiMode::Demisub);
      entry["stopped"] = sreport.summary();
      result.passed = result.passed && sreport.passed;
    }
    per_seed.push_back(std::move(entry));
  }
  result.cases_csv = csv.str();
  result.body = {{"generator", cfg.generator.describe()},
                 {"mode", cfg.mode == DemiMode::Demi ? "demi" : "demisub"},
                 {"n_paths", cfg.n_paths},
                 {"n_steps", cfg.n_steps},
                 {"seeds", detail::seed_list(cfg)},
                 {"per_seed", per_seed}};
  return result;
}

inline CommandResult run_gronwall_lemma(const RunConfig& cfg) {
  VerificationReport all;
  all.command = "gronwall-lemma";
  for (std::uint64_t seed : cfg.seeds) {
    const TrajectoryBatch batch = generate_paths(cfg.generator, cfg.n_steps, cfg.n_paths, seed);
    for (std::size_t n : cfg.resolved_time_indices(cfg.n_steps)) all.append(verify_sup_moment_bound(batch, cfg.p_grid, n));
  }
  std::ostringstream csv;
  all.write_csv(csv);
  return {Command::GronwallLemma, all.passed(), csv.str(),
          {{"generator", cfg.generator.describe()}, {"seeds", detail::seed_list(cfg)}, {"report", all.to_json()}},
          {}};
}

inline CommandResult run_gronwall_theorem(const RunConfig& cfg) {
  VerificationReport all;
  all.command = "gronwall-theorem";
  const std::size_t N = cfg.n_steps;
  for (std::uint64_t seed : cfg.seeds) {
    const TrajectoryBatch s = generate_paths(cfg.generator, N, cfg.n_paths, derive_seed(seed, recipes::kSaltS));
    std::vector<GSequence> gs;
    if (cfg.gronwall.g != "random") gs.emplace_back(std::vector<double>(N + 1, cfg.gronwall.g_value));
    if (cfg.gronwall.g != "deterministic") gs.emplace_back(recipes::random_g(cfg.n_paths, N, cfg.gronwall.g_value, seed));
    for (const auto& g : gs) {
      const TrajectoryBatch x = recipes::gronwall_x(s, g, seed, cfg.gronwall.x_offset, cfg.gronwall.noise_scale);
      const GronwallInstance inst = build_instance(x, s, g);
      for (double p : cfg.p_grid)
        for (const auto& pair : detail::pairs_for(cfg, p))
          for (std::size_t n : cfg.resolved_time_indices(N)) all.append(verify_gronwall(inst, pair, n));
    }
  }
  std::ostringstream csv;
  all.write_csv(csv);
  return {Command::GronwallTheorem, all.passed(), csv.str(),
          {{"generator", cfg.generator.describe()}, {"seeds", detail::seed_list(cfg)}, {"report", all.to_json()}},
          {}};
}

inline CommandResult run_fractional(const RunConfig& cfg) {
  VerificationReport all;
  all.command = "fractional";
  const FractionalModel& model = cfg.fractional;
  for (std::uint64_t seed : cfg.seeds) {
    const auto inputs = recipes::fractional_inputs(cfg.n_paths, model.N, cfg.fractional_theta, seed);
    if (inputs.y_increments.n_paths() >= 60) {
      const DemiReport assoc =
          check_association(inputs.y_increments, standard_family(inputs.y_increments, 0, 4), cfg.level);
      all.side_checks.emplace_back("Y passes the association check (seed " + std::to_string(seed) + ")", assoc.passed);
    }
    const FractionalInstance inst = build_fractional_instance(model, inputs.x, inputs.y);
    for (double p : cfg.p_grid)
      for (const auto& pair : detail::pairs_for(cfg, p))
        for (std::size_t n : cfg.resolved_time_indices(model.N)) all.append(verify_fractional_gronwall(model, inst, n, pair));
  }
  std::ostringstream csv, coeffs;
  all.write_csv(csv);
  CoefficientTable::make(model.beta_max(), model.N).write_csv(coeffs);
  nlohmann::ordered_json m{{"betas", model.betas}, {"q", model.q},         {"tau", model.tau},
                           {"N", model.N},         {"lambda1", model.lambda1}, {"lambda2", model.lambda2}};
  return {Command::Fractional,
          all.passed(),
          csv.str(),
          {{"model", m}, {"seeds", detail::seed_list(cfg)}, {"report", all.to_json()}},
          {{"coefficients.csv", coeffs.str()}}};
}

inline CommandResult run_bem(const RunConfig& cfg) {
  const SdeModel model = recipes::bem_model(cfg.bem);
  std::vector<BemConfig> grid;
  Vector x0 = Vector::Constant(static_cast<Eigen::Index>(model.d), cfg.bem.x0);
  for (double h : cfg.bem.h_grid) grid.push_back(BemConfig::make(h, cfg.bem.T, cfg.bem.h0, x0, cfg.bem.newton));

  VerificationReport all;
  all.command = "bem";
  all.schema = CsvSchema::Sde;
  const Vector lo = Vector::Constant(static_cast<Eigen::Index>(model.d), -cfg.bem.probe_box);
  const Vector hi = Vector::Constant(static_cast<Eigen::Index>(model.d), cfg.bem.probe_box);
  const CoercivityReport probe = coercivity_probe(model, lo, hi, 4096, cfg.seeds.front());
  all.side_checks.emplace_back("coercivity probe residual >= 0", probe.passed);
  nlohmann::ordered_json per_seed = nlohmann::ordered_json::array();
  for (std::uint64_t seed : cfg.seeds) {
    const VerificationReport r = verify_bem_moment_bound(model, grid, cfg.p_grid, cfg.n_paths, derive_seed(seed, recipes::kSaltBem));
    all.append(r);
    per_seed.push_back({{"seed", seed}, {"details", r.details}});
  }
  std::ostringstream csv;
  all.write_csv(csv);
  return {Command::Bem,
          all.passed(),
          csv.str(),
          {{"model", model.name},
           {"coercivity_min_residual", probe.min_residual},
           {"seeds", detail::seed_list(cfg)},
           {"report", all.to_json()},
           {"per_seed", per_seed}},
          {}};
}

inline CommandResult run_command(const RunConfig& cfg) {
  switch (cfg.command) {
    case Command::DemiCheck: return run_demi_check(cfg);
    case Command::GronwallLemma: return run_gronwall_lemma(cfg);
    case Command::GronwallTheorem: return run_gronwall_theorem(cfg);
    case Command::Fractional: return run_fractional(cfg);
    case Command::Bem: return run_bem(cfg);
    case Command::All: break;
  }
  fail(ErrorCode::ConfigError, "command: 'all' must be expanded with run_all");
}

/// Every command with its bundled defaults; `overrides` (seeds, n_paths, ...)
/// is applied on top of each command's defaults.
inline std::vector<CommandResult> run_all(const KeyValueConfig& overrides) {
  std::vector<CommandResult> out;
  for (Command c : {Command::DemiCheck, Command::GronwallLemma, Command::GronwallTheorem, Command::Fractional,
                    Command::Bem})
    out.push_back(run_command(resolve_config(overrides, c)));
  return out;
}

}  // namespace demigron
