// Acceptance suite: one line per criterion, exit code 0 only if all pass.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "demigron/demigron.hpp"
#include "support/tail_integral.hpp"

using namespace demigron;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

struct Criterion {
  int id;
  std::string name;
  double budget_seconds;
  std::function<Outcome()> run;
};

std::string fmt(const char* f, double a) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

std::vector<std::uint64_t> seed_range(std::uint64_t first, std::size_t count) {
  std::vector<std::uint64_t> out(count);
  for (std::size_t i = 0; i < count; ++i) out[i] = first + i;
  return out;
}

Outcome counterexample_grid() {
  const std::vector<double> values{0.0, 0.25, 0.5, 1.0, 2.0, 5.0};
  std::size_t cells = 0, bad = 0;
  for (int i = 0; i <= 5; ++i) {
    const double p = 0.1 * i;
    for (double fm : values)
      for (double fp : values) {
        if (fm > fp) continue;
        ++cells;
        const auto s = counterexample_stats(p, fm, fp);
        const bool ok = s.demi_expectation == -p * fm + (1.0 - p) * fp && s.cond_mean_given_minus1 == -2.0 &&
                        s.demi_expectation >= 0.0 && s.cond_mean_given_minus1 < -1.0;
        bad += !ok;
      }
  }
  return {bad == 0, std::to_string(cells) + " grid cells, " + std::to_string(bad) + " mismatches"};
}

Outcome sup_moment_monte_carlo() {
  const std::vector<std::pair<std::string, GeneratorSpec>> gens{
      {"rw(+-1)", GeneratorSpec::random_walk({BaseLaw::Rademacher, 1.0})},
      {"rw(N(0,1))", GeneratorSpec::random_walk({BaseLaw::Gaussian, 1.0})},
      {"assoc(0.5)", GeneratorSpec::associated(0.5)},
      {"assoc(1)", GeneratorSpec::associated(1.0)},
      {"two_point(0.5)", GeneratorSpec::two_point(0.5)}};
  const std::vector<double> ps{0.25, 0.5, 0.75};
  const std::vector<std::size_t> ns{2, 10, 50};
  const auto seeds = seed_range(1001, 20);
  std::size_t cells = 0, failed = 0, exact_checks = 0, exact_failed = 0;
  double worst_exact_z = 0.0;
  for (const auto& [name, spec] : gens)
    for (std::uint64_t seed : seeds) {
      const auto batch = generate_paths(spec, 50, 100000, seed);
      for (std::size_t n : ns) {
        const auto report = verify_sup_moment_bound(batch, ps, n);
        for (const auto& row : report.rows) {
          ++cells;
          failed += !row.pass();
        }
        if (name == "rw(+-1)" && n == 2) {
          const auto& row = report.rows[1];  // p = 0.5
          const double z_lhs = std::abs(row.lhs - 0.6035533905932738) / row.lhs_se;
          const auto q = neg_inf_mean(batch, 2);
          const double rhs_se = 0.5 * std::pow(q.value, -0.5) * 2.0 * q.stderr_;
          const double z_rhs = std::abs(row.rhs - 1.7320508075688772) / rhs_se;
          worst_exact_z = std::max({worst_exact_z, z_lhs, z_rhs});
          exact_checks += 2;
          exact_failed += (z_lhs > 3.0) + (z_rhs > 3.0);
        }
      }
    }
  std::ostringstream d;
  d << cells << " cells, " << failed << " violations; exact n=2 cell: " << exact_failed << "/" << exact_checks
    << " outside 3 SE (worst |z| " << fmt("%.2f", worst_exact_z) << ")";
  return {failed == 0 && exact_failed == 0, d.str()};
}

Outcome tail_integral_grid() {
  double worst = 0.0;
  for (double q : {0.1, 0.5, 1.0, 2.0, 10.0})
    for (double p : {0.1, 0.25, 0.5, 0.75, 0.9}) {
      const double exact = sup_moment_bound(q, p);
      worst = std::max(worst, std::abs(oracles::tail_integral(q, p) - exact) / exact);
    }
  return {worst <= 1e-6, "25 cells, worst relative error " + fmt("%.2e", worst)};
}

Outcome gronwall_suite() {
  const auto seeds = seed_range(2001, 50);
  const GeneratorSpec s_spec = GeneratorSpec::bounded_associated(0.5, 1.0);
  const std::size_t N = 20, M = 20000;
  const std::vector<double> ps{0.25, 0.45};
  const std::vector<std::pair<double, double>> pairs{{kInf, 1.0}, {2.0, 2.0}};
  const std::vector<std::size_t> ns{1, 10, 20};
  std::size_t cells = 0, failed = 0, violations = 0, det_cells = 0, not_bit_exact = 0;
  for (std::uint64_t seed : seeds) {
    const auto s = generate_paths(s_spec, N, M, derive_seed(seed, recipes::kSaltS));
    const std::vector<GSequence> gs{std::vector<double>(N + 1, 0.05), recipes::random_g(M, N, 0.05, seed)};
    for (const auto& g : gs) {
      const auto x = recipes::gronwall_x(s, g, seed, 1.0, 1.0);
      const auto inst = build_instance(x, s, g);
      violations += hypothesis_violations(inst);
      for (double p : ps)
        for (const auto& [mu, nu] : pairs) {
          if (p * nu >= 1.0) continue;
          const HolderPair pair{mu, nu, p};
          for (std::size_t n : ns) {
            const auto report = verify_gronwall(inst, pair, n);
            ++cells;
            failed += !report.passed();
            if (const auto* det = std::get_if<std::vector<double>>(&g)) {
              const double f_sup = sup_moment(inst.f, 1.0, n).value;
              const double det_form = gronwall_bound_deterministic(f_sup, *det, p, n);
              const double holder_form =
                  gronwall_bound_holder(f_sup, product_norm(g, p, kInf, n).mean, HolderPair{kInf, 1.0, p});
              ++det_cells;
              not_bit_exact += det_form != holder_form;
            }
          }
        }
    }
  }
  std::ostringstream d;
  d << cells << " cells, " << failed << " violations; hypothesis violated on " << violations << " entries; "
    << not_bit_exact << "/" << det_cells << " deterministic-G cells differ between the two bound forms";
  return {failed == 0 && violations == 0 && not_bit_exact == 0, d.str()};
}

Outcome fractional_oracles() {
  bool ok = true;
  std::ostringstream d;
  for (int i = 1; i <= 9; ++i) ok = ok && a_coeff(0.1 * i, 0) == 1.0;
  double worst_sum = 0.0;
  for (int i = 1; i <= 9; ++i)
    for (std::size_t n = 1; n <= 200; ++n) {
      double sum = 0.0;
      for (double b : b_row(0.1 * i, n)) sum += b;
      worst_sum = std::max(worst_sum, std::abs(sum));
    }
  Substream rng(StreamSeed{5001, 0});
  double worst_gap = 0.0;
  for (int trial = 0; trial < 1000; ++trial) {
    const std::size_t n = 1 + static_cast<std::size_t>(rng.uniform() * 100);
    std::vector<double> f(n + 1);
    for (auto& v : f) v = rng.normal() * 5.0;
    worst_gap = std::max(worst_gap, caputo_l1_forms(f, rng.uniform(0.05, 0.95), rng.uniform(0.01, 1.0), n).relative_gap);
  }
  double worst_exp = 0.0;
  for (int i = 0; i <= 2000; ++i) {
    const double z = 0.01 * i;
    worst_exp = std::max(worst_exp, std::abs(mittag_leffler(1.0, z) - std::exp(z)) / std::exp(z));
  }
  const double oracle = std::exp(1.0) * std::erfc(-1.0);
  const double ml_gap = std::abs(mittag_leffler(0.5, 1.0) - oracle);
  ok = ok && worst_sum <= 1e-12 && worst_gap <= 1e-12 && worst_exp <= 1e-10 && ml_gap <= 1e-6;
  d << "a_0 = 1; max |row sum| " << fmt("%.1e", worst_sum) << "; max form gap " << fmt("%.1e", worst_gap)
    << "; max |E_1 - exp|/exp " << fmt("%.1e", worst_exp) << "; |E_0.5(1) - e erfc(-1)| " << fmt("%.1e", ml_gap);
  return {ok, d.str()};
}

Outcome fractional_gronwall_suite() {
  std::size_t cells = 0, failed = 0, assoc_failed = 0;
  for (const auto& model : {FractionalModel{{0.5}, {1.0}, 0.05, 20, 0.5, 0.5},
                            FractionalModel{{0.3, 0.7}, {1.0, 1.0}, 0.05, 20, 0.5, 0.5}}) {
    RunConfig cfg = default_config(Command::Fractional);
    cfg.fractional = model;
    cfg.seeds = seed_range(3001, 20);
    cfg.n_paths = 10000;
    cfg.p_grid = {0.25, 0.5};
    cfg.mu = {kInf, 2.0};
    cfg.nu = {1.0, 2.0};
    cfg.time_indices = {1, 10, 20};
    const auto result = run_fractional(cfg);
    const auto& rows = result.body["report"]["rows"];
    for (const auto& row : rows) {
      ++cells;
      failed += row["verdict"] != "pass";
    }
    for (const auto& c : result.body["report"]["side_checks"]) assoc_failed += c["verdict"] != "pass";
  }
  std::ostringstream d;
  d << cells << " cells, " << failed << " violations; " << assoc_failed << " failed side checks";
  return {cells > 0 && failed == 0 && assoc_failed == 0, d.str()};
}

Outcome bem_oracles() {
  Vector one(1);
  one << 1.0;
  double worst_linear = 0.0;
  const auto lin = zoo::linear(Matrix::Constant(1, 1, -1.0));
  for (double h : {0.01, 0.02, 0.05, 0.1, 0.2}) {
    const auto cfg = BemConfig::make(h, 1.0, 0.5, one);
    const auto b = simulate_bem(lin, cfg, 7001, 4);
    for (std::size_t r = 0; r < b.n_paths; ++r)
      for (std::size_t j = 0; j <= b.n_steps; ++j)
        worst_linear = std::max(worst_linear, std::abs(b.state(r, j)[0] - std::pow(1.0 + h, -static_cast<double>(j))));
  }

  SdeModel noise;
  noise.name = "noise";
  noise.drift = [](const Vector& x) { return Vector(Vector::Zero(x.size())); };
  noise.diffusion = [](const Vector&) { return Matrix(Matrix::Identity(1, 1)); };
  noise.coercivity = 0.5;
  std::size_t var_fail = 0;
  std::ostringstream zs;
  for (double h : {0.01, 0.05, 0.1}) {
    const auto cfg = BemConfig::make(h, 1.0, 0.5, Vector::Zero(1));
    const auto b = simulate_bem(noise, cfg, 7002, 100000);
    std::vector<double> col(b.n_paths);
    for (std::size_t r = 0; r < b.n_paths; ++r) col[r] = b.state(r, b.n_steps)[0];
    const double mean = mean_se(col).mean;
    for (double& v : col) v = (v - mean) * (v - mean);
    const MeanSe var = mean_se(col);
    const double z = (var.mean - static_cast<double>(b.n_steps) * h) / var.se;
    var_fail += std::abs(z) > 3.0;
    zs << (zs.tellp() > 0 ? "," : "") << fmt("%.2f", z);
  }

  double worst_residual = 0.0;
  for (const auto& model : {zoo::ornstein_uhlenbeck(1.0, 1.0), zoo::bounded_diffusion(1.0, 1.0), zoo::double_well(1.0)}) {
    for (double h : {0.02, 0.1}) {
      const auto cfg = BemConfig::make(h, 1.0, 0.25 / (1.0 + model.coercivity), one);
      const auto b = simulate_bem(model, cfg, 7003, 20000);
      for (double r : b.residuals) worst_residual = std::max(worst_residual, r);
    }
  }
  std::ostringstream d;
  d << "max linear error " << fmt("%.1e", worst_linear) << "; variance z-scores " << zs.str() << "; max residual "
    << fmt("%.1e", worst_residual);
  return {worst_linear <= 1e-10 && var_fail == 0 && worst_residual <= 1e-10, d.str()};
}

Outcome bem_moment_suite() {
  const auto ou = zoo::ornstein_uhlenbeck(1.0, 1.0);
  Vector lo(1), hi(1);
  lo << -50.0;
  hi << 50.0;
  const auto probe = coercivity_probe(ou, lo, hi, 10000, 8001);
  RunConfig cfg = default_config(Command::Bem);
  cfg.seeds = {8002};
  cfg.n_paths = 100000;
  const auto result = run_bem(cfg);
  const auto& rows = result.body["report"]["rows"];
  std::map<double, double> bound_of_p;
  std::size_t failed = 0, bound_mismatch = 0;
  for (const auto& row : rows) {
    const double p = row["p"], rhs = row["rhs"];
    if (!bound_of_p.count(p)) bound_of_p[p] = rhs;
    bound_mismatch += bound_of_p[p] != rhs;
    failed += row["verdict"] != "pass";
  }
  std::size_t side_failed = 0;
  for (const auto& c : result.body["report"]["side_checks"]) side_failed += c["verdict"] != "pass";
  std::ostringstream d;
  d << "L = " << ou.coercivity << " (probe min residual " << fmt("%.3f", probe.min_residual) << "); " << rows.size()
    << " cells, " << failed << " violations; " << bound_mismatch << " h-dependent bounds; " << side_failed
    << " failed side checks (Z means, demi-check, residuals)";
  return {probe.passed && ou.coercivity == 0.5 && !rows.empty() && failed == 0 && bound_mismatch == 0 &&
              side_failed == 0 && bound_of_p.size() == 2,
          d.str()};
}

Outcome determinism() {
  const auto a = run_all(KeyValueConfig{});
  const auto b = run_all(KeyValueConfig{});
  std::size_t differ = 0;
  bool all_pass = true;
  for (std::size_t i = 0; i < a.size(); ++i) {
    differ += a[i].cases_csv != b[i].cases_csv || a[i].body.dump() != b[i].body.dump();
    all_pass = all_pass && a[i].passed;
  }
  std::ostringstream d;
  d << a.size() << " commands, " << differ << " differing cases.csv/report bodies; default run "
    << (all_pass ? "passes" : "FAILS");
  return {differ == 0 && a.size() == 5, d.str()};
}

}  // namespace

int main() {
  const std::vector<Criterion> criteria{
      {1, "counterexample exact reproduction", 1.0, counterexample_grid},
      {2, "sup-moment lemma Monte Carlo", 120.0, sup_moment_monte_carlo},
      {3, "tail-integral constant", 1.0, tail_integral_grid},
      {4, "stochastic Gronwall bound suite", 180.0, gronwall_suite},
      {5, "fractional machinery oracles", 10.0, fractional_oracles},
      {6, "fractional Gronwall bound harness", 120.0, fractional_gronwall_suite},
      {7, "backward Euler-Maruyama oracles", 60.0, bem_oracles},
      {8, "step-size-uniform moment bound", 300.0, bem_moment_suite},
      {9, "determinism of the full run", 600.0, determinism},
  };
  int failures = 0;
  for (const auto& c : criteria) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("error: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const bool in_budget = secs <= c.budget_seconds;
    const bool pass = o.pass && in_budget;
    failures += !pass;
    std::printf("[%s] criterion %d: %s: %s (%.2f s, budget %.0f s%s)\n", pass ? "PASS" : "FAIL", c.id, c.name.c_str(),
                o.detail.c_str(), secs, c.budget_seconds, in_budget ? "" : ", OVER BUDGET");
    std::fflush(stdout);
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
