#include <string>

#include <gtest/gtest.h>

#include "demigron/config.hpp"
#include "demigron/harness.hpp"

using namespace demigron;

namespace {

ErrorCode code_of(const std::function<void()>& fn, std::string* message = nullptr) {
  try {
    fn();
  } catch (const Error& e) {
    if (message) *message = e.what();
    return e.code();
  }
  ADD_FAILURE() << "no error thrown";
  return ErrorCode::InvalidSpec;
}

}  // namespace

TEST(KeyValueConfig, ParsesSectionsListsAndComments) {
  const auto kv = KeyValueConfig::parse(
      "# comment\n"
      "command = bem\n"
      "seeds = 1, 2 ,3\n"
      "p_grid = 0.25,0.5\n"
      "mu = inf\n"
      "[bem]\n"
      "h_grid = 0.1, 0.05  # trailing comment\n"
      "[generator]\n"
      "starts_at_zero = false\n");
  EXPECT_EQ(kv.get_string("command", ""), "bem");
  EXPECT_EQ(kv.get_u64s("seeds", {}), (std::vector<std::uint64_t>{1, 2, 3}));
  EXPECT_EQ(kv.get_doubles("p_grid", {}), (std::vector<double>{0.25, 0.5}));
  EXPECT_TRUE(std::isinf(kv.get_double("mu", 0.0)));
  EXPECT_EQ(kv.get_doubles("bem.h_grid", {}), (std::vector<double>{0.1, 0.05}));
  EXPECT_FALSE(kv.get_bool("generator.starts_at_zero", true));
  EXPECT_EQ(kv.get_double("n_paths", 7.0), 7.0);
}

TEST(KeyValueConfig, RejectsUnknownKeysSectionsAndDuplicates) {
  std::string msg;
  EXPECT_EQ(code_of([] { KeyValueConfig::parse("colour = red\n"); }, &msg), ErrorCode::ConfigError);
  EXPECT_NE(msg.find("colour"), std::string::npos);
  EXPECT_EQ(code_of([] { KeyValueConfig::parse("[plot]\n"); }), ErrorCode::ConfigError);
  EXPECT_EQ(code_of([] { KeyValueConfig::parse("[bem]\nkappa = 1\nkappa = 2\n"); }), ErrorCode::ConfigError);
  EXPECT_EQ(code_of([] { KeyValueConfig::parse("n_paths\n"); }), ErrorCode::ConfigError);
  EXPECT_EQ(code_of([] { KeyValueConfig::parse("[bem\n"); }), ErrorCode::ConfigError);
}

TEST(KeyValueConfig, RejectsMalformedValues) {
  const auto kv = KeyValueConfig::parse("n_paths = ten\np_grid = 0.5, x\n[generator]\nstarts_at_zero = maybe\n");
  std::string msg;
  EXPECT_EQ(code_of([&] { kv.get_u64("n_paths", 1); }, &msg), ErrorCode::ConfigError);
  EXPECT_NE(msg.find("n_paths"), std::string::npos);
  EXPECT_EQ(code_of([&] { kv.get_doubles("p_grid", {}); }), ErrorCode::ConfigError);
  EXPECT_EQ(code_of([&] { kv.get_bool("generator.starts_at_zero", true); }), ErrorCode::ConfigError);
}

TEST(ResolveConfig, DefaultsPerCommand) {
  const auto demi = resolve_config(KeyValueConfig{}, Command::DemiCheck);
  EXPECT_EQ(demi.generator.kind, GeneratorKind::TwoPointDemisub);
  EXPECT_EQ(demi.generator.p, 0.3);
  EXPECT_EQ(demi.n_steps, 2u);
  EXPECT_EQ(demi.mode, DemiMode::Demisub);
  const auto lemma = resolve_config(KeyValueConfig{}, Command::GronwallLemma);
  EXPECT_EQ(lemma.resolved_time_indices(lemma.n_steps), (std::vector<std::size_t>{1, 25, 50}));
  const auto bem = resolve_config(KeyValueConfig{}, Command::Bem);
  EXPECT_EQ(bem.bem.h_grid, (std::vector<double>{0.02, 0.05, 0.1, 0.2}));
  EXPECT_EQ(bem.n_paths, 100000u);
}

TEST(ResolveConfig, ErrorsNameTheKey) {
  auto expect_key = [](const std::string& text, const std::string& key) {
    std::string msg;
    EXPECT_EQ(code_of([&] { resolve_config(KeyValueConfig::parse(text)); }, &msg), ErrorCode::ConfigError) << text;
    EXPECT_EQ(msg.find("ConfigError: " + key), 0u) << msg;
  };
  expect_key("command = gronwall-lemma\np_grid = 0.5, 1.5\n", "p_grid");
  expect_key("command = sing\n", "command");
  expect_key("command = bem\nmu = 2\nnu = 3\n", "nu");
  expect_key("command = bem\nmu = 2, inf\nnu = 2\n", "mu");
  expect_key("command = demi-check\n[generator]\np = 2\n", "generator.p");
  expect_key("command = demi-check\n[generator]\nkind = brownian\n", "generator.kind");
  expect_key("command = demi-check\n[demi]\nlevel = 1\n", "demi.level");
  expect_key("command = demi-check\nn_paths = 10\n", "n_paths");
  expect_key("command = fractional\n[fractional]\nbetas = 0.7, 0.3\nq = 1, 1\n", "fractional.betas");
  expect_key("command = fractional\n[fractional]\nq = 1\n", "fractional.q");
  expect_key("command = bem\n[bem]\nh0 = 1\n", "bem.h0");
  expect_key("command = bem\n[bem]\nh_grid = 0.3\n", "bem.h_grid");
  expect_key("command = bem\n[bem]\nmodel = lorenz\n", "bem.model");
  expect_key("command = gronwall-lemma\ntime_indices = 0\n", "time_indices");
}

TEST(Harness, DemiCheckDefaultPasses) {
  auto cfg = resolve_config(KeyValueConfig{}, Command::DemiCheck);
  cfg.n_paths = 20000;
  const auto r = run_demi_check(cfg);
  EXPECT_TRUE(r.passed);
  EXPECT_EQ(r.cases_csv.substr(0, 37), "j,function,estimate,stderr,z,verdict\n");
}

TEST(Harness, DemiCheckAboveHalfFails) {
  auto kv = KeyValueConfig::parse("command = demi-check\nn_paths = 20000\n[generator]\nkind = two_point_demisub\np = 0.7\n");
  EXPECT_FALSE(run_command(resolve_config(kv)).passed);
}

TEST(Harness, SmallRunsOfEveryCommandPass) {
  KeyValueConfig kv;
  kv.set("n_paths", "3000");
  kv.set("seeds", "7");
  for (Command c : {Command::GronwallLemma, Command::GronwallTheorem, Command::Fractional}) {
    const auto r = run_command(resolve_config(kv, c));
    EXPECT_TRUE(r.passed) << to_string(c);
    EXPECT_EQ(r.cases_csv.substr(0, 9), "n,p,mu,nu") << to_string(c);
  }
  kv.set("bem.h_grid", "0.1, 0.2");
  const auto bem = run_command(resolve_config(kv, Command::Bem));
  EXPECT_TRUE(bem.passed);
  EXPECT_EQ(bem.cases_csv.substr(0, 12), "h,p,estimate");
}

TEST(Harness, OutputIsAFunctionOfConfigAndSeeds) {
  KeyValueConfig kv;
  kv.set("n_paths", "2000");
  for (Command c : {Command::DemiCheck, Command::GronwallTheorem, Command::Fractional}) {
    const auto a = run_command(resolve_config(kv, c));
    const auto b = run_command(resolve_config(kv, c));
    EXPECT_EQ(a.cases_csv, b.cases_csv);
    EXPECT_EQ(a.body.dump(), b.body.dump());
  }
  kv.set("seeds", "1");
  const auto c1 = run_command(resolve_config(kv, Command::GronwallLemma));
  kv.set("seeds", "2");
  const auto c2 = run_command(resolve_config(kv, Command::GronwallLemma));
  EXPECT_NE(c1.cases_csv, c2.cases_csv);
}

TEST(Harness, BundledConfigsResolve) {
  for (const char* name : {"demi_check.cfg", "demi_check_associated.cfg", "gronwall_lemma.cfg", "gronwall_theorem.cfg",
                           "fractional.cfg", "bem_ou.cfg", "violation.cfg"})
    EXPECT_NO_THROW(resolve_config(KeyValueConfig::load(std::string(DEMIGRON_CONFIG_DIR) + "/" + name))) << name;
  EXPECT_THROW(resolve_config(KeyValueConfig::load(std::string(DEMIGRON_CONFIG_DIR) + "/bad_p.cfg")), Error);
}
