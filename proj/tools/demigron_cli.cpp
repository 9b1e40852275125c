#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "demigron/demigron.hpp"

namespace fs = std::filesystem;
using namespace demigron;

namespace {

void write_file(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(ErrorCode::ConfigError, "output_dir: cannot write " + path.string());
  out << text;
}

void write_result(const fs::path& dir, const CommandResult& r, double seconds) {
  fs::create_directories(dir);
  write_file(dir / "cases.csv", r.cases_csv);
  for (const auto& [name, text] : r.extra_files) write_file(dir / name, text);
  nlohmann::ordered_json report{{"command", to_string(r.command)},
                                {"verdict", r.passed ? "pass" : "fail"},
                                {"body", r.body},
                                {"wall_clock_seconds", seconds}};
  write_file(dir / "report.json", report.dump(2) + "\n");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Monte Carlo verification of discrete stochastic Gronwall-type bounds"};
  std::string command;
  std::string config_path;
  std::uint64_t seed = 0;
  std::size_t paths = 0;
  std::string out_dir;
  bool quiet = false;
  app.add_option("command", command, "demi-check | gronwall-lemma | gronwall-theorem | fractional | bem | all");
  app.add_option("--config", config_path, "sectioned key = value config file")->check(CLI::ExistingFile);
  auto* seed_opt = app.add_option("--seed", seed, "single seed overriding the config seed list");
  auto* paths_opt = app.add_option("--paths", paths, "number of Monte Carlo paths");
  auto* out_opt = app.add_option("--out", out_dir, "output directory");
  app.add_flag("--quiet", quiet, "print nothing but errors");
  CLI11_PARSE(app, argc, argv);

  try {
    KeyValueConfig kv = config_path.empty() ? KeyValueConfig{} : KeyValueConfig::load(config_path);
    if (!command.empty()) kv.set("command", command);
    if (*seed_opt) kv.set("seeds", std::to_string(seed));
    if (*paths_opt) kv.set("n_paths", std::to_string(paths));
    if (*out_opt) kv.set("output_dir", out_dir);
    const Command cmd = parse_command(kv.get_string("command", "all"));
    const fs::path root = kv.get_string("output_dir", "out");

    bool passed = true;
    if (cmd == Command::All) {
      // validate every command up front so a bad key fails before any simulation
      for (Command c : {Command::DemiCheck, Command::GronwallLemma, Command::GronwallTheorem, Command::Fractional,
                        Command::Bem})
        resolve_config(kv, c);
      nlohmann::ordered_json summary = nlohmann::ordered_json::array();
      for (Command c : {Command::DemiCheck, Command::GronwallLemma, Command::GronwallTheorem, Command::Fractional,
                        Command::Bem}) {
        const auto t0 = std::chrono::steady_clock::now();
        const CommandResult r = run_command(resolve_config(kv, c));
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        write_result(root / to_string(c), r, secs);
        summary.push_back({{"command", to_string(c)}, {"verdict", r.passed ? "pass" : "fail"}});
        passed = passed && r.passed;
        if (!quiet) std::cout << to_string(c) << ": " << (r.passed ? "pass" : "FAIL") << " (" << secs << " s)\n";
      }
      fs::create_directories(root);
      write_file(root / "summary.json",
                 nlohmann::ordered_json{{"verdict", passed ? "pass" : "fail"}, {"commands", summary}}.dump(2) + "\n");
    } else {
      const RunConfig cfg = resolve_config(kv, cmd);
      const auto t0 = std::chrono::steady_clock::now();
      const CommandResult r = run_command(cfg);
      const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
      write_result(root, r, secs);
      passed = r.passed;
      if (!quiet) std::cout << to_string(cmd) << ": " << (r.passed ? "pass" : "FAIL") << " (" << secs << " s)\n";
    }
    return passed ? 0 : 2;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
