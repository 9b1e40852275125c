#pragma once

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "error.hpp"

namespace demigron {

/// Flat sectioned key-value text:
///
///     # comment
///     command = gronwall-lemma
///     p_grid = 0.25, 0.5
///     [generator]
///     kind = random_walk
///
/// Keys are addressed as "section.key" ("key" for the top level). Unknown
/// sections and keys are rejected when the file is parsed.
class KeyValueConfig {
 public:
  static const std::map<std::string, std::set<std::string>>& schema() {
    static const std::map<std::string, std::set<std::string>> kSchema = {
        {"", {"command", "seeds", "n_paths", "n_steps", "p_grid", "mu", "nu", "output_dir", "time_indices"}},
        {"generator", {"kind", "increment", "scale", "shock", "shock_scale", "theta", "p", "bound", "starts_at_zero"}},
        {"demi", {"mode", "level", "stop_threshold"}},
        {"gronwall", {"g", "g_value", "x_offset", "noise_scale"}},
        {"fractional", {"betas", "q", "tau", "N", "lambda1", "lambda2", "theta"}},
        {"bem", {"model", "kappa", "sigma", "x0", "T", "h0", "h_grid", "newton_tol", "newton_max_iter", "probe_box"}},
    };
    return kSchema;
  }

  static KeyValueConfig parse(const std::string& text) {
    KeyValueConfig cfg;
    std::istringstream in(text);
    std::string line, section;
    int line_no = 0;
    while (std::getline(in, line)) {
      ++line_no;
      if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
      line = trim(line);
      if (line.empty()) continue;
      const std::string where = "line " + std::to_string(line_no);
      if (line.front() == '[') {
        require(line.back() == ']', ErrorCode::ConfigError, where + ": malformed section header");
        section = trim(line.substr(1, line.size() - 2));
        require(schema().count(section) == 1, ErrorCode::ConfigError, where + ": unknown section '" + section + "'");
        continue;
      }
      const auto eq = line.find('=');
      require(eq != std::string::npos, ErrorCode::ConfigError, where + ": expected key = value");
      const std::string key = trim(line.substr(0, eq));
      const std::string value = trim(line.substr(eq + 1));
      const std::string full = section.empty() ? key : section + "." + key;
      require(schema().at(section).count(key) == 1, ErrorCode::ConfigError, where + ": unknown key '" + full + "'");
      require(cfg.values_.count(full) == 0, ErrorCode::ConfigError, where + ": duplicate key '" + full + "'");
      cfg.values_[full] = value;
    }
    return cfg;
  }

  static KeyValueConfig load(const std::string& path) {
    std::ifstream in(path);
    require(static_cast<bool>(in), ErrorCode::ConfigError, "cannot read config file '" + path + "'");
    std::stringstream buf;
    buf << in.rdbuf();
    return parse(buf.str());
  }

  bool has(const std::string& key) const { return values_.count(key) == 1; }

  std::optional<std::string> get(const std::string& key) const {
    const auto it = values_.find(key);
    if (it == values_.end()) return std::nullopt;
    return it->second;
  }

  void set(const std::string& key, const std::string& value) { values_[key] = value; }

  std::string get_string(const std::string& key, const std::string& fallback) const {
    return get(key).value_or(fallback);
  }

  double get_double(const std::string& key, double fallback) const {
    const auto v = get(key);
    return v ? to_double(key, *v) : fallback;
  }

  std::uint64_t get_u64(const std::string& key, std::uint64_t fallback) const {
    const auto v = get(key);
    return v ? to_u64(key, *v) : fallback;
  }

  bool get_bool(const std::string& key, bool fallback) const {
    const auto v = get(key);
    if (!v) return fallback;
    if (*v == "true" || *v == "1") return true;
    if (*v == "false" || *v == "0") return false;
    fail(ErrorCode::ConfigError, key + ": expected true or false, got '" + *v + "'");
  }

  std::vector<double> get_doubles(const std::string& key, std::vector<double> fallback) const {
    const auto v = get(key);
    if (!v) return fallback;
    std::vector<double> out;
    for (const auto& item : split(*v)) out.push_back(to_double(key, item));
    require(!out.empty(), ErrorCode::ConfigError, key + ": empty list");
    return out;
  }

  std::vector<std::uint64_t> get_u64s(const std::string& key, std::vector<std::uint64_t> fallback) const {
    const auto v = get(key);
    if (!v) return fallback;
    std::vector<std::uint64_t> out;
    for (const auto& item : split(*v)) out.push_back(to_u64(key, item));
    require(!out.empty(), ErrorCode::ConfigError, key + ": empty list");
    return out;
  }

  const std::map<std::string, std::string>& entries() const { return values_; }

 private:
  static std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
  }

  static std::vector<std::string> split(const std::string& s) {
    std::vector<std::string> out;
    std::stringstream in(s);
    std::string item;
    while (std::getline(in, item, ',')) {
      item = trim(item);
      if (!item.empty()) out.push_back(item);
    }
    return out;
  }

  static double to_double(const std::string& key, const std::string& text) {
    if (text == "inf" || text == "infinity") return INFINITY;
    double value = 0.0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    require(ec == std::errc{} && ptr == text.data() + text.size(), ErrorCode::ConfigError,
            key + ": '" + text + "' is not a number");
    return value;
  }

  static std::uint64_t to_u64(const std::string& key, const std::string& text) {
    std::uint64_t value = 0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    require(ec == std::errc{} && ptr == text.data() + text.size(), ErrorCode::ConfigError,
            key + ": '" + text + "' is not a nonnegative integer");
    return value;
  }

  std::map<std::string, std::string> values_;
};

}  // namespace demigron
