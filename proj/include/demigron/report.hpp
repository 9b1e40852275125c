#pragma once

#include <algorithm>
#include <cstddef>
#include <limits>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "trajectory.hpp"

namespace demigron {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// Slack multiplier on the combined standard error for one-sided checks.
inline constexpr double kSeSlack = 3.0;

/// One compared inequality lhs <= rhs, estimated by Monte Carlo.
struct VerificationRow {
  std::size_t n = 0;
  double p = 0.0;
  double mu = kInf;
  double nu = 1.0;
  double h = 0.0;  // step size, SDE rows only
  double lhs = 0.0;
  double lhs_se = 0.0;
  double rhs = 0.0;
  /// Standard error of lhs - rhs (lhs and rhs errors combined in quadrature).
  double combined_se = 0.0;
  std::string label;

  double margin() const { return rhs - lhs; }
  bool pass() const { return lhs <= rhs + kSeSlack * combined_se; }
};

enum class CsvSchema { Gronwall, Sde };

struct VerificationReport {
  std::string command;
  CsvSchema schema = CsvSchema::Gronwall;
  std::vector<VerificationRow> rows;
  /// Auxiliary checks (hypothesis violation counts, embedded demi reports, ...)
  /// that also gate the overall verdict.
  std::vector<std::pair<std::string, bool>> side_checks;
  nlohmann::ordered_json details = nlohmann::ordered_json::object();

  bool passed() const {
    return std::all_of(rows.begin(), rows.end(), [](const auto& r) { return r.pass(); }) &&
           std::all_of(side_checks.begin(), side_checks.end(), [](const auto& c) { return c.second; });
  }

  void append(const VerificationReport& other) {
    rows.insert(rows.end(), other.rows.begin(), other.rows.end());
    side_checks.insert(side_checks.end(), other.side_checks.begin(), other.side_checks.end());
  }

  void write_csv(std::ostream& out) const {
    if (schema == CsvSchema::Gronwall) {
      out << "n,p,mu,nu,lhs,lhs_se,rhs,margin,verdict\n";
      for (const auto& r : rows)
        out << r.n << ',' << format_double(r.p) << ',' << format_double(r.mu) << ',' << format_double(r.nu) << ','
            << format_double(r.lhs) << ',' << format_double(r.lhs_se) << ',' << format_double(r.rhs) << ','
            << format_double(r.margin()) << ',' << (r.pass() ? "pass" : "fail") << '\n';
    } else {
      out << "h,p,estimate,stderr,bound,margin,verdict\n";
      for (const auto& r : rows)
        out << format_double(r.h) << ',' << format_double(r.p) << ',' << format_double(r.lhs) << ','
            << format_double(r.lhs_se) << ',' << format_double(r.rhs) << ',' << format_double(r.margin()) << ','
            << (r.pass() ? "pass" : "fail") << '\n';
    }
  }

  nlohmann::ordered_json to_json() const {
    nlohmann::ordered_json j;
    j["command"] = command;
    j["verdict"] = passed() ? "pass" : "fail";
    j["rows"] = nlohmann::ordered_json::array();
    for (const auto& r : rows) {
      nlohmann::ordered_json row;
      if (!r.label.empty()) row["case"] = r.label;
      row["n"] = r.n;
      row["p"] = r.p;
      row["mu"] = format_double(r.mu);
      row["nu"] = r.nu;
      if (schema == CsvSchema::Sde) row["h"] = r.h;
      row["lhs"] = r.lhs;
      row["lhs_se"] = r.lhs_se;
      row["rhs"] = r.rhs;
      row["combined_se"] = r.combined_se;
      row["margin"] = r.margin();
      row["verdict"] = r.pass() ? "pass" : "fail";
      j["rows"].push_back(std::move(row));
    }
    j["side_checks"] = nlohmann::ordered_json::array();
    for (const auto& [name, ok] : side_checks)
      j["side_checks"].push_back({{"check", name}, {"verdict", ok ? "pass" : "fail"}});
    if (!details.empty()) j["details"] = details;
    return j;
  }
};

}  // namespace demigron
