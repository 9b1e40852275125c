#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <ostream>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "error.hpp"
#include "stats.hpp"
#include "trajectory.hpp"

namespace demigron {

// Test functions act on an argument vector s = (s_1, ..., s_len); coordinates
// below are 1-based, matching the S_1, ..., S_j indexing of the definition.

struct Constant1 {};

/// s -> clamp((s_k - center) / width, 0, 1)
struct CoordinateRamp {
  std::size_t coordinate = 1;
  double center = 0.0;
  double width = 1.0;
};

/// s -> prod_i clamp((s_{first+i} - centers[i]) / width, 0, 1)
struct ProductRamp {
  std::size_t first = 1;
  std::vector<double> centers;
  double width = 1.0;
};

/// s -> s_len - shift. Nondecreasing but not nonnegative.
struct ShiftedIdentityLast {
  double shift = 0.0;
};

using TestFunction = std::variant<Constant1, CoordinateRamp, ProductRamp, ShiftedIdentityLast>;

namespace detail {
inline double ramp(double x, double center, double width) {
  return std::clamp((x - center) / width, 0.0, 1.0);
}
}  // namespace detail

inline bool is_nonnegative(const TestFunction& f) { return !std::holds_alternative<ShiftedIdentityLast>(f); }

/// Largest coordinate the member reads (0 for members that only use s_len or nothing).
inline std::size_t max_coordinate(const TestFunction& f) {
  if (const auto* r = std::get_if<CoordinateRamp>(&f)) return r->coordinate;
  if (const auto* r = std::get_if<ProductRamp>(&f)) return r->first + r->centers.size() - 1;
  return 0;
}

inline bool applicable(const TestFunction& f, std::size_t len) { return len >= 1 && max_coordinate(f) <= len; }

inline double evaluate(const TestFunction& f, std::span<const double> s) {
  return std::visit(
      [&](const auto& m) -> double {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, Constant1>) {
          return 1.0;
        } else if constexpr (std::is_same_v<T, CoordinateRamp>) {
          return detail::ramp(s[m.coordinate - 1], m.center, m.width);
        } else if constexpr (std::is_same_v<T, ProductRamp>) {
          double prod = 1.0;
          for (std::size_t i = 0; i < m.centers.size(); ++i)
            prod *= detail::ramp(s[m.first - 1 + i], m.centers[i], m.width);
          return prod;
        } else {
          return s.back() - m.shift;
        }
      },
      f);
}

inline std::string describe(const TestFunction& f) {
  return std::visit(
      [](const auto& m) -> std::string {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, Constant1>) {
          return "const1";
        } else if constexpr (std::is_same_v<T, CoordinateRamp>) {
          return "ramp(k=" + std::to_string(m.coordinate) + ";c=" + format_double(m.center) +
                 ";w=" + format_double(m.width) + ")";
        } else if constexpr (std::is_same_v<T, ProductRamp>) {
          return "prod(k=" + std::to_string(m.first) + ".." + std::to_string(m.first + m.centers.size() - 1) +
                 ";w=" + format_double(m.width) + ")";
        } else {
          return "shift_last(c=" + format_double(m.shift) + ")";
        }
      },
      f);
}

struct TestFunctionFamily {
  std::vector<TestFunction> members;

  TestFunctionFamily nonnegative_only() const {
    TestFunctionFamily out;
    for (const auto& f : members)
      if (is_nonnegative(f)) out.members.push_back(f);
    return out;
  }
};

/// Default probe family for a batch whose columns 1..N hold S_1..S_N (or, with
/// `coordinate_offset = 0`, whose columns 0..N hold the coordinates 1..N+1).
///
/// Ramps sit at the 25/50/75% empirical quantiles of the probed coordinate
/// with width IQR/4; up to `max_coordinates` coordinates are probed, spread
/// evenly. Constant1, ShiftedIdentityLast(0) and one product ramp over the
/// first coordinates complete the family.
inline TestFunctionFamily standard_family(const TrajectoryBatch& batch, std::size_t coordinate_offset = 1,
                                          std::size_t max_coordinates = 8) {
  require(batch.width() > coordinate_offset, ErrorCode::DegenerateBatch, "batch has no coordinates to probe");
  const std::size_t n_coords = batch.width() - coordinate_offset;
  // The demimartingale check never evaluates a function of all N coordinates.
  const std::size_t usable = coordinate_offset == 1 ? std::max<std::size_t>(n_coords - 1, 1) : n_coords;

  TestFunctionFamily family;
  family.members.push_back(Constant1{});
  family.members.push_back(ShiftedIdentityLast{0.0});

  auto width_of = [&](const std::vector<double>& col) {
    const double iqr = empirical_quantile(col, 0.75) - empirical_quantile(col, 0.25);
    if (iqr > 0.0) return iqr / 4.0;
    const auto [lo, hi] = std::minmax_element(col.begin(), col.end());
    return *hi > *lo ? (*hi - *lo) / 4.0 : 1.0;
  };

  std::vector<std::size_t> coords;
  const std::size_t count = std::min(usable, max_coordinates);
  for (std::size_t i = 0; i < count; ++i) {
    const std::size_t k = count == 1 ? 1 : 1 + i * (usable - 1) / (count - 1);
    if (coords.empty() || coords.back() != k) coords.push_back(k);
  }
  for (std::size_t k : coords) {
    const auto col = batch.column(k - 1 + coordinate_offset);
    const double w = width_of(col);
    for (double q : {0.25, 0.5, 0.75})
      family.members.push_back(CoordinateRamp{k, empirical_quantile(col, q), w});
  }

  const std::size_t prod_len = std::min<std::size_t>(usable, 3);
  if (prod_len >= 2) {
    ProductRamp prod{1, {}, 0.0};
    double w = 0.0;
    for (std::size_t k = 1; k <= prod_len; ++k) {
      const auto col = batch.column(k - 1 + coordinate_offset);
      prod.centers.push_back(empirical_quantile(col, 0.5));
      w = std::max(w, width_of(col));
    }
    prod.width = w;
    family.members.push_back(std::move(prod));
  }
  return family;
}

enum class DemiMode { Demi, Demisub };

struct DemiRow {
  std::size_t j = 0;
  std::string function;
  double estimate = 0.0;
  double stderr_ = 0.0;
  double z = 0.0;
  bool pass = true;
};

/// Outcome of a one-sided test family. Passing is evidence, not proof: only
/// finitely many nondecreasing functions are probed. A failing cell is
/// conclusive up to the stated significance.
struct DemiReport {
  std::vector<DemiRow> rows;
  double level = 0.999;
  /// Per-cell critical value; Bonferroni-adjusted so that `level` is the
  /// family-wise confidence.
  double critical_z = 0.0;
  std::string kind;
  bool passed = true;

  std::size_t failures() const {
    return static_cast<std::size_t>(std::count_if(rows.begin(), rows.end(), [](const DemiRow& r) { return !r.pass; }));
  }

  void write_csv(std::ostream& out) const {
    out << "j,function,estimate,stderr,z,verdict\n";
    for (const auto& r : rows)
      out << r.j << ',' << r.function << ',' << format_double(r.estimate) << ',' << format_double(r.stderr_) << ','
          << format_double(r.z) << ',' << (r.pass ? "pass" : "fail") << '\n';
  }

  nlohmann::ordered_json summary() const {
    nlohmann::ordered_json j;
    j["kind"] = kind;
    j["level"] = level;
    j["critical_z"] = critical_z;
    j["cells"] = rows.size();
    j["failures"] = failures();
    j["verdict"] = passed ? "pass" : "fail";
    j["note"] = "finite test family: failures are conclusive, passes are evidence only";
    return j;
  }
};

namespace detail {

inline double critical_value(double level, std::size_t cells) {
  require(level > 0.0 && level < 1.0, ErrorCode::InvalidSpec, "level must lie in (0,1)");
  return normal_upper_quantile((1.0 - level) / static_cast<double>(std::max<std::size_t>(cells, 1)));
}

inline DemiRow make_row(std::size_t j, std::string name, MeanSe ms) {
  DemiRow row{j, std::move(name), ms.mean, ms.se, 0.0, true};
  if (ms.se > 0.0) row.z = ms.mean / ms.se;
  else row.z = ms.mean == 0.0 ? 0.0 : std::copysign(std::numeric_limits<double>::infinity(), ms.mean);
  return row;
}

inline void finalize(DemiReport& report) {
  report.critical_z = critical_value(report.level, report.rows.size());
  report.passed = true;
  for (auto& r : report.rows) {
    r.pass = !(r.estimate < -report.critical_z * r.stderr_);
    report.passed = report.passed && r.pass;
  }
}

}  // namespace detail

/// Estimates E[(S_{j+1} - S_j) f(S_1, ..., S_j)] for j = 1..N-1 and every
/// admissible member (all members for Demi, nonnegative ones for Demisub),
/// failing any cell that is significantly negative.
inline DemiReport check_demimartingale(const TrajectoryBatch& batch, const TestFunctionFamily& family, double level,
                                       DemiMode mode) {
  const TestFunctionFamily admissible = mode == DemiMode::Demi ? family : family.nonnegative_only();
  require(!admissible.members.empty(), ErrorCode::EmptyFamily, "no admissible test functions");
  require(batch.n_paths() >= 30, ErrorCode::DegenerateBatch, "at least 30 paths are needed for a standard error");
  require(batch.n_steps() >= 1, ErrorCode::DegenerateBatch, "batch needs N >= 1");

  DemiReport report;
  report.level = level;
  report.kind = mode == DemiMode::Demi ? "demimartingale" : "demisubmartingale";
  const std::size_t M = batch.n_paths();
  std::vector<double> cell(M);
  for (std::size_t j = 1; j + 1 <= batch.n_steps(); ++j) {
    for (const auto& f : admissible.members) {
      if (!applicable(f, j)) continue;
      for (std::size_t r = 0; r < M; ++r) {
        const auto row = batch.row(r);
        cell[r] = (row[j + 1] - row[j]) * evaluate(f, row.subspan(1, j));
      }
      report.rows.push_back(detail::make_row(j, describe(f), mean_se(cell)));
    }
  }
  detail::finalize(report);
  return report;
}

/// Sample covariance of every ordered pair of distinct members evaluated on
/// the full rows of the batch (columns are the collection X_1, ..., X_n), with
/// a 30-block batch-means standard error.
inline DemiReport check_association(const TrajectoryBatch& batch, const TestFunctionFamily& family, double level) {
  require(family.members.size() >= 2, ErrorCode::EmptyFamily, "association needs at least two test functions");
  require(batch.n_paths() >= 60, ErrorCode::DegenerateBatch, "30 blocks of at least two paths are needed");
  const std::size_t M = batch.n_paths();
  std::vector<std::vector<double>> evaluated;
  std::vector<std::string> names;
  for (const auto& f : family.members) {
    if (!applicable(f, batch.width())) continue;
    std::vector<double> vals(M);
    for (std::size_t r = 0; r < M; ++r) vals[r] = evaluate(f, batch.row(r));
    evaluated.push_back(std::move(vals));
    names.push_back(describe(f));
  }
  require(evaluated.size() >= 2, ErrorCode::EmptyFamily, "fewer than two applicable test functions");

  DemiReport report;
  report.level = level;
  report.kind = "association";
  for (std::size_t a = 0; a < evaluated.size(); ++a)
    for (std::size_t b = 0; b < evaluated.size(); ++b) {
      if (a == b) continue;
      report.rows.push_back(detail::make_row(0, "cov[" + names[a] + "|" + names[b] + "]",
                                             block_covariance(evaluated[a], evaluated[b], 30)));
    }
  detail::finalize(report);
  return report;
}

struct CounterexampleStats {
  double demi_expectation = 0.0;
  double cond_mean_given_minus1 = 0.0;
};

/// Exact values for the two-atom law P(X1=-1, X2=-2) = p, P(X1=1, X2=2) = 1-p:
/// E[(X2 - X1) f(X1)] and E[X2 | X1 = -1].
inline CounterexampleStats counterexample_stats(double p, double f_at_minus1, double f_at_plus1) {
  require(p >= 0.0 && p <= 1.0, ErrorCode::InvalidSpec, "p must lie in [0,1]");
  require(f_at_minus1 <= f_at_plus1, ErrorCode::NotNondecreasing, "f(-1) must not exceed f(1)");
  // X2 - X1 = -1 on the first atom and +1 on the second; X2 = -2 whenever X1 = -1.
  return {-p * f_at_minus1 + (1.0 - p) * f_at_plus1, -2.0};
}

}  // namespace demigron
