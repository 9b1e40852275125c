#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "error.hpp"
#include "report.hpp"
#include "stats.hpp"
#include "trajectory.hpp"

namespace demigron {

/// Exponent pair for the Hoelder step: 1/mu + 1/nu = 1 and p * nu < 1.
struct HolderPair {
  double mu = kInf;
  double nu = 1.0;
  double p = 0.5;

  void validate() const {
    require(p > 0.0 && p < 1.0, ErrorCode::POutOfRange, "p must lie in (0,1)");
    require(mu >= 1.0 && nu >= 1.0, ErrorCode::HolderViolation, "mu and nu must lie in [1, inf]");
    const double inv_mu = std::isinf(mu) ? 0.0 : 1.0 / mu;
    const double inv_nu = std::isinf(nu) ? 0.0 : 1.0 / nu;
    require(std::abs(inv_mu + inv_nu - 1.0) <= 1e-12, ErrorCode::HolderViolation, "1/mu + 1/nu must equal 1");
    // Keeps the constant (1 + 1/(1 - nu p))^(1/nu) away from its pole.
    require(p * nu < 1.0 - 1e-9, ErrorCode::HolderViolation, "p * nu must be < 1");
  }
};

struct MomentEstimate {
  double value = 0.0;
  double stderr_ = 0.0;
  double p = 1.0;
  std::size_t n = 0;
};

/// Monte Carlo mean and SE of (max_{first <= k <= n} path_k)^p.
inline MomentEstimate sup_moment(const TrajectoryBatch& batch, double p, std::size_t n, std::size_t first = 0) {
  require(p > 0.0 && p <= 1.0, ErrorCode::POutOfRange, "p must lie in (0,1]");
  require(n <= batch.n_steps() && first <= n, ErrorCode::ShapeMismatch, "time index out of range");
  std::vector<double> vals(batch.n_paths());
  for (std::size_t r = 0; r < batch.n_paths(); ++r) {
    const auto row = batch.row(r);
    const double sup = *std::max_element(row.begin() + static_cast<std::ptrdiff_t>(first),
                                         row.begin() + static_cast<std::ptrdiff_t>(n) + 1);
    if (p == 1.0) {
      vals[r] = sup;
    } else {
      require(sup >= 0.0, ErrorCode::NegativeBase, "negative running maximum with non-integer p");
      vals[r] = std::pow(sup, p);
    }
  }
  const MeanSe ms = mean_se(vals);
  return {ms.mean, ms.se, p, n};
}

/// Monte Carlo mean and SE of -min_{0 <= k <= n} path_k (column 0 must be 0).
inline MomentEstimate neg_inf_mean(const TrajectoryBatch& batch, std::size_t n) {
  require(n <= batch.n_steps(), ErrorCode::ShapeMismatch, "time index out of range");
  require(batch.column_is_zero(0), ErrorCode::NonzeroStart, "column 0 is not identically zero");
  std::vector<double> vals(batch.n_paths());
  for (std::size_t r = 0; r < batch.n_paths(); ++r) {
    const auto row = batch.row(r);
    vals[r] = -*std::min_element(row.begin(), row.begin() + static_cast<std::ptrdiff_t>(n) + 1);
  }
  const MeanSe ms = mean_se(vals);
  return {ms.mean, ms.se, 1.0, n};
}

/// q^p / (1 - p): the bound on E[(sup S)^p] given q = E[-inf S].
inline double sup_moment_bound(double q, double p) {
  require(p > 0.0 && p < 1.0, ErrorCode::POutOfRange, "p must lie in (0,1)");
  require(q >= 0.0, ErrorCode::NegativeInput, "q must be >= 0");
  return std::pow(q, p) / (1.0 - p);
}

/// C_k = prod_{j<=k} (1 + G_j)^{-1}.
inline std::vector<double> c_weights(std::span<const double> g) {
  std::vector<double> c(g.size());
  double acc = 1.0;
  for (std::size_t k = 0; k < g.size(); ++k) {
    require(g[k] >= 0.0, ErrorCode::NegativeG, "G must be nonnegative");
    acc /= 1.0 + g[k];
    c[k] = acc;
  }
  return c;
}

/// L_n = sum_{k<n} C_k (S_{k+1} - S_k), computed directly and by summation by
/// parts (C_{n-1} S_n + sum_{k=1}^{n-1} (C_{k-1} - C_k) S_k); the two must
/// agree to 1e-12 relative to the size of the summands.
inline std::vector<double> l_transform(std::span<const double> s, std::span<const double> g) {
  require(!s.empty(), ErrorCode::ShapeMismatch, "empty path");
  require(s[0] == 0.0, ErrorCode::NonzeroStart, "S_0 must be 0");
  const std::size_t n = s.size() - 1;
  require(g.size() >= n, ErrorCode::ShapeMismatch, "G shorter than the path");
  const auto c = c_weights(g.first(n));

  std::vector<double> direct(n + 1, 0.0);
  double scale = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    const double term = c[k] * (s[k + 1] - s[k]);
    direct[k + 1] = direct[k] + term;
    scale += std::abs(term);
  }
  double by_parts_tail = 0.0;  // sum_{k=1}^{m-1} (C_{k-1} - C_k) S_k
  for (std::size_t m = 1; m <= n; ++m) {
    if (m >= 2) by_parts_tail += (c[m - 2] - c[m - 1]) * s[m - 1];
    const double by_parts = c[m - 1] * s[m] + by_parts_tail;
    const double tol = 1e-12 * std::max({std::abs(direct[m]), std::abs(by_parts), scale, 1e-300});
    require(std::abs(by_parts - direct[m]) <= tol, ErrorCode::FormMismatch,
            "summation-by-parts form of L disagrees at n=" + std::to_string(m));
  }
  return direct;
}

inline TrajectoryBatch l_transform_batch(const TrajectoryBatch& s, std::span<const double> g) {
  TrajectoryBatch out(s.n_paths(), s.n_steps(), s.label() + ":L");
  for (std::size_t r = 0; r < s.n_paths(); ++r) {
    const auto l = l_transform(s.row(r), g);
    std::copy(l.begin(), l.end(), out.row(r).begin());
  }
  return out;
}

/// Deterministic coefficients G_0, G_1, ... or one random sequence per path
/// (batch column k holds G_k).
using GSequence = std::variant<std::vector<double>, TrajectoryBatch>;

namespace detail {

inline double g_at(const GSequence& g, std::size_t path, std::size_t k) {
  if (const auto* v = std::get_if<std::vector<double>>(&g)) return (*v)[k];
  return std::get<TrajectoryBatch>(g)(path, k);
}

inline std::size_t g_length(const GSequence& g) {
  if (const auto* v = std::get_if<std::vector<double>>(&g)) return v->size();
  return std::get<TrajectoryBatch>(g).width();
}

/// prod_{k<n} (1 + g_k), raised to p.
inline double powered_product(std::span<const double> g, std::size_t n, double p) {
  double prod = 1.0;
  for (std::size_t k = 0; k < n; ++k) prod *= 1.0 + g[k];
  return std::pow(prod, p);
}

}  // namespace detail

/// || prod_{k<n} (1 + G_k)^p ||_mu with its Monte Carlo standard error
/// (mu = inf: sample maximum, reported with SE 0).
inline MeanSe product_norm(const GSequence& g, double p, double mu, std::size_t n) {
  require(detail::g_length(g) >= n, ErrorCode::ShapeMismatch, "G shorter than the time index");
  if (const auto* v = std::get_if<std::vector<double>>(&g)) {
    for (double x : *v) require(x >= 0.0, ErrorCode::NegativeG, "G must be nonnegative");
    return {detail::powered_product(*v, n, p), 0.0};
  }
  const auto& batch = std::get<TrajectoryBatch>(g);
  std::vector<double> vals(batch.n_paths());
  for (std::size_t r = 0; r < batch.n_paths(); ++r) {
    const auto row = batch.row(r);
    for (std::size_t k = 0; k < n; ++k) require(row[k] >= 0.0, ErrorCode::NegativeG, "G must be nonnegative");
    vals[r] = detail::powered_product(row, n, p);
  }
  if (std::isinf(mu)) return {*std::max_element(vals.begin(), vals.end()), 0.0};
  for (double& x : vals) x = std::pow(x, mu);
  const MeanSe m = mean_se(vals);
  const double norm = std::pow(m.mean, 1.0 / mu);
  const double se = m.mean > 0.0 ? norm / (mu * m.mean) * m.se : 0.0;
  return {norm, se};
}

/// (1 + 1/(1 - nu p))^{1/nu} * norm * f_sup_mean^p, the bound with random G.
inline double gronwall_bound_holder(double f_sup_mean, double norm, const HolderPair& pair) {
  pair.validate();
  require(f_sup_mean >= 0.0, ErrorCode::NegativeInput, "E[sup F] must be >= 0");
  const double constant = std::pow(1.0 + 1.0 / (1.0 - pair.nu * pair.p), 1.0 / pair.nu);
  return constant * norm * std::pow(f_sup_mean, pair.p);
}

/// (1 + 1/(1 - p)) * prod (1 + G_k)^p * f_sup_mean^p, the bound for deterministic G.
inline double gronwall_bound_deterministic(double f_sup_mean, std::span<const double> g, double p, std::size_t n) {
  require(p > 0.0 && p < 1.0, ErrorCode::POutOfRange, "p must lie in (0,1)");
  require(f_sup_mean >= 0.0, ErrorCode::NegativeInput, "E[sup F] must be >= 0");
  require(g.size() >= n, ErrorCode::ShapeMismatch, "G shorter than the time index");
  for (double x : g) require(x >= 0.0, ErrorCode::NegativeG, "G must be nonnegative");
  return (1.0 + 1.0 / (1.0 - p)) * detail::powered_product(g, n, p) * std::pow(f_sup_mean, p);
}

/// Upper bound on E[sup_{k<=n} X_k^p]. Deterministic G uses the
/// deterministic-coefficient form (mu, nu unused beyond validation); random G
/// uses the Hoelder form with the plug-in mu-norm.
inline double gronwall_bound(double f_sup_mean, const GSequence& g, const HolderPair& pair, std::size_t n) {
  pair.validate();
  if (const auto* v = std::get_if<std::vector<double>>(&g)) return gronwall_bound_deterministic(f_sup_mean, *v, pair.p, n);
  return gronwall_bound_holder(f_sup_mean, product_norm(g, pair.p, pair.mu, n).mean, pair);
}

/// Aligned data satisfying X_n <= F_n + S_n + sum_{k<n} G_k X_k on every path.
struct GronwallInstance {
  TrajectoryBatch x;
  TrajectoryBatch f;
  GSequence g;
  TrajectoryBatch s;
};

namespace detail {

inline void check_g(const GSequence& g, std::size_t n_paths, std::size_t n_steps) {
  if (const auto* v = std::get_if<std::vector<double>>(&g)) {
    require(v->size() >= n_steps, ErrorCode::ShapeMismatch, "G must have at least N entries");
    for (double x : *v) require(x >= 0.0, ErrorCode::NegativeInput, "G must be nonnegative");
    return;
  }
  const auto& b = std::get<TrajectoryBatch>(g);
  require(b.n_paths() == n_paths && b.width() >= n_steps, ErrorCode::ShapeMismatch, "G batch misaligned");
  for (double x : b.values()) require(x >= 0.0, ErrorCode::NegativeInput, "G must be nonnegative");
}

}  // namespace detail

/// Builds F_n = max(0, X_n - S_n - sum_{k<n} G_k X_k) so that the hypothesis
/// holds by construction.
inline GronwallInstance build_instance(const TrajectoryBatch& x, const TrajectoryBatch& s, const GSequence& g) {
  require(x.n_paths() == s.n_paths() && x.n_steps() == s.n_steps(), ErrorCode::ShapeMismatch,
          "X and S are misaligned");
  for (double v : x.values()) require(v >= 0.0, ErrorCode::NegativeInput, "X must be nonnegative");
  require(s.column_is_zero(0), ErrorCode::NonzeroStart, "S_0 must be identically 0");
  detail::check_g(g, x.n_paths(), x.n_steps());

  TrajectoryBatch f(x.n_paths(), x.n_steps(), "F");
  for (std::size_t r = 0; r < x.n_paths(); ++r) {
    double feedback = 0.0;
    for (std::size_t n = 0; n <= x.n_steps(); ++n) {
      f(r, n) = std::max(0.0, x(r, n) - s(r, n) - feedback);
      if (n < x.n_steps()) feedback += detail::g_at(g, r, n) * x(r, n);
    }
  }
  return {x, std::move(f), g, s};
}

/// Number of (path, n) entries where X_n exceeds F_n + S_n + sum G_k X_k by more
/// than `tol` (scaled by max(1, |X_n|)).
inline std::size_t hypothesis_violations(const GronwallInstance& inst, double tol = 1e-12) {
  std::size_t count = 0;
  for (std::size_t r = 0; r < inst.x.n_paths(); ++r) {
    double feedback = 0.0;
    for (std::size_t n = 0; n <= inst.x.n_steps(); ++n) {
      const double rhs = inst.f(r, n) + inst.s(r, n) + feedback;
      if (inst.x(r, n) - rhs > tol * std::max(1.0, std::abs(inst.x(r, n)))) ++count;
      if (n < inst.x.n_steps()) feedback += detail::g_at(inst.g, r, n) * inst.x(r, n);
    }
  }
  return count;
}

/// Compares E[(sup_{k<=n} S_k)^p] with E[-inf S]^p / (1-p) for each p.
inline VerificationReport verify_sup_moment_bound(const TrajectoryBatch& batch, std::span<const double> p_grid, std::size_t n) {
  VerificationReport report;
  report.command = "gronwall-lemma";
  const MomentEstimate q = neg_inf_mean(batch, n);
  for (double p : p_grid) {
    const MomentEstimate lhs = sup_moment(batch, p, n);
    VerificationRow row;
    row.n = n;
    row.p = p;
    row.lhs = lhs.value;
    row.lhs_se = lhs.stderr_;
    row.rhs = sup_moment_bound(q.value, p);
    const double rhs_se = q.value > 0.0 ? p * std::pow(q.value, p - 1.0) / (1.0 - p) * q.stderr_ : 0.0;
    row.combined_se = std::hypot(lhs.stderr_, rhs_se);
    row.label = batch.label();
    report.rows.push_back(row);
  }
  return report;
}

/// Checks the hypothesis pathwise, then compares E[sup_{k<=n} X_k^p] with the bound.
inline VerificationReport verify_gronwall(const GronwallInstance& inst, const HolderPair& pair, std::size_t n) {
  pair.validate();
  const std::size_t violations = hypothesis_violations(inst);
  require(violations == 0, ErrorCode::HypothesisViolated,
          std::to_string(violations) + " entries violate X_n <= F_n + S_n + sum G_k X_k");
  const MomentEstimate lhs = sup_moment(inst.x, pair.p, n);
  const MomentEstimate f_sup = sup_moment(inst.f, 1.0, n);

  VerificationRow row;
  row.n = n;
  row.p = pair.p;
  row.mu = pair.mu;
  row.nu = pair.nu;
  row.lhs = lhs.value;
  row.lhs_se = lhs.stderr_;
  row.rhs = gronwall_bound(f_sup.value, inst.g, pair, n);
  double rel_var = 0.0;
  if (f_sup.value > 0.0) rel_var += std::pow(pair.p * f_sup.stderr_ / f_sup.value, 2);
  if (std::holds_alternative<TrajectoryBatch>(inst.g)) {
    const MeanSe norm = product_norm(inst.g, pair.p, pair.mu, n);
    if (norm.mean > 0.0) rel_var += std::pow(norm.se / norm.mean, 2);
  }
  row.combined_se = std::hypot(lhs.stderr_, row.rhs * std::sqrt(rel_var));
  row.label = std::holds_alternative<TrajectoryBatch>(inst.g) ? "random-G" : "deterministic-G";

  VerificationReport report;
  report.command = "gronwall-theorem";
  report.rows.push_back(row);
  report.side_checks.emplace_back("hypothesis violations = 0 (" + row.label + ", n=" + std::to_string(n) + ")", true);
  return report;
}

}  // namespace demigron
