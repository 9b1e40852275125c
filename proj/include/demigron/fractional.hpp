#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <ostream>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "error.hpp"
#include "gronwall.hpp"
#include "report.hpp"
#include "special.hpp"
#include "stats.hpp"
#include "trajectory.hpp"

namespace demigron {

/// Multi-term model: orders beta_0 < ... < beta_m in (0,1), weights q_r > 0,
/// step tau, horizon N (T = tau N) and the feedback constants lambda1, lambda2.
struct FractionalModel {
  std::vector<double> betas;
  std::vector<double> q;
  double tau = 0.1;
  std::size_t N = 10;
  double lambda1 = 0.0;
  double lambda2 = 0.0;

  double horizon() const { return tau * static_cast<double>(N); }
  double beta_max() const { return betas.back(); }
  double q_max_order() const { return q.back(); }

  void validate() const {
    require(!betas.empty() && betas.size() == q.size(), ErrorCode::InvalidSpec,
            "betas and q must be non-empty and of equal length");
    for (std::size_t r = 0; r < betas.size(); ++r) {
      require(betas[r] > 0.0 && betas[r] < 1.0, ErrorCode::BetaOutOfRange, "every beta must lie in (0,1)");
      require(r == 0 || betas[r] > betas[r - 1], ErrorCode::InvalidSpec, "betas must be strictly increasing");
      require(q[r] > 0.0, ErrorCode::InvalidSpec, "every q must be > 0");
    }
    require(tau > 0.0 && std::isfinite(tau), ErrorCode::InvalidSpec, "tau must be > 0");
    require(N >= 1, ErrorCode::InvalidSpec, "N must be >= 1");
    require(lambda1 >= 0.0 && lambda2 >= 0.0, ErrorCode::InvalidSpec, "lambda1, lambda2 must be >= 0");
  }
};

namespace detail {
inline void check_beta(double beta) {
  require(beta > 0.0 && beta < 1.0, ErrorCode::BetaOutOfRange, "beta must lie in (0,1)");
}
}  // namespace detail

/// a_j = (j+1)^{1-beta} - j^{1-beta}, evaluated as j^{1-beta} expm1((1-beta) log1p(1/j))
/// to avoid cancellation for large j.
inline double a_coeff(double beta, std::size_t j) {
  detail::check_beta(beta);
  if (j == 0) return 1.0;
  const double jd = static_cast<double>(j);
  const double e = 1.0 - beta;
  return std::pow(jd, e) * std::expm1(e * std::log1p(1.0 / jd));
}

/// Coefficients of f_0, ..., f_n in the direct form sum_i b_{n-i} f_i:
/// element i is b_{n-i}, with b_n = -a_{n-1}, b_0 = a_0 and
/// b_{n-i} = a_{n-i} - a_{n-i-1} in between.
inline std::vector<double> b_row(double beta, std::size_t n) {
  detail::check_beta(beta);
  require(n >= 1, ErrorCode::InvalidSpec, "n must be >= 1");
  std::vector<double> row(n + 1);
  row[0] = -a_coeff(beta, n - 1);
  row[n] = a_coeff(beta, 0);
  for (std::size_t i = 1; i < n; ++i) row[i] = a_coeff(beta, n - i) - a_coeff(beta, n - i - 1);
  return row;
}

/// a_j for j = 0..N and the row-independent b_j (b_0 = a_0, b_j = a_j - a_{j-1});
/// row n of the direct form additionally ends in b_n = -a_{n-1}.
struct CoefficientTable {
  double beta = 0.5;
  std::vector<double> a;
  std::vector<double> b;

  static CoefficientTable make(double beta, std::size_t N) {
    CoefficientTable t;
    t.beta = beta;
    t.a.resize(N + 1);
    t.b.resize(N + 1);
    for (std::size_t j = 0; j <= N; ++j) {
      t.a[j] = a_coeff(beta, j);
      t.b[j] = j == 0 ? t.a[0] : t.a[j] - t.a[j - 1];
    }
    return t;
  }

  void write_csv(std::ostream& out) const {
    out << "j,a,b\n";
    for (std::size_t j = 0; j < a.size(); ++j)
      out << j << ',' << format_double(a[j]) << ',' << format_double(b[j]) << '\n';
  }
};

/// tau^{-beta} / Gamma(2 - beta)
inline double l1_prefactor(double beta, double tau) { return std::pow(tau, -beta) / gamma_fn(2.0 - beta); }

struct CaputoForms {
  double difference_form = 0.0;
  double direct_form = 0.0;
  /// |difference - direct| / max(|difference|, |direct|, sum of |summands|)
  double relative_gap = 0.0;
};

/// Evaluates both forms of the L1 operator D^beta_tau f_n from a table holding
/// at least a_0..a_{n-1}.
inline CaputoForms caputo_l1_forms(std::span<const double> f, const CoefficientTable& table, double tau,
                                   std::size_t n) {
  require(n >= 1 && f.size() >= n + 1, ErrorCode::ShapeMismatch, "need f_0..f_n with n >= 1");
  require(table.a.size() >= n, ErrorCode::ShapeMismatch, "coefficient table too short");
  require(tau > 0.0, ErrorCode::InvalidSpec, "tau must be > 0");
  const auto& a = table.a;
  double diff = 0.0, scale = 0.0;
  for (std::size_t i = 1; i <= n; ++i) {
    const double term = a[n - i] * (f[i] - f[i - 1]);
    diff += term;
    scale += std::abs(term);
  }
  // direct form sum_i b_{n-i} f_i, same coefficients as b_row
  double direct = -a[n - 1] * f[0] + a[0] * f[n];
  double direct_scale = std::abs(a[n - 1] * f[0]) + std::abs(a[0] * f[n]);
  for (std::size_t i = 1; i < n; ++i) {
    const double term = (a[n - i] - a[n - i - 1]) * f[i];
    direct += term;
    direct_scale += std::abs(term);
  }
  const double pre = l1_prefactor(table.beta, tau);
  const double denom = std::max({std::abs(diff), std::abs(direct), scale, direct_scale});
  const double gap = denom > 0.0 ? std::abs(diff - direct) / denom : 0.0;
  return {pre * diff, pre * direct, gap};
}

inline CaputoForms caputo_l1_forms(std::span<const double> f, double beta, double tau, std::size_t n) {
  detail::check_beta(beta);
  require(n >= 1, ErrorCode::ShapeMismatch, "need f_0..f_n with n >= 1");
  return caputo_l1_forms(f, CoefficientTable::make(beta, n), tau, n);
}

/// D^beta_tau f_n in the difference form, after checking it against the direct form.
inline double caputo_l1(std::span<const double> f, double beta, double tau, std::size_t n) {
  const CaputoForms forms = caputo_l1_forms(f, beta, tau, n);
  require(forms.relative_gap <= 1e-12, ErrorCode::FormMismatch, "difference and direct forms disagree");
  return forms.difference_form;
}

/// sum_r q_r D^{beta_r}_tau with the coefficient tables of every order built once.
class MultiTermOperator {
 public:
  explicit MultiTermOperator(FractionalModel model) : model_(std::move(model)) {
    model_.validate();
    for (double beta : model_.betas) tables_.push_back(CoefficientTable::make(beta, model_.N));
  }

  double operator()(std::span<const double> f, std::size_t n) const {
    require(n <= model_.N, ErrorCode::ShapeMismatch, "n exceeds the model horizon");
    double acc = 0.0;
    for (std::size_t r = 0; r < tables_.size(); ++r) {
      const CaputoForms forms = caputo_l1_forms(f, tables_[r], model_.tau, n);
      require(forms.relative_gap <= 1e-12, ErrorCode::FormMismatch, "difference and direct forms disagree");
      acc += model_.q[r] * forms.difference_form;
    }
    return acc;
  }

  const FractionalModel& model() const { return model_; }

 private:
  FractionalModel model_;
  std::vector<CoefficientTable> tables_;
};

/// sum_r q_r D^{beta_r}_tau f_n
inline double multi_term_apply(const FractionalModel& model, std::span<const double> f, std::size_t n) {
  return MultiTermOperator(model)(f, n);
}

/// lambda1 + lambda2 / (2 - 2^{1 - beta_m})
inline double lambda_agg(double lambda1, double lambda2, double beta_m) {
  detail::check_beta(beta_m);
  return lambda1 + lambda2 / (2.0 - std::pow(2.0, 1.0 - beta_m));
}

/// W = sum_r q_r tau^{1-beta_r} / Gamma(2 - beta_r) * sum_{j=1}^k a_{j-1}.
inline double w_value(const FractionalModel& model, std::size_t k) {
  model.validate();
  require(k >= 1, ErrorCode::InvalidSpec, "k must be >= 1");
  double w = 0.0;
  for (std::size_t r = 0; r < model.betas.size(); ++r) {
    const double beta = model.betas[r];
    double a_sum = 0.0;
    for (std::size_t j = 1; j <= k; ++j) a_sum += a_coeff(beta, j - 1);
    w += model.q[r] * std::pow(model.tau, 1.0 - beta) / gamma_fn(2.0 - beta) * a_sum;
  }
  return w;
}

/// Deterministic lambda (a constant) or one lambda sample per path.
using LambdaInput = std::variant<double, std::vector<double>>;

/// (2 E_{beta_m}(2 lambda t_n^{beta_m} / q_m))^p for one lambda.
inline double mittag_leffler_factor(const FractionalModel& model, std::size_t n, double lambda, double p) {
  const double beta_m = model.beta_max();
  const double t_n = model.tau * static_cast<double>(n);
  const double arg = 2.0 * lambda * std::pow(t_n, beta_m) / model.q_max_order();
  return std::pow(2.0 * mittag_leffler(beta_m, arg), p);
}

/// Bound on E[sup_{1<=k<=n} X_k^p]:
///   C * || (2 E_{beta_m}(2 lambda t_n^{beta_m} / q_m))^p ||_mu * (x0_term + f_term)^p
/// with C = (1 + 1/(1 - nu p))^{1/nu} for per-path lambda samples and
/// C = 1 + 1/(1 - p) for a deterministic lambda (whose norm is the value itself).
inline double fractional_gronwall_bound(const FractionalModel& model, const HolderPair& pair, std::size_t n, double x0_term,
                              double f_term, const LambdaInput& lambda) {
  model.validate();
  pair.validate();
  require(n >= 1 && n <= model.N, ErrorCode::ShapeMismatch, "n must lie in 1..N");
  require(x0_term >= 0.0 && f_term >= 0.0, ErrorCode::NegativeInput, "expectation terms must be >= 0");
  const double inner = std::pow(x0_term + f_term, pair.p);
  if (const auto* l = std::get_if<double>(&lambda)) {
    require(*l >= 0.0, ErrorCode::NegativeInput, "lambda must be >= 0");
    return (1.0 + 1.0 / (1.0 - pair.p)) * mittag_leffler_factor(model, n, *l, pair.p) * inner;
  }
  const auto& samples = std::get<std::vector<double>>(lambda);
  require(!samples.empty(), ErrorCode::InvalidSpec, "no lambda samples");
  std::vector<double> factors(samples.size());
  for (std::size_t i = 0; i < samples.size(); ++i) {
    require(samples[i] >= 0.0, ErrorCode::NegativeInput, "lambda must be >= 0");
    factors[i] = mittag_leffler_factor(model, n, samples[i], pair.p);
  }
  double norm = 0.0;
  if (std::isinf(pair.mu)) {
    norm = *std::max_element(factors.begin(), factors.end());
  } else {
    for (double& v : factors) v = std::pow(v, pair.mu);
    norm = std::pow(mean_se(factors).mean, 1.0 / pair.mu);
  }
  return std::pow(1.0 + 1.0 / (1.0 - pair.nu * pair.p), 1.0 / pair.nu) * norm * inner;
}

/// X, Y, the reverse-constructed F and the multi-term values D_n = sum_r q_r D X_n
/// (column 0 of F and D unused) for one model.
struct FractionalInstance {
  TrajectoryBatch x;
  TrajectoryBatch y;
  TrajectoryBatch f;
  TrajectoryBatch d;
};

/// F_n = max(0, D_n - Y_n - lambda1 X_n - lambda2 X_{n-1}), F_0 = 0, so that the
/// hypothesis holds by construction; the hypothesis is then re-checked on
/// every (path, n). Column n of `y` holds Y_n; column 0 is unused.
inline FractionalInstance build_fractional_instance(const FractionalModel& model, const TrajectoryBatch& x,
                                                    const TrajectoryBatch& y) {
  const MultiTermOperator op(model);
  require(x.n_steps() == model.N, ErrorCode::ShapeMismatch, "X must have N+1 columns");
  require(y.n_paths() == x.n_paths() && y.n_steps() == x.n_steps(), ErrorCode::ShapeMismatch, "X and Y misaligned");
  for (double v : x.values()) require(v >= 0.0, ErrorCode::NegativeInput, "X must be nonnegative");

  FractionalInstance inst{x, y, TrajectoryBatch(x.n_paths(), x.n_steps(), "F"),
                          TrajectoryBatch(x.n_paths(), x.n_steps(), "D")};
  std::size_t violations = 0;
  for (std::size_t r = 0; r < x.n_paths(); ++r) {
    const auto row = x.row(r);
    for (std::size_t n = 1; n <= x.n_steps(); ++n) {
      const double lhs = op(row, n);
      const double feedback = y(r, n) + model.lambda1 * row[n] + model.lambda2 * row[n - 1];
      inst.d(r, n) = lhs;
      inst.f(r, n) = std::max(0.0, lhs - feedback);
      if (lhs - (inst.f(r, n) + feedback) > 1e-12 * std::max(1.0, std::abs(lhs))) ++violations;
    }
  }
  require(violations == 0, ErrorCode::HypothesisViolated, std::to_string(violations) + " hypothesis violations");
  return inst;
}

inline TrajectoryBatch fractional_forcing(const FractionalModel& model, const TrajectoryBatch& x,
                                          const TrajectoryBatch& y) {
  return build_fractional_instance(model, x, y).f;
}

/// Compares E[sup_{1<=k<=n} X_k^p] with the bound (deterministic lambda form).
inline VerificationReport verify_fractional_gronwall(const FractionalModel& model, const FractionalInstance& inst,
                                           std::size_t n, const HolderPair& pair) {
  model.validate();
  pair.validate();
  const TrajectoryBatch& x = inst.x;
  require(x.n_steps() == model.N, ErrorCode::ShapeMismatch, "X must have N+1 columns");
  require(n >= 1 && n <= model.N, ErrorCode::ShapeMismatch, "n must lie in 1..N");

  const double beta_m = model.beta_max();
  const double denom = model.q_max_order() * gamma_fn(1.0 + beta_m);
  const double t_n = model.tau * static_cast<double>(n);
  const double w = w_value(model, n);
  std::vector<double> x0_terms(x.n_paths()), f_terms(x.n_paths()), combined(x.n_paths());
  for (std::size_t r = 0; r < x.n_paths(); ++r) {
    const auto frow = inst.f.row(r);
    const double sup_f = *std::max_element(frow.begin() + 1, frow.begin() + static_cast<std::ptrdiff_t>(n) + 1);
    x0_terms[r] = std::pow(model.tau, beta_m) / denom * x(r, 0) * w;
    f_terms[r] = std::pow(t_n, beta_m) / denom * sup_f;
    combined[r] = x0_terms[r] + f_terms[r];
  }
  const MeanSe x0_mean = mean_se(x0_terms);
  const MeanSe f_mean = mean_se(f_terms);
  const MeanSe c_mean = mean_se(combined);
  const double lambda = lambda_agg(model.lambda1, model.lambda2, beta_m);

  const MomentEstimate lhs = sup_moment(x, pair.p, n, 1);
  VerificationRow row;
  row.n = n;
  row.p = pair.p;
  row.mu = pair.mu;
  row.nu = pair.nu;
  row.lhs = lhs.value;
  row.lhs_se = lhs.stderr_;
  row.rhs = fractional_gronwall_bound(model, pair, n, x0_mean.mean, f_mean.mean, lambda);
  const double rhs_se = c_mean.mean > 0.0 ? row.rhs * pair.p * c_mean.se / c_mean.mean : 0.0;
  row.combined_se = std::hypot(lhs.stderr_, rhs_se);

  VerificationReport report;
  report.command = "fractional";
  report.rows.push_back(row);
  report.side_checks.emplace_back("fractional hypothesis violations = 0 (n=" + std::to_string(n) + ")", true);
  return report;
}

inline VerificationReport verify_fractional_gronwall(const FractionalModel& model, const TrajectoryBatch& x,
                                           const TrajectoryBatch& y, std::size_t n, const HolderPair& pair) {
  return verify_fractional_gronwall(model, build_fractional_instance(model, x, y), n, pair);
}

}  // namespace demigron
