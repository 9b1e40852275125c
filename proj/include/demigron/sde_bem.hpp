#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <cstdio>
#include <functional>
#include <iterator>
#include <limits>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "demi_check.hpp"
#include "error.hpp"
#include "report.hpp"
#include "rng.hpp"
#include "stats.hpp"
#include "trajectory.hpp"

namespace demigron {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// dX = f(X) dt + g(X) dW with X in R^d and W in R^m.
///
/// `coercivity` is the constant L of <f(x),x> + |g(x)|^2/2 <= L(1 + |x|^2);
/// `one_sided_lipschitz` bounds <f(x)-f(y), x-y> <= osl |x-y|^2 and sets the
/// solvability margin h * osl < 1 of the implicit step.
struct SdeModel {
  std::string name;
  std::size_t d = 1;
  std::size_t m = 1;
  std::function<Vector(const Vector&)> drift;
  std::function<Matrix(const Vector&)> diffusion;
  /// Optional analytic Jacobian of the drift; finite differences otherwise.
  std::function<Matrix(const Vector&)> drift_jacobian;
  double coercivity = 0.0;
  double one_sided_lipschitz = 0.0;
};

struct NewtonControls {
  double tol = 1e-12;
  std::size_t max_iter = 50;
};

struct BemConfig {
  double h = 0.01;
  double T = 1.0;
  /// Step-size bound h0 in (0, 1/(2L)); the a-priori bound depends on h0, not h.
  double h0 = 0.25;
  std::size_t n_steps = 100;  // N_h
  Vector x0 = Vector::Zero(1);
  NewtonControls newton{};

  /// N_h = max{n : n h <= T}, with a relative 1e-12 allowance so that T/h
  /// landing a rounding error below an integer is not truncated.
  static BemConfig make(double h, double T, double h0, Vector x0, NewtonControls newton = {}) {
    require(h > 0.0 && T > 0.0, ErrorCode::InvalidSpec, "h and T must be > 0");
    BemConfig cfg;
    cfg.h = h;
    cfg.T = T;
    cfg.h0 = h0;
    cfg.n_steps = static_cast<std::size_t>(std::floor(T / h * (1.0 + 1e-12)));
    cfg.x0 = std::move(x0);
    cfg.newton = newton;
    return cfg;
  }

  void validate(const SdeModel& model) const {
    require(h > 0.0 && h < 1.0, ErrorCode::InvalidSpec, "h must lie in (0,1)");
    require(T > 0.0, ErrorCode::InvalidSpec, "T must be > 0");
    require(h0 > 0.0, ErrorCode::StepBoundViolation, "h0 must be > 0");
    require(model.coercivity <= 0.0 || 2.0 * h0 * model.coercivity < 1.0, ErrorCode::StepBoundViolation,
            "h0 must be < 1/(2L)");
    require(h < h0, ErrorCode::StepBoundViolation, "h must be < h0");
    const double nh = static_cast<double>(n_steps) * h;
    require(nh <= T * (1.0 + 1e-12) && T < nh + h, ErrorCode::InvalidSpec, "N_h must satisfy N_h h <= T < (N_h+1) h");
    require(static_cast<std::size_t>(x0.size()) == model.d, ErrorCode::ShapeMismatch, "x0 has the wrong dimension");
    require(newton.tol > 0.0 && newton.max_iter >= 1, ErrorCode::InvalidSpec, "invalid Newton controls");
  }
};

struct StepResult {
  Vector y;
  double residual = 0.0;
  std::size_t iterations = 0;
};

namespace detail {

inline Matrix fd_jacobian(const SdeModel& model, const Vector& z, const Vector& fz) {
  Matrix jac(model.d, model.d);
  Vector zp = z;
  for (std::size_t i = 0; i < model.d; ++i) {
    const auto ii = static_cast<Eigen::Index>(i);
    const double step = std::sqrt(std::numeric_limits<double>::epsilon()) * std::max(1.0, std::abs(z[ii]));
    zp[ii] = z[ii] + step;
    jac.col(ii) = (model.drift(zp) - fz) / step;
    zp[ii] = z[ii];
  }
  return jac;
}

}  // namespace detail

/// Solves y' = y + h f(y') + g(y) dW.
///
/// Damped Newton from the drift-free predictor y + g(y) dW (residual-norm
/// halving line search, analytic or finite-difference Jacobian), falling back
/// to the fixed-point map y' <- y + g(y) dW + h f(y') when a Newton step is
/// unusable. Throws NonConvergence rather than return a step above tolerance.
inline StepResult bem_step_detailed(const SdeModel& model, const Vector& y, const Vector& dw, double h,
                                    const NewtonControls& controls = {}) {
  require(h * model.one_sided_lipschitz < 1.0, ErrorCode::StepTooLarge, "h * osl must be < 1");
  const Vector c = y + model.diffusion(y) * dw;
  Vector z = c;
  auto residual_of = [&](const Vector& v, Vector& fv) {
    fv = model.drift(v);
    return Vector(v - c - h * fv);
  };
  Vector fz;
  Vector res = residual_of(z, fz);
  double norm = res.norm();
  std::size_t iter = 0;
  const Matrix identity = Matrix::Identity(model.d, model.d);

  bool newton_stalled = false;
  while (norm > controls.tol && iter < controls.max_iter && !newton_stalled) {
    const Matrix jf = model.drift_jacobian ? model.drift_jacobian(z) : detail::fd_jacobian(model, z, fz);
    const Vector delta = (identity - h * jf).partialPivLu().solve(-res);
    if (!delta.allFinite()) {
      newton_stalled = true;
      break;
    }
    double t = 1.0;
    bool accepted = false;
    for (int halvings = 0; halvings < 40; ++halvings, t *= 0.5) {
      Vector f_try;
      const Vector z_try = z + t * delta;
      const Vector r_try = residual_of(z_try, f_try);
      const double n_try = r_try.norm();
      if (std::isfinite(n_try) && n_try < norm) {
        z = z_try;
        fz = f_try;
        res = r_try;
        norm = n_try;
        accepted = true;
        break;
      }
    }
    ++iter;
    if (!accepted) newton_stalled = true;
  }

  if (norm > controls.tol) {
    for (std::size_t k = 0; k < controls.max_iter && norm > controls.tol; ++k, ++iter) {
      z = c + h * fz;
      res = residual_of(z, fz);
      norm = res.norm();
    }
  }
  require(std::isfinite(norm) && norm <= controls.tol, ErrorCode::NonConvergence,
          "implicit step residual " + format_double(norm) + " above tolerance");
  return {z, norm, iter};
}

inline Vector bem_step(const SdeModel& model, const Vector& y, const Vector& dw, double h,
                       const NewtonControls& controls = {}) {
  return bem_step_detailed(model, y, dw, h, controls).y;
}

/// Paths Y^0..Y^{N_h} (d components each), increments dW^1..dW^{N_h} (m
/// components each) and the Newton residual of every step, all row-major by path.
struct BemBatch {
  std::size_t n_paths = 0;
  std::size_t n_steps = 0;
  std::size_t d = 1;
  std::size_t m = 1;
  double h = 0.0;
  std::vector<double> states;
  std::vector<double> increments;
  std::vector<double> residuals;

  Eigen::Map<const Vector> state(std::size_t path, std::size_t j) const {
    return Eigen::Map<const Vector>(states.data() + (path * (n_steps + 1) + j) * d, static_cast<Eigen::Index>(d));
  }
  /// dW^{j+1} = W(t_{j+1}) - W(t_j), j = 0..N_h-1.
  Eigen::Map<const Vector> increment(std::size_t path, std::size_t j) const {
    return Eigen::Map<const Vector>(increments.data() + (path * n_steps + j) * m, static_cast<Eigen::Index>(m));
  }
  double residual(std::size_t path, std::size_t j) const { return residuals[path * n_steps + j]; }

  /// |Y^j| as an M x (N_h + 1) batch.
  TrajectoryBatch norms() const {
    TrajectoryBatch out(n_paths, n_steps, "|Y|");
    for (std::size_t r = 0; r < n_paths; ++r)
      for (std::size_t j = 0; j <= n_steps; ++j) out(r, j) = state(r, j).norm();
    return out;
  }

  /// Full-path dump with header `path,j,t,y_1..y_d`.
  void write_csv(std::ostream& out) const {
    out << "path,j,t";
    for (std::size_t i = 1; i <= d; ++i) out << ",y_" << i;
    out << '\n';
    for (std::size_t r = 0; r < n_paths; ++r)
      for (std::size_t j = 0; j <= n_steps; ++j) {
        out << r << ',' << j << ',' << format_double(static_cast<double>(j) * h);
        const auto y = state(r, j);
        for (std::size_t i = 0; i < d; ++i) out << ',' << format_double(y[static_cast<Eigen::Index>(i)]);
        out << '\n';
      }
  }
};

/// Simulates M paths from x0; path r draws its increments (m normals per step,
/// in step order) from substream (seed, r).
inline BemBatch simulate_bem(const SdeModel& model, const BemConfig& cfg, std::uint64_t seed, std::size_t n_paths) {
  cfg.validate(model);
  require(n_paths >= 1, ErrorCode::InvalidSpec, "n_paths must be >= 1");
  BemBatch batch;
  batch.n_paths = n_paths;
  batch.n_steps = cfg.n_steps;
  batch.d = model.d;
  batch.m = model.m;
  batch.h = cfg.h;
  batch.states.resize(n_paths * (cfg.n_steps + 1) * model.d);
  batch.increments.resize(n_paths * cfg.n_steps * model.m);
  batch.residuals.resize(n_paths * cfg.n_steps);
  const double sqrt_h = std::sqrt(cfg.h);
  Vector dw(model.m);
  for (std::size_t r = 0; r < n_paths; ++r) {
    Substream rng(StreamSeed{seed, r});
    Vector y = cfg.x0;
    double* state_out = batch.states.data() + r * (cfg.n_steps + 1) * model.d;
    Eigen::Map<Vector>(state_out, static_cast<Eigen::Index>(model.d)) = y;
    for (std::size_t j = 0; j < cfg.n_steps; ++j) {
      for (std::size_t i = 0; i < model.m; ++i) dw[static_cast<Eigen::Index>(i)] = sqrt_h * rng.normal();
      StepResult step;
      try {
        step = bem_step_detailed(model, y, dw, cfg.h, cfg.newton);
      } catch (const Error& e) {
        if (e.code() != ErrorCode::NonConvergence) throw;
        fail(ErrorCode::NonConvergence, "path " + std::to_string(r) + ", step " + std::to_string(j) + ": " + e.what());
      }
      y = step.y;
      Eigen::Map<Vector>(state_out + (j + 1) * model.d, static_cast<Eigen::Index>(model.d)) = y;
      Eigen::Map<Vector>(batch.increments.data() + (r * cfg.n_steps + j) * model.m,
                         static_cast<Eigen::Index>(model.m)) = dw;
      batch.residuals[r * cfg.n_steps + j] = step.residual;
    }
  }
  return batch;
}

struct ZSequence {
  /// Z^{j+1}, j = 0..N_h-1
  std::vector<double> z;
  /// S_n = (1 - 2 h0 L)^{-1} sum_{j<n} Z^{j+1}, n = 0..N_h
  std::vector<double> s;
};

/// Z^{j+1} = |g(Y^j) dW^{j+1}|^2 - h |g(Y^j)|_F^2 + 2 <g(Y^j) dW^{j+1}, Y^j>.
inline double z_increment(const SdeModel& model, const Vector& y, const Vector& dw, double h) {
  require(static_cast<std::size_t>(y.size()) == model.d && static_cast<std::size_t>(dw.size()) == model.m,
          ErrorCode::ShapeMismatch, "state or increment has the wrong dimension");
  const Matrix g = model.diffusion(y);
  const Vector gdw = g * dw;
  return gdw.squaredNorm() - h * g.squaredNorm() + 2.0 * gdw.dot(y);
}

inline ZSequence z_sequence(const SdeModel& model, const BemBatch& batch, std::size_t path, double h0) {
  require(path < batch.n_paths, ErrorCode::ShapeMismatch, "path index out of range");
  require(batch.d == model.d && batch.m == model.m, ErrorCode::ShapeMismatch, "batch does not match the model");
  const double scale = 1.0 / (1.0 - 2.0 * h0 * model.coercivity);
  ZSequence out;
  out.z.resize(batch.n_steps);
  out.s.assign(batch.n_steps + 1, 0.0);
  double acc = 0.0;
  for (std::size_t j = 0; j < batch.n_steps; ++j) {
    out.z[j] = z_increment(model, batch.state(path, j), batch.increment(path, j), batch.h);
    acc += out.z[j];
    out.s[j + 1] = scale * acc;
  }
  return out;
}

/// ((2-p)/(1-p))^{1/(2p)} exp(LT/(1-2 h0 L)) (|x0|^2 + (1-2 h0 L)^{-1} (h0 |g(x0)|^2 + 2LT))^{1/2}.
/// Takes no step size: the bound holds uniformly for every h in (0, h0).
inline double bem_moment_bound(double p, double L, double T, double h0, double x0_norm, double g_x0_norm) {
  require(p > 0.0 && p < 1.0, ErrorCode::POutOfRange, "p must lie in (0,1)");
  require(L >= 0.0 && T > 0.0, ErrorCode::InvalidSpec, "L must be >= 0 and T > 0");
  require(h0 > 0.0 && (L == 0.0 || 2.0 * h0 * L < 1.0), ErrorCode::StepBoundViolation, "h0 must lie in (0, 1/(2L))");
  const double damp = 1.0 - 2.0 * h0 * L;
  const double prefactor = std::pow((2.0 - p) / (1.0 - p), 1.0 / (2.0 * p));
  return prefactor * std::exp(L * T / damp) *
         std::sqrt(x0_norm * x0_norm + (h0 * g_x0_norm * g_x0_norm + 2.0 * L * T) / damp);
}

/// || sup_j |Y^j| ||_{2p} with a delta-method standard error.
inline MeanSe sup_norm_moment(const BemBatch& batch, double p) {
  std::vector<double> vals(batch.n_paths);
  for (std::size_t r = 0; r < batch.n_paths; ++r) {
    double sup = 0.0;
    for (std::size_t j = 0; j <= batch.n_steps; ++j) sup = std::max(sup, batch.state(r, j).norm());
    vals[r] = std::pow(sup, 2.0 * p);
  }
  const MeanSe m = mean_se(vals);
  const double est = std::pow(m.mean, 1.0 / (2.0 * p));
  const double se = m.mean > 0.0 ? est / (2.0 * p * m.mean) * m.se : 0.0;
  return {est, se};
}

struct BemMomentOptions {
  double demi_level = 0.999;
  /// Paths used for the demimartingale check on S_n (0 = all).
  std::size_t demi_paths = 0;
};

/// For every h: simulates, compares ||sup_j |Y^j|||_{2p} with the single
/// h-free bound, checks that each Z column averages to 0 within 3 SE and that
/// the S_n batch passes the demimartingale check.
inline VerificationReport verify_bem_moment_bound(const SdeModel& model, std::span<const BemConfig> grid,
                                        std::span<const double> p_values, std::size_t n_paths, std::uint64_t seed,
                                        const BemMomentOptions& opts = {}) {
  require(!grid.empty(), ErrorCode::HGridViolation, "empty step-size grid");
  const BemConfig& first = grid.front();
  for (const auto& cfg : grid) {
    require(cfg.T == first.T && cfg.h0 == first.h0 && cfg.x0 == first.x0, ErrorCode::HGridViolation,
            "grid configs must share T, h0 and x0");
    require(cfg.h < cfg.h0, ErrorCode::HGridViolation, "every h must be < h0");
    cfg.validate(model);
  }
  const double x0_norm = first.x0.norm();
  const double g_x0_norm = model.diffusion(first.x0).norm();

  VerificationReport report;
  report.command = "bem";
  report.schema = CsvSchema::Sde;
  report.details["model"] = model.name;
  report.details["L"] = model.coercivity;
  report.details["T"] = first.T;
  report.details["h0"] = first.h0;
  nlohmann::ordered_json per_h = nlohmann::ordered_json::array();

  for (std::size_t gi = 0; gi < grid.size(); ++gi) {
    const BemConfig& cfg = grid[gi];
    const BemBatch batch = simulate_bem(model, cfg, seed, n_paths);
    for (double p : p_values) {
      const MeanSe est = sup_norm_moment(batch, p);
      VerificationRow row;
      row.n = cfg.n_steps;
      row.p = p;
      row.h = cfg.h;
      row.lhs = est.mean;
      row.lhs_se = est.se;
      row.rhs = bem_moment_bound(p, model.coercivity, cfg.T, cfg.h0, x0_norm, g_x0_norm);
      row.combined_se = est.se;
      row.label = model.name;
      report.rows.push_back(row);
    }

    double max_residual = 0.0;
    for (double r : batch.residuals) max_residual = std::max(max_residual, r);
    const bool residual_ok = max_residual <= cfg.newton.tol;

    TrajectoryBatch s_batch(n_paths, cfg.n_steps, "S_n");
    std::vector<std::vector<double>> z_cols(cfg.n_steps, std::vector<double>(n_paths));
    for (std::size_t r = 0; r < n_paths; ++r) {
      const ZSequence zs = z_sequence(model, batch, r, cfg.h0);
      std::copy(zs.s.begin(), zs.s.end(), s_batch.row(r).begin());
      for (std::size_t j = 0; j < cfg.n_steps; ++j) z_cols[j][r] = zs.z[j];
    }
    std::size_t z_outside = 0;
    double z_max_abs_t = 0.0;
    for (const auto& col : z_cols) {
      const MeanSe ms = mean_se(col);
      const double t = ms.se > 0.0 ? std::abs(ms.mean) / ms.se : (ms.mean == 0.0 ? 0.0 : kInf);
      z_max_abs_t = std::max(z_max_abs_t, t);
      if (t > kSeSlack) ++z_outside;
    }

    bool demi_ok = true;
    nlohmann::ordered_json demi_json;
    if (cfg.n_steps >= 2 && n_paths >= 30) {
      const std::size_t use = opts.demi_paths == 0 ? n_paths : std::min(opts.demi_paths, n_paths);
      TrajectoryBatch s_used = s_batch;
      if (use < n_paths) {
        s_used = TrajectoryBatch(use, cfg.n_steps,
                                 std::vector<double>(s_batch.values().begin(),
                                                     s_batch.values().begin() +
                                                         static_cast<std::ptrdiff_t>(use * (cfg.n_steps + 1))),
                                 "S_n");
      }
      const DemiReport demi =
          check_demimartingale(s_used, standard_family(s_used), opts.demi_level, DemiMode::Demi);
      demi_ok = demi.passed;
      demi_json = demi.summary();
    }

    char hbuf[32];
    std::snprintf(hbuf, sizeof hbuf, "h=%g", cfg.h);
    const std::string tag = hbuf;
    report.side_checks.emplace_back("newton residuals <= tol (" + tag + ")", residual_ok);
    report.side_checks.emplace_back("Z column means within 3 SE of 0 (" + tag + ")", z_outside == 0);
    report.side_checks.emplace_back("S_n passes demimartingale check (" + tag + ")", demi_ok);
    nlohmann::ordered_json entry;
    entry["h"] = cfg.h;
    entry["N_h"] = cfg.n_steps;
    entry["max_newton_residual"] = max_residual;
    entry["z_columns_outside_3se"] = z_outside;
    entry["z_max_abs_t"] = z_max_abs_t;
    entry["demi_check"] = demi_json;
    per_h.push_back(std::move(entry));
  }
  report.details["per_h"] = std::move(per_h);
  return report;
}

struct CoercivityReport {
  double min_residual = kInf;
  Vector argmin;
  std::size_t n_samples = 0;
  bool passed = true;
};

/// Evaluates L(1 + |x|^2) - <f(x),x> - |g(x)|_F^2 / 2 on a randomly shifted
/// Halton point set over [lo, hi] (plus the box corners) and reports the minimum.
inline CoercivityReport coercivity_probe(const SdeModel& model, const Vector& lo, const Vector& hi,
                                         std::size_t n_samples, std::uint64_t seed) {
  require(static_cast<std::size_t>(lo.size()) == model.d && static_cast<std::size_t>(hi.size()) == model.d,
          ErrorCode::ShapeMismatch, "box dimension does not match the model");
  require((hi.array() > lo.array()).all(), ErrorCode::InvalidSpec, "probe box is degenerate");
  static constexpr int kPrimes[] = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53};
  require(model.d <= std::size(kPrimes), ErrorCode::InvalidSpec, "probe supports d <= 16");

  Substream rng(StreamSeed{seed, 0});
  Vector shift(model.d);
  for (std::size_t i = 0; i < model.d; ++i) shift[static_cast<Eigen::Index>(i)] = rng.uniform();

  CoercivityReport report;
  auto probe = [&](const Vector& x) {
    const double residual = model.coercivity * (1.0 + x.squaredNorm()) - model.drift(x).dot(x) -
                            0.5 * model.diffusion(x).squaredNorm();
    ++report.n_samples;
    if (residual < report.min_residual) {
      report.min_residual = residual;
      report.argmin = x;
    }
  };
  for (std::size_t s = 1; s <= n_samples; ++s) {
    Vector x(model.d);
    for (std::size_t i = 0; i < model.d; ++i) {
      double radical = 0.0, f = 1.0;
      for (std::size_t k = s; k > 0; k /= static_cast<std::size_t>(kPrimes[i])) {
        f /= kPrimes[i];
        radical += f * static_cast<double>(k % static_cast<std::size_t>(kPrimes[i]));
      }
      const auto ii = static_cast<Eigen::Index>(i);
      x[ii] = lo[ii] + (hi[ii] - lo[ii]) * std::fmod(radical + shift[ii], 1.0);
    }
    probe(x);
  }
  if (model.d <= 10) {
    for (std::size_t mask = 0; mask < (std::size_t{1} << model.d); ++mask) {
      Vector x(model.d);
      for (std::size_t i = 0; i < model.d; ++i) {
        const auto ii = static_cast<Eigen::Index>(i);
        x[ii] = (mask >> i) & 1U ? hi[ii] : lo[ii];
      }
      probe(x);
    }
  }
  report.passed = report.min_residual >= 0.0;
  return report;
}

namespace zoo {

/// f(x) = -kappa x, g = sigma I (d = m). <f,x> + |g|^2/2 = -kappa|x|^2 + d sigma^2/2, so L = d sigma^2 / 2.
inline SdeModel ornstein_uhlenbeck(double kappa, double sigma, std::size_t d = 1) {
  require(kappa >= 0.0, ErrorCode::InvalidSpec, "kappa must be >= 0");
  SdeModel m;
  m.name = "ou(kappa=" + format_double(kappa) + ",sigma=" + format_double(sigma) + ")";
  m.d = d;
  m.m = d;
  m.drift = [kappa](const Vector& x) { return Vector(-kappa * x); };
  m.diffusion = [sigma, d](const Vector&) { return Matrix(sigma * Matrix::Identity(d, d)); };
  m.drift_jacobian = [kappa, d](const Vector&) { return Matrix(-kappa * Matrix::Identity(d, d)); };
  m.coercivity = 0.5 * static_cast<double>(d) * sigma * sigma;
  m.one_sided_lipschitz = -kappa;
  return m;
}

/// f(x) = -kappa x, g(x) = sigma x / sqrt(1 + x^2) (scalar): linear noise near 0,
/// bounded for large |x|. <f,x> + g^2/2 <= sigma^2/2, so L = sigma^2 / 2.
inline SdeModel bounded_diffusion(double kappa, double sigma) {
  require(kappa >= 0.0, ErrorCode::InvalidSpec, "kappa must be >= 0");
  SdeModel m;
  m.name = "bounded(kappa=" + format_double(kappa) + ",sigma=" + format_double(sigma) + ")";
  m.drift = [kappa](const Vector& x) { return Vector(-kappa * x); };
  m.diffusion = [sigma](const Vector& x) {
    Matrix g(1, 1);
    g(0, 0) = sigma * x[0] / std::sqrt(1.0 + x[0] * x[0]);
    return g;
  };
  m.drift_jacobian = [kappa](const Vector&) { return Matrix(Matrix::Constant(1, 1, -kappa)); };
  m.coercivity = 0.5 * sigma * sigma;
  m.one_sided_lipschitz = -kappa;
  return m;
}

/// f(x) = x - x^3, g = sigma (scalar). x^2 - x^4 <= 1/4, so L = 1/4 + sigma^2/2;
/// f' <= 1 gives osl = 1. No analytic Jacobian: steps use finite differences.
inline SdeModel double_well(double sigma) {
  SdeModel m;
  m.name = "double_well(sigma=" + format_double(sigma) + ")";
  m.drift = [](const Vector& x) { return Vector(x.array() - x.array().cube()); };
  m.diffusion = [sigma](const Vector&) { return Matrix(Matrix::Constant(1, 1, sigma)); };
  m.coercivity = 0.25 + 0.5 * sigma * sigma;
  m.one_sided_lipschitz = 1.0;
  return m;
}

/// f = 0, g = 0: every path stays at x0 and L = 0.
inline SdeModel frozen(std::size_t d = 1) {
  SdeModel m;
  m.name = "frozen";
  m.d = d;
  m.m = d;
  m.drift = [d](const Vector&) { return Vector(Vector::Zero(d)); };
  m.diffusion = [d](const Vector&) { return Matrix(Matrix::Zero(d, d)); };
  m.drift_jacobian = [d](const Vector&) { return Matrix(Matrix::Zero(d, d)); };
  return m;
}

/// f(x) = A x, g = 0. L = max(0, largest eigenvalue of (A + A^T)/2), which is also the osl.
inline SdeModel linear(const Matrix& a) {
  require(a.rows() == a.cols(), ErrorCode::ShapeMismatch, "A must be square");
  SdeModel m;
  m.name = "linear";
  m.d = static_cast<std::size_t>(a.rows());
  m.m = 1;
  m.drift = [a](const Vector& x) { return Vector(a * x); };
  m.diffusion = [d = m.d](const Vector&) { return Matrix(Matrix::Zero(d, 1)); };
  m.drift_jacobian = [a](const Vector&) { return a; };
  const Matrix sym = 0.5 * (a + a.transpose());
  const double top = Eigen::SelfAdjointEigenSolver<Matrix>(sym).eigenvalues().maxCoeff();
  m.coercivity = std::max(0.0, top);
  m.one_sided_lipschitz = top;
  return m;
}

}  // namespace zoo

}  // namespace demigron
