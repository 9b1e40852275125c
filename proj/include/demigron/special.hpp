#pragma once

#include <cmath>
#include <cstddef>

#include "error.hpp"

namespace demigron {

/// Gamma function; libm's tgamma is accurate to a few ulp on the (0, 20) range used here.
inline double gamma_fn(double x) { return std::tgamma(x); }

struct MittagLefflerOptions {
  double rel_tol = 1e-16;
  /// Overflow guard on |z|.
  double z_max = 100.0;
  std::size_t max_terms = 100000;
};

/// E_alpha(z) = sum_k z^k / Gamma(1 + k alpha) by direct summation.
///
/// Terms are formed in log space (k log|z| - lgamma(1 + k alpha)) so that
/// neither z^k nor the gamma factor overflows on its own. Summation stops once
/// three consecutive terms fall below rel_tol times the running sum. Intended
/// for moderate arguments; large negative z suffers cancellation.
inline double mittag_leffler(double alpha, double z, const MittagLefflerOptions& opts = {}) {
  require(std::isfinite(alpha) && alpha > 0.0, ErrorCode::AlphaOutOfRange, "alpha must be > 0");
  require(std::isfinite(z), ErrorCode::NoConvergence, "non-finite argument");
  require(std::abs(z) <= opts.z_max, ErrorCode::NoConvergence, "|z| exceeds the overflow guard");
  require(opts.rel_tol > 0.0, ErrorCode::InvalidSpec, "rel_tol must be > 0");
  if (z == 0.0) return 1.0;

  const double log_abs_z = std::log(std::abs(z));
  const bool alternating = z < 0.0;
  double sum = 1.0;
  int small_run = 0;
  for (std::size_t k = 1; k < opts.max_terms; ++k) {
    const double kd = static_cast<double>(k);
    double term = std::exp(kd * log_abs_z - std::lgamma(1.0 + kd * alpha));
    if (alternating && (k % 2 == 1)) term = -term;
    sum += term;
    require(std::isfinite(sum), ErrorCode::NoConvergence, "series overflowed");
    if (std::abs(term) < opts.rel_tol * std::abs(sum)) {
      if (++small_run == 3) return sum;
    } else {
      small_run = 0;
    }
  }
  fail(ErrorCode::NoConvergence, "Mittag-Leffler series did not converge within max_terms");
}

}  // namespace demigron
