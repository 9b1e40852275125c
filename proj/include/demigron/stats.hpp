#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numbers>
#include <span>
#include <vector>

#include "error.hpp"

namespace demigron {

/// Monte Carlo estimate of a mean with its standard error.
struct MeanSe {
  double mean = 0.0;
  double se = 0.0;
};

/// Sample mean and standard error (sample sd / sqrt(n)); se = 0 for n = 1.
inline MeanSe mean_se(std::span<const double> xs) {
  require(!xs.empty(), ErrorCode::DegenerateBatch, "mean of an empty sample");
  // Welford keeps the variance stable for samples with a large common offset.
  double mean = 0.0, m2 = 0.0;
  std::size_t count = 0;
  for (double x : xs) {
    ++count;
    const double delta = x - mean;
    mean += delta / static_cast<double>(count);
    m2 += delta * (x - mean);
  }
  if (count < 2) return {mean, 0.0};
  const double var = m2 / static_cast<double>(count - 1);
  return {mean, std::sqrt(var / static_cast<double>(count))};
}

inline double sample_variance(std::span<const double> xs) {
  const std::size_t n = xs.size();
  require(n >= 2, ErrorCode::DegenerateBatch, "variance needs at least two samples");
  const MeanSe ms = mean_se(xs);
  return ms.se * ms.se * static_cast<double>(n);
}

inline double sample_covariance(std::span<const double> xs, std::span<const double> ys) {
  require(xs.size() == ys.size() && xs.size() >= 2, ErrorCode::DegenerateBatch,
          "covariance needs two aligned samples of size >= 2");
  const double n = static_cast<double>(xs.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= n;
  my /= n;
  double acc = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) acc += (xs[i] - mx) * (ys[i] - my);
  return acc / (n - 1.0);
}

/// Covariance estimate with a batch-means standard error: the sample is split
/// into `blocks` contiguous blocks, the covariance is computed per block and
/// the spread of the block values gives the SE.
inline MeanSe block_covariance(std::span<const double> xs, std::span<const double> ys,
                               std::size_t blocks = 30) {
  require(xs.size() == ys.size(), ErrorCode::ShapeMismatch, "covariance inputs differ in length");
  require(xs.size() >= 2 * blocks, ErrorCode::DegenerateBatch,
          "block covariance needs at least two samples per block");
  const double estimate = sample_covariance(xs, ys);
  std::vector<double> per_block(blocks);
  const std::size_t n = xs.size();
  for (std::size_t b = 0; b < blocks; ++b) {
    const std::size_t lo = b * n / blocks;
    const std::size_t hi = (b + 1) * n / blocks;
    per_block[b] = sample_covariance(xs.subspan(lo, hi - lo), ys.subspan(lo, hi - lo));
  }
  const MeanSe spread = mean_se(per_block);
  return {estimate, spread.se};
}

inline double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }

/// z such that P(Z > z) = alpha for standard normal Z; alpha in (0, 1).
inline double normal_upper_quantile(double alpha) {
  require(alpha > 0.0 && alpha < 1.0, ErrorCode::InvalidSpec,
          "normal quantile needs a tail probability in (0,1)");
  double lo = -40.0, hi = 40.0;
  for (int it = 0; it < 200 && hi - lo > 1e-15; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (0.5 * std::erfc(mid / std::numbers::sqrt2) > alpha) lo = mid;
    else hi = mid;
  }
  return 0.5 * (lo + hi);
}

/// z such that P(Z <= z) = prob.
inline double normal_quantile(double prob) { return normal_upper_quantile(1.0 - prob); }

/// Empirical quantile by linear interpolation between order statistics.
inline double empirical_quantile(std::vector<double> xs, double q) {
  require(!xs.empty(), ErrorCode::DegenerateBatch, "quantile of an empty sample");
  std::sort(xs.begin(), xs.end());
  const double pos = q * static_cast<double>(xs.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = std::min(lo + 1, xs.size() - 1);
  const double frac = pos - static_cast<double>(lo);
  return xs[lo] + frac * (xs[hi] - xs[lo]);
}

}  // namespace demigron
