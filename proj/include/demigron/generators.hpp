#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "error.hpp"
#include "rng.hpp"
#include "trajectory.hpp"

namespace demigron {

enum class GeneratorKind { RandomWalk, AssociatedPartialSum, TwoPointDemisub, BoundedAssociatedPartialSum };

/// Symmetric, mean-zero base laws: +-scale, N(0, scale^2), U[-scale, scale].
enum class BaseLaw { Rademacher, Gaussian, Uniform };

struct BaseDistribution {
  BaseLaw law = BaseLaw::Rademacher;
  double scale = 1.0;

  double draw(Substream& rng) const {
    switch (law) {
      case BaseLaw::Rademacher: return scale * rng.rademacher();
      case BaseLaw::Gaussian: return scale * rng.normal();
      case BaseLaw::Uniform: return rng.uniform(-scale, scale);
    }
    return 0.0;
  }
};

inline std::string to_string(BaseLaw law) {
  switch (law) {
    case BaseLaw::Rademacher: return "rademacher";
    case BaseLaw::Gaussian: return "gaussian";
    case BaseLaw::Uniform: return "uniform";
  }
  return "?";
}

inline std::string to_string(GeneratorKind kind) {
  switch (kind) {
    case GeneratorKind::RandomWalk: return "random_walk";
    case GeneratorKind::AssociatedPartialSum: return "associated_partial_sum";
    case GeneratorKind::TwoPointDemisub: return "two_point_demisub";
    case GeneratorKind::BoundedAssociatedPartialSum: return "bounded_associated_partial_sum";
  }
  return "?";
}

/// Describes a sequence generator.
///
/// - RandomWalk: i.i.d. `increment` draws.
/// - AssociatedPartialSum: increment_i = U_i + theta * V with U_i i.i.d. from
///   `increment` and one shared shock V from `shock` per path. Both laws are
///   centred, and nondecreasing functions of independent variables are
///   associated, so the increments are mean-zero and associated.
/// - BoundedAssociatedPartialSum: the same increments clamped to [-bound, bound]
///   (clamping is nondecreasing and preserves symmetry, hence the mean).
/// - TwoPointDemisub: S_k = -k with probability p, S_k = +k otherwise. For
///   N = 2 this is exactly the two-atom law (0,-1,-2) / (0,1,2).
struct GeneratorSpec {
  GeneratorKind kind = GeneratorKind::RandomWalk;
  BaseDistribution increment{};
  BaseDistribution shock{BaseLaw::Uniform, 1.0};
  double theta = 0.0;
  double p = 0.5;
  double bound = 1.0;
  bool starts_at_zero = true;

  static GeneratorSpec random_walk(BaseDistribution increment = {}) {
    GeneratorSpec s;
    s.kind = GeneratorKind::RandomWalk;
    s.increment = increment;
    return s;
  }
  static GeneratorSpec associated(double theta, BaseDistribution increment = {BaseLaw::Uniform, 1.0},
                                  BaseDistribution shock = {BaseLaw::Uniform, 1.0}) {
    GeneratorSpec s;
    s.kind = GeneratorKind::AssociatedPartialSum;
    s.theta = theta;
    s.increment = increment;
    s.shock = shock;
    return s;
  }
  static GeneratorSpec bounded_associated(double theta, double bound,
                                          BaseDistribution increment = {BaseLaw::Uniform, 1.0},
                                          BaseDistribution shock = {BaseLaw::Uniform, 1.0}) {
    GeneratorSpec s = associated(theta, increment, shock);
    s.kind = GeneratorKind::BoundedAssociatedPartialSum;
    s.bound = bound;
    return s;
  }
  static GeneratorSpec two_point(double p) {
    GeneratorSpec s;
    s.kind = GeneratorKind::TwoPointDemisub;
    s.p = p;
    return s;
  }

  void validate() const {
    auto finite_pos = [](double x) { return std::isfinite(x) && x > 0.0; };
    require(finite_pos(increment.scale), ErrorCode::InvalidSpec, "increment scale must be > 0");
    switch (kind) {
      case GeneratorKind::RandomWalk: break;
      case GeneratorKind::BoundedAssociatedPartialSum:
        require(finite_pos(bound), ErrorCode::InvalidSpec, "bound c must be > 0");
        [[fallthrough]];
      case GeneratorKind::AssociatedPartialSum:
        require(std::isfinite(theta) && theta >= 0.0, ErrorCode::InvalidSpec, "theta must be >= 0");
        require(finite_pos(shock.scale), ErrorCode::InvalidSpec, "shock scale must be > 0");
        break;
      case GeneratorKind::TwoPointDemisub:
        require(p >= 0.0 && p <= 1.0, ErrorCode::InvalidSpec, "two-point probability p must lie in [0,1]");
        require(starts_at_zero, ErrorCode::InvalidSpec, "two-point sequence always starts at zero");
        break;
    }
  }

  std::string describe() const {
    std::string s = to_string(kind);
    switch (kind) {
      case GeneratorKind::RandomWalk:
        s += "(" + to_string(increment.law) + "," + format_double(increment.scale) + ")";
        break;
      case GeneratorKind::AssociatedPartialSum:
        s += "(theta=" + format_double(theta) + ")";
        break;
      case GeneratorKind::BoundedAssociatedPartialSum:
        s += "(theta=" + format_double(theta) + ",c=" + format_double(bound) + ")";
        break;
      case GeneratorKind::TwoPointDemisub:
        s += "(p=" + format_double(p) + ")";
        break;
    }
    return s;
  }
};

/// Entry cap for a single batch (2^28 doubles = 2 GiB).
inline constexpr std::size_t kDefaultMaxBatchEntries = std::size_t{1} << 28;

/// Fills one path; the draw order (shock first, then increments in time order)
/// is part of the reproducibility contract.
inline void fill_path(const GeneratorSpec& spec, Substream& rng, std::span<double> out) {
  const std::size_t width = out.size();
  if (spec.kind == GeneratorKind::TwoPointDemisub) {
    const double sign = rng.bernoulli(spec.p) ? -1.0 : 1.0;
    for (std::size_t k = 0; k < width; ++k) out[k] = sign * static_cast<double>(k);
    return;
  }
  const bool shared = spec.kind != GeneratorKind::RandomWalk;
  const double common = shared ? spec.theta * spec.shock.draw(rng) : 0.0;
  auto increment = [&] {
    double x = spec.increment.draw(rng) + common;
    if (spec.kind == GeneratorKind::BoundedAssociatedPartialSum) x = std::clamp(x, -spec.bound, spec.bound);
    return x;
  };
  double running = spec.starts_at_zero ? 0.0 : increment();
  out[0] = running;
  for (std::size_t k = 1; k < width; ++k) {
    running += increment();
    out[k] = running;
  }
}

/// Generates M paths of length N+1; path r uses substream (seed, r).
inline TrajectoryBatch generate_paths(const GeneratorSpec& spec, std::size_t n_steps, std::size_t n_paths,
                                      std::uint64_t seed,
                                      std::size_t max_entries = kDefaultMaxBatchEntries) {
  spec.validate();
  require(n_paths >= 1, ErrorCode::InvalidSpec, "n_paths must be >= 1");
  require(n_steps < max_entries && n_paths <= max_entries / (n_steps + 1), ErrorCode::Overflow,
          "n_paths x (n_steps+1) exceeds the memory budget");
  TrajectoryBatch batch(n_paths, n_steps, spec.describe());
  for (std::size_t r = 0; r < n_paths; ++r) {
    Substream rng(StreamSeed{seed, r});
    fill_path(spec, rng, batch.row(r));
  }
  return batch;
}

/// The path frozen after the last index at which it is >= x:
/// out_j = S_{min(j, tau)}, tau = max{k : S_k >= x}, tau = N when no such k.
inline std::vector<double> stopped_sequence(std::span<const double> path, double threshold) {
  require(threshold > 0.0, ErrorCode::NonPositiveThreshold, "threshold x must be > 0");
  require(!path.empty(), ErrorCode::InvalidSpec, "empty path");
  std::size_t tau = path.size() - 1;
  for (std::size_t k = path.size(); k-- > 0;) {
    if (path[k] >= threshold) {
      tau = k;
      break;
    }
  }
  std::vector<double> out(path.begin(), path.end());
  for (std::size_t j = tau + 1; j < out.size(); ++j) out[j] = path[tau];
  return out;
}

inline TrajectoryBatch stopped_batch(const TrajectoryBatch& batch, double threshold) {
  TrajectoryBatch out(batch.n_paths(), batch.n_steps(), batch.label() + ":stopped");
  for (std::size_t r = 0; r < batch.n_paths(); ++r) {
    const auto stopped = stopped_sequence(batch.row(r), threshold);
    std::copy(stopped.begin(), stopped.end(), out.row(r).begin());
  }
  return out;
}

}  // namespace demigron
