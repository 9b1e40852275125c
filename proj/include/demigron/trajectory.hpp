#pragma once

#include <cmath>
#include <cstddef>
#include <cstdio>
#include <ostream>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "error.hpp"

namespace demigron {

/// Formats a double so that CSV/JSON output is reproducible byte for byte.
inline std::string format_double(double x) {
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  if (std::isnan(x)) return "nan";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

/// M sample paths of length N+1, stored row-major (path r, time index k).
class TrajectoryBatch {
 public:
  TrajectoryBatch() = default;

  TrajectoryBatch(std::size_t n_paths, std::size_t n_steps, std::string label = {})
      : n_paths_(n_paths), n_steps_(n_steps), values_(n_paths * (n_steps + 1), 0.0),
        label_(std::move(label)) {
    require(n_paths >= 1, ErrorCode::InvalidSpec, "a batch needs at least one path");
  }

  TrajectoryBatch(std::size_t n_paths, std::size_t n_steps, std::vector<double> values,
                  std::string label = {})
      : n_paths_(n_paths), n_steps_(n_steps), values_(std::move(values)), label_(std::move(label)) {
    require(n_paths >= 1, ErrorCode::InvalidSpec, "a batch needs at least one path");
    require(values_.size() == n_paths * (n_steps + 1), ErrorCode::ShapeMismatch,
            "value count does not match M x (N+1)");
    validate();
  }

  /// Builds a batch from explicit rows, all of equal length N+1.
  static TrajectoryBatch from_rows(const std::vector<std::vector<double>>& rows,
                                   std::string label = {}) {
    require(!rows.empty() && !rows.front().empty(), ErrorCode::InvalidSpec, "no rows given");
    const std::size_t width = rows.front().size();
    std::vector<double> flat;
    flat.reserve(rows.size() * width);
    for (const auto& row : rows) {
      require(row.size() == width, ErrorCode::ShapeMismatch, "rows differ in length");
      flat.insert(flat.end(), row.begin(), row.end());
    }
    return TrajectoryBatch(rows.size(), width - 1, std::move(flat), std::move(label));
  }

  std::size_t n_paths() const noexcept { return n_paths_; }
  std::size_t n_steps() const noexcept { return n_steps_; }
  std::size_t width() const noexcept { return n_steps_ + 1; }
  const std::string& label() const noexcept { return label_; }
  void set_label(std::string label) { label_ = std::move(label); }

  double& operator()(std::size_t path, std::size_t k) { return values_[path * width() + k]; }
  double operator()(std::size_t path, std::size_t k) const { return values_[path * width() + k]; }

  std::span<double> row(std::size_t path) { return {values_.data() + path * width(), width()}; }
  std::span<const double> row(std::size_t path) const {
    return {values_.data() + path * width(), width()};
  }

  std::vector<double> column(std::size_t k) const {
    std::vector<double> out(n_paths_);
    for (std::size_t r = 0; r < n_paths_; ++r) out[r] = (*this)(r, k);
    return out;
  }

  std::span<const double> values() const noexcept { return values_; }

  bool column_is_zero(std::size_t k) const {
    for (std::size_t r = 0; r < n_paths_; ++r)
      if ((*this)(r, k) != 0.0) return false;
    return true;
  }

  void validate() const {
    for (double v : values_)
      require(std::isfinite(v), ErrorCode::InvalidSpec, "batch '" + label_ + "' has a non-finite entry");
  }

  bool operator==(const TrajectoryBatch& other) const = default;

  /// Debug dump with header `path,k,value`.
  void write_csv(std::ostream& out) const {
    out << "path,k,value\n";
    for (std::size_t r = 0; r < n_paths_; ++r)
      for (std::size_t k = 0; k < width(); ++k)
        out << r << ',' << k << ',' << format_double((*this)(r, k)) << '\n';
  }

 private:
  std::size_t n_paths_ = 0;
  std::size_t n_steps_ = 0;
  std::vector<double> values_;
  std::string label_;
};

/// Increments X_k = S_k - S_{k-1}, k = 1..N, as an M x N batch (n_steps N-1).
inline TrajectoryBatch increments_of(const TrajectoryBatch& batch) {
  require(batch.n_steps() >= 1, ErrorCode::DegenerateBatch, "increments need N >= 1");
  TrajectoryBatch out(batch.n_paths(), batch.n_steps() - 1, batch.label() + ":increments");
  for (std::size_t r = 0; r < batch.n_paths(); ++r)
    for (std::size_t k = 1; k <= batch.n_steps(); ++k) out(r, k - 1) = batch(r, k) - batch(r, k - 1);
  return out;
}

}  // namespace demigron
