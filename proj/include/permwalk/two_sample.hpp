#pragma once

#include <cmath>
#include <optional>
#include <span>
#include <vector>

#include "permwalk/permutation.hpp"

namespace permwalk {

/// Two-sample state with constant-time transposition updates.
///
/// Carries the current group contents plus the rescaled accumulators
///   nu_x = m*mean(x)            (the plain sum of x)
///   nu_y = n*mean(y)
///   om2_x = (m-1)*var(x)        (sum of squared deviations)
///   om2_y = (n-1)*var(y)
/// Rescaling avoids dividing by m and n on every walk, which would compound
/// roundoff over long walk sequences.
class TwoSampleState {
public:
  /// Requires m >= 2, n >= 2 and finite values.
  TwoSampleState(std::span<const double> x, std::span<const double> y);

  std::size_t m() const { return x_.size(); }
  std::size_t n() const { return y_.size(); }

  /// Exchange x[t.i] and y[t.j], updating all accumulators in O(1):
  ///   nu_x'  = nu_x + y_j - x_i
  ///   nu_y'  = nu_y + x_i - y_j
  ///   om2_x' = om2_x + (nu_x^2 - nu_x'^2)/m + y_j^2 - x_i^2
  ///   om2_y' = om2_y + (nu_y^2 - nu_y'^2)/n + x_i^2 - y_j^2
  /// The 1/m, 1/n reciprocals are fixed at construction, keeping the hot
  /// path free of divisions.
  void apply_swap(WalkPair t)
  {
    if (t.i >= m() || t.j >= n()) swap_index_error();
    const double xi = x_[t.i];
    const double yj = y_[t.j];
    const double nu_x1 = nu_x_ + yj - xi;
    const double nu_y1 = nu_y_ + xi - yj;
    om2_x_ += (nu_x_ * nu_x_ - nu_x1 * nu_x1) * inv_m_ + yj * yj - xi * xi;
    om2_y_ += (nu_y_ * nu_y_ - nu_y1 * nu_y1) * inv_n_ + xi * xi - yj * yj;
    nu_x_ = nu_x1;
    nu_y_ = nu_y1;
    x_[t.i] = yj;
    y_[t.j] = xi;
  }

  /// Two-sample t-statistic, or nullopt when the pooled variance vanishes.
  std::optional<double> t_statistic() const
  {
    const double pooled = (om2_x() + om2_y()) * var_coef_;
    if (pooled <= 0.0) return std::nullopt;
    return (nu_x_ * inv_m_ - nu_y_ * inv_n_) / std::sqrt(pooled);
  }

  double nu_x() const { return nu_x_; }
  double nu_y() const { return nu_y_; }
  /// Scaled sums of squared deviations, clamped to >= 0 at read time
  /// (roundoff can leave tiny negative residue).
  double om2_x() const { return om2_x_ < 0.0 ? 0.0 : om2_x_; }
  double om2_y() const { return om2_y_ < 0.0 ? 0.0 : om2_y_; }

  std::span<const double> x_values() const { return x_; }
  std::span<const double> y_values() const { return y_; }

  /// Recompute the accumulators from the current group contents. Optional
  /// guard against pathological data; never required by the tested drift
  /// bounds.
  void reinitialize();

private:
  [[noreturn]] void swap_index_error() const;

  std::vector<double> x_;
  std::vector<double> y_;
  double nu_x_ = 0.0;
  double nu_y_ = 0.0;
  double om2_x_ = 0.0;
  double om2_y_ = 0.0;
  double inv_m_ = 0.0;
  double inv_n_ = 0.0;
  /// (1/m + 1/n) / (m + n - 2), the pooled-variance coefficient.
  double var_coef_ = 0.0;
};

/// t-statistic computed from scratch in O(m+n); the validation oracle and
/// the naive baseline. nullopt when the pooled variance vanishes.
std::optional<double> direct_t(std::span<const double> x, std::span<const double> y);

}  // namespace permwalk
