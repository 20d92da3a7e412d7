#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace permwalk {

/// Paired (twin) state with constant-time pair-swap updates.
///
/// Extends the rescaled two-sample accumulators with the scaled covariance
///   om_xy = n*(n-1)*cov(x, y) = n*sum(x_k*y_k) - sum(x)*sum(y).
class PairedState {
public:
  /// Requires equal lengths n >= 2 and finite values.
  PairedState(std::span<const double> x, std::span<const double> y);

  std::size_t n() const { return x_.size(); }

  /// Exchange the i-th pair (x[i] <-> y[i]) in O(1). Mean and variance
  /// accumulators update as in the two-sample case with j = i; the
  /// covariance update reads the pre-swap sums:
  ///   om_xy' = om_xy + (x_i - y_i)^2 + (x_i - y_i)*(nu_y - nu_x)
  void apply_pair_swap(std::size_t i)
  {
    if (i >= n()) pair_index_error();
    const double xi = x_[i];
    const double yi = y_[i];
    const double d = xi - yi;
    // Covariance reads the pre-swap sums; x_i*y_i itself is unchanged by the swap.
    om_xy_ += d * d + d * (nu_y_ - nu_x_);
    const double nu_x1 = nu_x_ - d;
    const double nu_y1 = nu_y_ + d;
    om2_x_ += (nu_x_ * nu_x_ - nu_x1 * nu_x1) * inv_n_ + yi * yi - xi * xi;
    om2_y_ += (nu_y_ * nu_y_ - nu_y1 * nu_y1) * inv_n_ + xi * xi - yi * yi;
    nu_x_ = nu_x1;
    nu_y_ = nu_y1;
    x_[i] = yi;
    y_[i] = xi;
  }

  /// Pearson correlation om_xy / (n*sqrt(om2_x*om2_y)), clamped to [-1, 1];
  /// nullopt when either margin has zero variance.
  std::optional<double> correlation() const
  {
    const double vx = om2_x();
    const double vy = om2_y();
    if (vx <= 0.0 || vy <= 0.0) return std::nullopt;
    const double rho = om_xy_ * inv_n_ / std::sqrt(vx * vy);
    return rho < -1.0 ? -1.0 : (rho > 1.0 ? 1.0 : rho);
  }

  double nu_x() const { return nu_x_; }
  double nu_y() const { return nu_y_; }
  double om2_x() const { return om2_x_ < 0.0 ? 0.0 : om2_x_; }
  double om2_y() const { return om2_y_ < 0.0 ? 0.0 : om2_y_; }
  double om_xy() const { return om_xy_; }

  std::span<const double> x_values() const { return x_; }
  std::span<const double> y_values() const { return y_; }

  /// Recompute the accumulators from the current pair contents.
  void reinitialize();

private:
  [[noreturn]] void pair_index_error() const;

  std::vector<double> x_;
  std::vector<double> y_;
  double nu_x_ = 0.0;
  double nu_y_ = 0.0;
  double om2_x_ = 0.0;
  double om2_y_ = 0.0;
  double om_xy_ = 0.0;
  double inv_n_ = 0.0;
};

/// Pearson correlation computed from scratch in O(n); the validation oracle.
std::optional<double> direct_corr(std::span<const double> x, std::span<const double> y);

}  // namespace permwalk
