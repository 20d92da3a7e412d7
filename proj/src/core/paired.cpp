#include "permwalk/paired.hpp"

#include <algorithm>
#include <cmath>

#include "permwalk/error.hpp"

namespace permwalk {

PairedState::PairedState(std::span<const double> x, std::span<const double> y)
    : x_(x.begin(), x.end()), y_(y.begin(), y.end())
{
  if (x.size() != y.size()) throw_error(errc::length_mismatch, "paired groups differ in length");
  if (x.size() < 2) throw_error(errc::invalid_argument, "paired data needs at least 2 pairs");
  for (std::size_t k = 0; k < x.size(); ++k)
    if (!std::isfinite(x[k]) || !std::isfinite(y[k]))
      throw_error(errc::nonfinite_value, "paired data contains a non-finite value");
  inv_n_ = 1.0 / static_cast<double>(n());
  reinitialize();
}

void PairedState::reinitialize()
{
  const double nd = static_cast<double>(n());
  double sx = 0.0, sy = 0.0, sxy = 0.0;
  for (std::size_t k = 0; k < x_.size(); ++k) {
    sx += x_[k];
    sy += y_[k];
    sxy += x_[k] * y_[k];
  }
  nu_x_ = sx;
  nu_y_ = sy;
  om_xy_ = nd * sxy - sx * sy;
  const double mx = sx / nd;
  const double my = sy / nd;
  om2_x_ = 0.0;
  om2_y_ = 0.0;
  for (std::size_t k = 0; k < x_.size(); ++k) {
    const double dx = x_[k] - mx;
    const double dy = y_[k] - my;
    om2_x_ += dx * dx;
    om2_y_ += dy * dy;
  }
}

void PairedState::pair_index_error() const
{
  throw_error(errc::index_out_of_range, "pair index out of range");
}

std::optional<double> direct_corr(std::span<const double> x, std::span<const double> y)
{
  if (x.size() != y.size()) throw_error(errc::length_mismatch, "paired groups differ in length");
  if (x.size() < 2) throw_error(errc::invalid_argument, "paired data needs at least 2 pairs");
  const double nd = static_cast<double>(x.size());
  double sx = 0.0, sy = 0.0;
  for (std::size_t k = 0; k < x.size(); ++k) {
    sx += x[k];
    sy += y[k];
  }
  const double mx = sx / nd;
  const double my = sy / nd;
  double sxx = 0.0, syy = 0.0, sxy = 0.0;
  for (std::size_t k = 0; k < x.size(); ++k) {
    const double dx = x[k] - mx;
    const double dy = y[k] - my;
    sxx += dx * dx;
    syy += dy * dy;
    sxy += dx * dy;
  }
  if (sxx <= 0.0 || syy <= 0.0) return std::nullopt;
  return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

}  // namespace permwalk
