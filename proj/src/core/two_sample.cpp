#include "permwalk/two_sample.hpp"

#include <cmath>

#include "permwalk/error.hpp"

namespace permwalk {

namespace {

void check_group(std::span<const double> v, const char* name)
{
  if (v.size() < 2)
    throw_error(errc::invalid_argument, std::string(name) + " needs at least 2 values");
  for (double x : v)
    if (!std::isfinite(x)) throw_error(errc::nonfinite_value, std::string(name) + " contains a non-finite value");
}

double sum(std::span<const double> v)
{
  double s = 0.0;
  for (double x : v) s += x;
  return s;
}

// Sum of squared deviations, two-pass.
double ssd(std::span<const double> v, double mean)
{
  double s = 0.0;
  for (double x : v) {
    const double d = x - mean;
    s += d * d;
  }
  return s;
}

}  // namespace

TwoSampleState::TwoSampleState(std::span<const double> x, std::span<const double> y)
    : x_(x.begin(), x.end()), y_(y.begin(), y.end())
{
  check_group(x, "x");
  check_group(y, "y");
  const double md = static_cast<double>(m());
  const double nd = static_cast<double>(n());
  inv_m_ = 1.0 / md;
  inv_n_ = 1.0 / nd;
  var_coef_ = (inv_m_ + inv_n_) / (md + nd - 2.0);
  reinitialize();
}

void TwoSampleState::reinitialize()
{
  nu_x_ = sum(x_);
  nu_y_ = sum(y_);
  om2_x_ = ssd(x_, nu_x_ / static_cast<double>(m()));
  om2_y_ = ssd(y_, nu_y_ / static_cast<double>(n()));
}

void TwoSampleState::swap_index_error() const
{
  throw_error(errc::index_out_of_range, "swap index out of range");
}

std::optional<double> direct_t(std::span<const double> x, std::span<const double> y)
{
  check_group(x, "x");
  check_group(y, "y");
  const double md = static_cast<double>(x.size());
  const double nd = static_cast<double>(y.size());
  const double mean_x = sum(x) / md;
  const double mean_y = sum(y) / nd;
  const double pooled =
      (ssd(x, mean_x) + ssd(y, mean_y)) / (md + nd - 2.0) * (1.0 / md + 1.0 / nd);
  if (pooled <= 0.0) return std::nullopt;
  return (mean_x - mean_y) / std::sqrt(pooled);
}

}  // namespace permwalk
