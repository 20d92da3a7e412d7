#include "permwalk/inference.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "permwalk/error.hpp"
#include "permwalk/random_stream.hpp"
#include "permwalk/two_sample.hpp"

namespace permwalk {

namespace {

bool exceeds(double permuted, double observed, Side side)
{
  return side == Side::greater ? permuted >= observed : permuted <= observed;
}

bool exceeds_strict(double permuted, double observed, Side side)
{
  return side == Side::greater ? permuted > observed : permuted < observed;
}

std::optional<double> eval_statistic(TestStatistic stat, std::span<const double> x,
                                     std::span<const double> y)
{
  switch (stat) {
    case TestStatistic::t_stat:
      return direct_t(x, y);
    case TestStatistic::mean_diff: {
      double sx = 0.0, sy = 0.0;
      for (double v : x) sx += v;
      for (double v : y) sy += v;
      return sx / static_cast<double>(x.size()) - sy / static_cast<double>(y.size());
    }
  }
  return std::nullopt;
}

}  // namespace

PValueAccumulator::PValueAccumulator(double observed, Side side)
    : observed_(observed), side_(side)
{
  if (!std::isfinite(observed))
    throw_error(errc::nonfinite_value, "observed statistic must be finite");
}

void PValueAccumulator::update(double permuted)
{
  if (!std::isfinite(permuted)) {
    ++degenerate_;
    return;
  }
  ++k_;
  if (exceeds(permuted, observed_, side_)) ++exceed_;
}

void PValueAccumulator::update(const std::optional<double>& permuted)
{
  if (!permuted.has_value()) {
    ++degenerate_;
    return;
  }
  update(*permuted);
}

double PValueAccumulator::p() const
{
  if (k_ == 0) throw_error(errc::insufficient_samples, "p-value requested before any walk");
  return static_cast<double>(exceed_) / static_cast<double>(k_);
}

double PValueAccumulator::p_add_one() const
{
  return static_cast<double>(exceed_ + 1) / static_cast<double>(k_ + 1);
}

void PValueAccumulator::merge(const PValueAccumulator& other)
{
  if (observed_ != other.observed_ || side_ != other.side_)
    throw_error(errc::invalid_argument, "cannot merge accumulators with different targets");
  k_ += other.k_;
  exceed_ += other.exceed_;
  degenerate_ += other.degenerate_;
}

MaxStatAccumulator::MaxStatAccumulator(std::span<const double> observed, bool retain_samples)
    : retain_(retain_samples)
{
  std::vector<std::optional<double>> tmp(observed.begin(), observed.end());
  init_observed(tmp);
}

MaxStatAccumulator::MaxStatAccumulator(std::span<const std::optional<double>> observed,
                                       bool retain_samples)
    : retain_(retain_samples)
{
  init_observed(observed);
}

void MaxStatAccumulator::init_observed(std::span<const std::optional<double>> observed)
{
  if (observed.empty()) throw_error(errc::invalid_argument, "observed field is empty");
  n_vertices_ = observed.size();
  double sup = -std::numeric_limits<double>::infinity();
  double inf = std::numeric_limits<double>::infinity();
  bool any = false;
  for (const auto& s : observed) {
    if (!s.has_value() || !std::isfinite(*s)) continue;
    any = true;
    sup = std::max(sup, *s);
    inf = std::min(inf, *s);
  }
  if (!any)
    throw_error(errc::degenerate_statistic, "observed field is degenerate at every vertex");
  observed_sup_ = sup;
  observed_inf_ = inf;
}

void MaxStatAccumulator::update(std::span<const std::optional<double>> field)
{
  if (field.size() != n_vertices_)
    throw_error(errc::length_mismatch, "field length differs from construction");
  double sup = -std::numeric_limits<double>::infinity();
  double inf = std::numeric_limits<double>::infinity();
  bool any = false;
  for (const auto& s : field) {
    if (!s.has_value() || !std::isfinite(*s)) continue;
    any = true;
    if (*s > sup) sup = *s;
    if (*s < inf) inf = *s;
  }
  if (!any) {
    ++degenerate_;
    return;
  }
  update_reduced(sup, inf);
}

void MaxStatAccumulator::update_reduced(double sup, double inf)
{
  ++k_;
  if (sup >= observed_sup_) ++exceed_sup_;
  if (inf <= observed_inf_) ++exceed_inf_;
  if (retain_) {
    sup_samples_.push_back(sup);
    inf_samples_.push_back(inf);
  }
}

double MaxStatAccumulator::corrected_p_sup() const
{
  if (k_ == 0) throw_error(errc::insufficient_samples, "corrected p requested before any walk");
  return static_cast<double>(exceed_sup_) / static_cast<double>(k_);
}

double MaxStatAccumulator::corrected_p_inf() const
{
  if (k_ == 0) throw_error(errc::insufficient_samples, "corrected p requested before any walk");
  return static_cast<double>(exceed_inf_) / static_cast<double>(k_);
}

double MaxStatAccumulator::corrected_pvalue_for(double stat, Side side) const
{
  if (!retain_)
    throw_error(errc::invalid_argument, "sample retention disabled; corrected p-values per vertex unavailable");
  if (k_ == 0) throw_error(errc::insufficient_samples, "corrected p requested before any walk");
  const auto& samples = side == Side::greater ? sup_samples_ : inf_samples_;
  std::uint64_t count = 0;
  for (double s : samples)
    if (exceeds(s, stat, side)) ++count;
  return static_cast<double>(count) / static_cast<double>(k_);
}

std::pair<double, double> MaxStatAccumulator::threshold_at_alpha(double alpha) const
{
  if (!retain_) throw_error(errc::invalid_argument, "sample retention disabled; thresholds unavailable");
  if (!(alpha > 0.0 && alpha <= 1.0)) throw_error(errc::invalid_argument, "alpha must be in (0, 1]");
  if (static_cast<double>(k_) < 1.0 / alpha)
    throw_error(errc::insufficient_samples, "need at least 1/alpha retained walks for thresholds");

  // Order-statistic rule: h_upper is the ceil(k*(1-alpha))-th smallest sup,
  // clamped to [1, k]; h_lower mirrors it from below on the infs.
  const auto kd = static_cast<double>(k_);
  auto rank = static_cast<std::uint64_t>(std::ceil(kd * (1.0 - alpha)));
  rank = std::clamp<std::uint64_t>(rank, 1, k_);

  std::vector<double> sups(sup_samples_);
  std::nth_element(sups.begin(), sups.begin() + static_cast<std::ptrdiff_t>(rank - 1), sups.end());
  const double h_upper = sups[rank - 1];

  std::vector<double> infs(inf_samples_);
  const std::uint64_t lo_rank = k_ + 1 - rank;
  std::nth_element(infs.begin(), infs.begin() + static_cast<std::ptrdiff_t>(lo_rank - 1),
                   infs.end());
  const double h_lower = infs[lo_rank - 1];
  return {h_upper, h_lower};
}

void MaxStatAccumulator::merge(const MaxStatAccumulator& other)
{
  if (n_vertices_ != other.n_vertices_ || observed_sup_ != other.observed_sup_ ||
      observed_inf_ != other.observed_inf_ || retain_ != other.retain_)
    throw_error(errc::invalid_argument, "cannot merge max-stat accumulators with different targets");
  k_ += other.k_;
  exceed_sup_ += other.exceed_sup_;
  exceed_inf_ += other.exceed_inf_;
  degenerate_ += other.degenerate_;
  if (retain_) {
    sup_samples_.insert(sup_samples_.end(), other.sup_samples_.begin(), other.sup_samples_.end());
    inf_samples_.insert(inf_samples_.end(), other.inf_samples_.begin(), other.inf_samples_.end());
  }
}

EnumerationResult exact_enumeration_pvalue(std::span<const double> x, std::span<const double> y,
                                           TestStatistic statistic, Side side,
                                           EnumerationOptions options)
{
  const std::size_t m = x.size();
  const std::size_t n = y.size();
  if (m < 1 || n < 1) throw_error(errc::invalid_argument, "both groups must be nonempty");

  // C(m+n, m) in exact integer arithmetic: every prefix of the product is
  // itself a binomial coefficient, so each division is exact. Bail out as
  // soon as the limit (or uint64) is crossed.
  const std::size_t l = m + n;
  const std::size_t r = std::min(m, n);
  std::uint64_t binom = 1;
  for (std::size_t k = 1; k <= r; ++k) {
    const auto num = static_cast<std::uint64_t>(l - r + k);
    if (binom > std::numeric_limits<std::uint64_t>::max() / num || binom * num / k > options.limit)
      throw_error(errc::limit_exceeded,
                  "assignment count exceeds the enumeration limit; use random walks instead");
    binom = binom * num / k;
  }
  const std::uint64_t n_assignments = binom;

  std::vector<double> pooled(x.begin(), x.end());
  pooled.insert(pooled.end(), y.begin(), y.end());

  const auto observed = eval_statistic(statistic, x, y);
  if (!observed.has_value())
    throw_error(errc::degenerate_statistic, "observed statistic is degenerate");

  // Lexicographic combinations: comb holds the pooled positions assigned to x.
  std::vector<std::size_t> comb(m);
  for (std::size_t k = 0; k < m; ++k) comb[k] = k;
  std::vector<double> gx(m), gy(n);

  EnumerationResult result;
  result.n_assignments = n_assignments;
  std::vector<bool> in_x(l);
  while (true) {
    std::fill(in_x.begin(), in_x.end(), false);
    for (std::size_t pos : comb) in_x[pos] = true;
    std::size_t ix = 0, iy = 0;
    for (std::size_t pos = 0; pos < l; ++pos) (in_x[pos] ? gx[ix++] : gy[iy++]) = pooled[pos];

    const auto stat = eval_statistic(statistic, gx, gy);
    if (!stat.has_value()) {
      ++result.n_degenerate;
    } else if (options.strict ? exceeds_strict(*stat, *observed, side)
                              : exceeds(*stat, *observed, side)) {
      ++result.n_exceed;
    }

    // next combination
    std::size_t k = m;
    while (k > 0 && comb[k - 1] == l - m + k - 1) --k;
    if (k == 0) break;
    ++comb[k - 1];
    for (std::size_t j = k; j < m; ++j) comb[j] = comb[j - 1] + 1;
  }

  result.p = static_cast<double>(result.n_exceed) / static_cast<double>(result.n_assignments);
  return result;
}

NaiveMcResult naive_mc_pvalue(std::span<const double> x, std::span<const double> y,
                              TestStatistic statistic, Side side, std::uint64_t n_perms,
                              std::uint64_t seed)
{
  if (n_perms < 1) throw_error(errc::invalid_argument, "n_perms must be >= 1");
  const std::size_t m = x.size();
  const auto observed = eval_statistic(statistic, x, y);
  if (!observed.has_value())
    throw_error(errc::degenerate_statistic, "observed statistic is degenerate");

  std::vector<double> pooled(x.begin(), x.end());
  pooled.insert(pooled.end(), y.begin(), y.end());
  const std::size_t l = pooled.size();

  RandomStream rng(seed);
  NaiveMcResult result;
  result.n_perms = n_perms;
  std::uint64_t exceed = 0;
  for (std::uint64_t it = 0; it < n_perms; ++it) {
    // Uniform permutation of the pooled values; the first m become group x.
    for (std::size_t k = l - 1; k > 0; --k) {
      const auto r = static_cast<std::size_t>(rng.uniform_index(k + 1));
      std::swap(pooled[k], pooled[r]);
    }
    const auto stat = eval_statistic(statistic, std::span<const double>(pooled.data(), m),
                                     std::span<const double>(pooled.data() + m, l - m));
    if (!stat.has_value())
      ++result.n_degenerate;
    else if (exceeds(*stat, *observed, side))
      ++exceed;
  }
  const std::uint64_t counted = n_perms - result.n_degenerate;
  if (counted == 0) throw_error(errc::degenerate_statistic, "every permuted statistic was degenerate");
  result.p = static_cast<double>(exceed) / static_cast<double>(counted);
  return result;
}

TwinAverageResult average_twin_correlation(PairedState state, const WalkPlan& plan)
{
  plan.validate();
  TwinAverageResult result;
  if (!state.correlation().has_value())
    throw_error(errc::degenerate_statistic, "twin correlation degenerate on the original pairing");

  double sum = 0.0;
  std::uint64_t counted = 0;
  double last_checkpoint_mean = std::numeric_limits<double>::quiet_NaN();
  run_walks(state, plan, [&](std::uint64_t k, const std::optional<double>& rho) {
    if (rho.has_value()) {
      sum += *rho;
      ++counted;
    } else {
      ++result.degenerate_skipped;
    }
    if (k % plan.report_every == 0 && counted > 0) {
      const double mean = sum / static_cast<double>(counted);
      if (!result.converged_at.has_value() && !std::isnan(last_checkpoint_mean) &&
          std::abs(mean - last_checkpoint_mean) < 5e-4)
        result.converged_at = k;
      last_checkpoint_mean = mean;
    }
  });
  if (counted == 0)
    throw_error(errc::degenerate_statistic, "every walk produced a degenerate correlation");
  result.mean = sum / static_cast<double>(counted);
  result.walks_used = plan.n_walks;
  return result;
}

std::vector<double> heritability_index(std::span<const double> mz, std::span<const double> dz)
{
  if (mz.size() != dz.size())
    throw_error(errc::length_mismatch, "MZ and DZ correlation maps differ in length");
  std::vector<double> hi(mz.size());
  for (std::size_t v = 0; v < mz.size(); ++v) hi[v] = mz[v] - dz[v];
  return hi;
}

}  // namespace permwalk
