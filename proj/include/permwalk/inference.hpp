#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "permwalk/paired.hpp"
#include "permwalk/walk.hpp"

namespace permwalk {

/// Direction of the one-sided alternative. `greater` counts permuted
/// statistics >= observed as exceedances, `less` counts <= observed.
enum class Side { greater, less };

/// Statistic used by the enumeration and naive Monte Carlo baselines.
enum class TestStatistic { t_stat, mean_diff };

/// Iterative one-sided p-value over walks: p = exceed_count / k.
///
/// Equivalent to the recurrence (k+1)*p_{k+1} = k*p_k + I(exceed), kept as
/// integer counts so merging chains is exact. Non-finite or degenerate
/// permuted statistics are tallied separately and excluded from k.
class PValueAccumulator {
public:
  PValueAccumulator(double observed, Side side);

  void update(double permuted);
  void update(const std::optional<double>& permuted);

  /// Raw Monte Carlo fraction; requires at least one counted walk.
  double p() const;
  /// Never-zero variant (exceed_count+1)/(k+1).
  double p_add_one() const;

  std::uint64_t count() const { return k_; }
  std::uint64_t exceed_count() const { return exceed_; }
  std::uint64_t degenerate_count() const { return degenerate_; }
  double observed() const { return observed_; }
  Side side() const { return side_; }

  /// Counts sum; both accumulators must share observed value and side.
  void merge(const PValueAccumulator& other);

private:
  double observed_;
  Side side_;
  std::uint64_t k_ = 0;
  std::uint64_t exceed_ = 0;
  std::uint64_t degenerate_ = 0;
};

/// Max-statistic accumulator for multiple comparisons: tracks exceedances of
/// the per-walk field supremum against the observed supremum (and infimum
/// against the observed infimum). Optionally retains the null sup/inf
/// samples for threshold and per-vertex corrected p-value queries.
class MaxStatAccumulator {
public:
  /// `observed` is the statistic field on the original labeling; degenerate
  /// vertices are skipped when forming the observed sup/inf.
  MaxStatAccumulator(std::span<const double> observed, bool retain_samples);
  MaxStatAccumulator(std::span<const std::optional<double>> observed, bool retain_samples);

  std::size_t n_vertices() const { return n_vertices_; }

  /// Fold one walk's statistic field in; degenerate vertices are ignored in
  /// the sup/inf, and a walk whose field is entirely degenerate is tallied
  /// and excluded from k.
  void update(std::span<const std::optional<double>> field);
  void update_reduced(double sup, double inf);

  double observed_sup() const { return observed_sup_; }
  double observed_inf() const { return observed_inf_; }

  /// Corrected p-values for the observed sup (side greater) and inf (side less).
  double corrected_p_sup() const;
  double corrected_p_inf() const;

  /// Corrected p-value for an arbitrary vertex statistic: the fraction of
  /// retained null sups >= stat (greater) or infs <= stat (less).
  double corrected_pvalue_for(double stat, Side side) const;

  /// Empirical alpha-thresholds (h_upper, h_lower) from the retained
  /// samples: h_upper is the ceil(k*(1-alpha))-th order statistic of the
  /// sups (clamped to [1, k]); h_lower mirrors it on the infs from below.
  /// Requires retention and k >= 1/alpha.
  std::pair<double, double> threshold_at_alpha(double alpha) const;

  std::uint64_t count() const { return k_; }
  std::uint64_t exceed_sup_count() const { return exceed_sup_; }
  std::uint64_t exceed_inf_count() const { return exceed_inf_; }
  std::uint64_t degenerate_count() const { return degenerate_; }
  bool retains_samples() const { return retain_; }
  std::span<const double> sup_samples() const { return sup_samples_; }
  std::span<const double> inf_samples() const { return inf_samples_; }

  /// Counts sum and retained samples concatenate; requires matching observed
  /// sup/inf and retention mode.
  void merge(const MaxStatAccumulator& other);

private:
  void init_observed(std::span<const std::optional<double>> observed);

  std::size_t n_vertices_ = 0;
  double observed_sup_ = 0.0;
  double observed_inf_ = 0.0;
  bool retain_ = false;
  std::uint64_t k_ = 0;
  std::uint64_t exceed_sup_ = 0;
  std::uint64_t exceed_inf_ = 0;
  std::uint64_t degenerate_ = 0;
  std::vector<double> sup_samples_;
  std::vector<double> inf_samples_;
};

struct EnumerationOptions {
  /// Eq-style strict comparison (permuted > observed). The >= variant
  /// matches the Monte Carlo accumulator convention.
  bool strict = true;
  /// Maximum number of assignments to enumerate.
  std::uint64_t limit = 1'000'000;
};

struct EnumerationResult {
  double p = 0.0;
  std::uint64_t n_assignments = 0;
  std::uint64_t n_exceed = 0;
  std::uint64_t n_degenerate = 0;
};

/// Exact p-value by enumerating all C(m+n, m) group assignments of the
/// pooled values. Errors with errc::limit_exceeded when the assignment count
/// exceeds options.limit.
EnumerationResult exact_enumeration_pvalue(std::span<const double> x, std::span<const double> y,
                                           TestStatistic statistic, Side side,
                                           EnumerationOptions options = {});

struct NaiveMcResult {
  double p = 0.0;
  std::uint64_t n_perms = 0;
  std::uint64_t n_degenerate = 0;
};

/// Standard permutation-test baseline: each iteration draws a uniform group
/// assignment (full Fisher-Yates shuffle of the pooled values) and
/// recomputes the statistic from scratch in O(m+n). Uses the >= / <=
/// exceedance convention of the accumulators.
NaiveMcResult naive_mc_pvalue(std::span<const double> x, std::span<const double> y,
                              TestStatistic statistic, Side side, std::uint64_t n_perms,
                              std::uint64_t seed);

struct TwinAverageResult {
  double mean = 0.0;
  std::uint64_t walks_used = 0;
  /// First checkpoint walk at which successive checkpoint means differed by
  /// less than 5e-4; unset when that never happened.
  std::optional<std::uint64_t> converged_at;
  std::uint64_t degenerate_skipped = 0;
};

/// Running mean of the twin correlation over random pair-swap walks; the
/// estimate of the average over all 2^n pair-flip configurations.
TwinAverageResult average_twin_correlation(PairedState state, const WalkPlan& plan);

/// HI per vertex: mz[v] - dz[v].
std::vector<double> heritability_index(std::span<const double> mz, std::span<const double> dz);

}  // namespace permwalk
