#pragma once

#include <cstdint>
#include <vector>

#include "permwalk/inference.hpp"

namespace permwalk {

/// Timed comparison of the incremental walk update against naive
/// recomputation (full shuffle + from-scratch statistic).
struct ThroughputResult {
  std::size_t m = 0;
  std::size_t n = 0;
  std::uint64_t walk_evals = 0;
  std::uint64_t naive_evals = 0;
  double walk_ns_per_eval = 0.0;
  double naive_ns_per_eval = 0.0;
  /// naive_ns_per_eval / walk_ns_per_eval: statistic evaluations per second
  /// gained by the incremental update.
  double ratio = 0.0;
};

/// Time `n_evals` incremental walk updates (swap + t) and a proportionally
/// smaller number of naive evaluations (Fisher-Yates shuffle of the pooled
/// sample + two-pass t) on synthetic Gaussian data.
ThroughputResult measure_throughput(std::size_t m, std::size_t n, std::uint64_t n_evals,
                                    std::uint64_t seed);

/// Equal-budget convergence experiment on one representative dataset: draw
/// x ~ N(0,1) and y ~ shift + N(0,1) once from the seed, take the Student-t
/// p-value of the observed statistic as ground truth, and track the relative
/// error of the walk-based and naive Monte Carlo estimators at matched
/// wall-time budgets (naive evaluations x throughput ratio = walk
/// evaluations). Replicates rerun both estimators on that dataset with
/// independent streams; their mean error forms the reported curves.
struct SimulateConfig {
  std::size_t m = 10;
  std::size_t n = 10;
  std::uint32_t reps = 100;
  /// Naive Monte Carlo budget; the walk budget is naive_perms x ratio.
  std::uint64_t naive_perms = 10'000;
  /// Walk/naive throughput ratio; <= 0 measures it once up front. Passing an
  /// explicit ratio makes the run fully deterministic.
  double throughput_ratio = 0.0;
  std::uint32_t checkpoints = 50;
  std::uint64_t seed = 0;
  Side side = Side::less;
  double shift = 0.1;
  unsigned threads = 1;
};

struct SimulateResult {
  std::size_t m = 0;
  std::size_t n = 0;
  std::uint32_t reps = 0;
  double throughput_ratio = 0.0;
  /// Observed statistic of the representative dataset and its Student-t
  /// ground-truth p-value.
  double t_observed = 0.0;
  double p_true = 0.0;
  /// Per checkpoint: fraction of the total budget spent.
  std::vector<double> budget_fraction;
  std::vector<std::uint64_t> walk_iters;
  std::vector<std::uint64_t> naive_iters;
  /// Mean over replicates of |p_hat - p_true| / p_true.
  std::vector<double> walk_rel_error;
  std::vector<double> naive_rel_error;
};

SimulateResult simulate_convergence(const SimulateConfig& config);

}  // namespace permwalk
