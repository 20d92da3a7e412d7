#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "permwalk/inference.hpp"

namespace permwalk {

/// Configuration for walk-based field inference.
struct FieldConfig {
  std::uint64_t n_walks = 500'000;
  std::uint64_t seed = 0;
  std::uint64_t burnin = 0;
  Side side = Side::greater;
  bool maxstat = true;
  double alpha = 0.05;
  /// Independent chains run in parallel and merge; results are bit-identical
  /// for a fixed thread count.
  unsigned threads = 1;
};

/// Per-vertex inference output. Vertices whose observed statistic is
/// degenerate carry NaN statistics/p-values and statistic_ok = 0.
struct FieldResult {
  std::size_t m = 0;
  std::size_t n = 0;
  std::vector<double> statistic;
  std::vector<std::uint8_t> statistic_ok;
  std::vector<double> pvalue;
  std::vector<std::uint64_t> exceed_count;
  std::vector<std::uint64_t> walk_count;
  std::vector<std::uint64_t> degenerate_count;
  /// Filled when maxstat correction is on.
  std::vector<double> corrected_pvalue;
  bool has_thresholds = false;
  double threshold_upper = 0.0;
  double threshold_lower = 0.0;
  double corrected_p_sup = 0.0;
  double corrected_p_inf = 0.0;
  std::uint64_t maxstat_walks = 0;
  std::uint64_t maxstat_degenerate = 0;
  std::uint64_t n_walks = 0;
  std::uint64_t stat_evaluations = 0;
};

/// Walk-based two-sample t inference over a V x S data matrix (row-major,
/// one row per vertex). group[s] assigns subject column s to group x (0) or
/// y (1). One subject-level walk sequence drives all vertices; pointwise
/// p-values use the accumulator convention for `side`, and when
/// config.maxstat is set the sup/inf null samples yield per-vertex corrected
/// p-values and alpha thresholds.
FieldResult run_field_ttest(std::span<const double> matrix, std::size_t n_vertices,
                            std::size_t n_subjects, std::span<const std::uint8_t> group,
                            const FieldConfig& config);

struct TwinFieldConfig {
  std::uint64_t n_walks = 10'000;
  std::uint64_t seed = 0;
  std::uint64_t report_every = 100;
};

struct TwinFieldResult {
  std::vector<double> mean_correlation;
  std::vector<std::uint8_t> correlation_ok;
  std::vector<std::uint64_t> degenerate_count;
  std::uint64_t n_walks = 0;
  /// True when every usable vertex's running mean moved by less than 5e-4
  /// between the final two checkpoints.
  bool converged = false;
  std::uint64_t stat_evaluations = 0;
};

/// Averaged twin correlation per vertex over one shared pair-swap walk
/// sequence. pair_a/pair_b hold subject column indices; twin k is the column
/// pair (pair_a[k], pair_b[k]).
TwinFieldResult run_twin_field(std::span<const double> matrix, std::size_t n_vertices,
                               std::size_t n_subjects, std::span<const std::uint32_t> pair_a,
                               std::span<const std::uint32_t> pair_b,
                               const TwinFieldConfig& config);

}  // namespace permwalk
