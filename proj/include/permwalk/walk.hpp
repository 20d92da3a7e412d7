#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "permwalk/error.hpp"
#include "permwalk/paired.hpp"
#include "permwalk/random_stream.hpp"
#include "permwalk/two_sample.hpp"

namespace permwalk {

/// Plan for a sequence of random transpositions.
///
/// `burnin` walks are applied before the `n_walks` observed ones; the chain
/// starts at the observed labeling and burnin defaults to 0, so every walk
/// contributes. `report_every` sets the checkpoint cadence used by
/// convergence consumers.
struct WalkPlan {
  std::uint64_t n_walks = 500'000;
  std::uint64_t seed = 0;
  std::uint64_t report_every = 100;
  std::uint64_t burnin = 0;

  void validate() const
  {
    if (n_walks < 1) throw_error(errc::invalid_argument, "n_walks must be >= 1");
    if (report_every < 1) throw_error(errc::invalid_argument, "report_every must be >= 1");
  }
};

/// Drive `plan.n_walks` random between-group transpositions on a two-sample
/// state. The observer is invoked after every observed walk as
/// observer(walk_index, statistic) with walk_index starting at 1 and
/// statistic an optional<double> (nullopt when degenerate). Deterministic
/// given the plan seed.
template <typename Observer>
void run_walks(TwoSampleState& state, const WalkPlan& plan, Observer&& observer)
{
  plan.validate();
  RandomStream rng(plan.seed);
  const std::size_t m = state.m();
  const std::size_t n = state.n();
  for (std::uint64_t k = 0; k < plan.burnin; ++k)
    state.apply_swap(sample_between_group_transposition(rng, m, n));
  for (std::uint64_t k = 1; k <= plan.n_walks; ++k) {
    state.apply_swap(sample_between_group_transposition(rng, m, n));
    observer(k, state.t_statistic());
  }
}

/// Paired variant: each walk flips one uniformly chosen twin pair and the
/// observer receives the updated correlation.
template <typename Observer>
void run_walks(PairedState& state, const WalkPlan& plan, Observer&& observer)
{
  plan.validate();
  RandomStream rng(plan.seed);
  const std::size_t n = state.n();
  for (std::uint64_t k = 0; k < plan.burnin; ++k) state.apply_pair_swap(rng.uniform_index(n));
  for (std::uint64_t k = 1; k <= plan.n_walks; ++k) {
    state.apply_pair_swap(rng.uniform_index(n));
    observer(k, state.correlation());
  }
}

/// V vertexwise two-sample states driven by one subject-level walk.
/// All vertices share the same (m, n); a single transposition per walk is
/// applied to every vertex state.
class TwoSampleField {
public:
  /// One row of length m+n per vertex: the first m entries are group x.
  TwoSampleField(std::span<const double> matrix, std::size_t n_vertices, std::size_t m,
                 std::size_t n);

  std::size_t n_vertices() const { return states_.size(); }
  std::size_t m() const { return m_; }
  std::size_t n() const { return n_; }

  const TwoSampleState& vertex(std::size_t v) const { return states_[v]; }

  void apply_swap(WalkPair t);

  /// Fraction of x slots currently holding a y-origin element.
  double mixing_proportion() const;

private:
  std::vector<TwoSampleState> states_;
  std::vector<std::uint8_t> origin_x_;  // 1 = slot holds a y-origin element
  std::vector<std::uint8_t> origin_y_;  // 1 = slot holds an x-origin element
  std::size_t m_;
  std::size_t n_;
};

/// Run a shared subject-level walk over all vertices. Per walk the observer
/// receives observer(walk_index, stats) where stats is a span of V
/// optional<double> vertex statistics; O(V) work per walk, O(1) per vertex.
template <typename Observer>
void run_walks_field(TwoSampleField& field, const WalkPlan& plan, Observer&& observer)
{
  plan.validate();
  if (field.n_vertices() < 1) throw_error(errc::invalid_argument, "field has no vertices");
  RandomStream rng(plan.seed);
  const std::size_t m = field.m();
  const std::size_t n = field.n();
  std::vector<std::optional<double>> stats(field.n_vertices());
  for (std::uint64_t k = 0; k < plan.burnin; ++k)
    field.apply_swap(sample_between_group_transposition(rng, m, n));
  for (std::uint64_t k = 1; k <= plan.n_walks; ++k) {
    field.apply_swap(sample_between_group_transposition(rng, m, n));
    for (std::size_t v = 0; v < field.n_vertices(); ++v)
      stats[v] = field.vertex(v).t_statistic();
    observer(k, std::span<const std::optional<double>>(stats));
  }
}

/// Mean mixing proportion per walk index, averaged over repetitions.
/// proportion[k] is the fraction after k walks; proportion[0] == 0.
struct MixingEstimate {
  std::vector<double> proportion;
  std::uint32_t n_reps = 0;
};

/// Start every repetition from the original labels, apply random
/// between-group transpositions, and record after each walk the fraction of
/// x slots holding y-origin elements.
MixingEstimate estimate_mixing(std::size_t m, std::size_t n, std::uint64_t n_walks,
                               std::uint32_t n_reps, std::uint64_t seed);

}  // namespace permwalk
