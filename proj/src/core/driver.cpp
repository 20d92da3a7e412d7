#include "permwalk/driver.hpp"

#include <cmath>
#include <exception>
#include <limits>
#include <optional>
#include <thread>

#include "permwalk/error.hpp"
#include "permwalk/walk.hpp"

namespace permwalk {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

/// Split subject columns of a V x S row-major matrix into the x|y layout the
/// field walker expects, preserving within-group column order.
std::vector<double> reorder_by_group(std::span<const double> matrix, std::size_t n_vertices,
                                     std::size_t n_subjects, std::span<const std::uint8_t> group,
                                     std::size_t& m_out, std::size_t& n_out)
{
  if (group.size() != n_subjects)
    throw_error(errc::length_mismatch, "group labels must cover every subject column");
  if (n_vertices < 1) throw_error(errc::invalid_argument, "matrix has no vertices");
  if (matrix.size() != n_vertices * n_subjects)
    throw_error(errc::length_mismatch, "matrix size does not match vertices x subjects");

  std::vector<std::size_t> order;
  order.reserve(n_subjects);
  for (std::size_t s = 0; s < n_subjects; ++s) {
    if (group[s] > 1) throw_error(errc::invalid_argument, "group labels must be 0 or 1");
    if (group[s] == 0) order.push_back(s);
  }
  m_out = order.size();
  for (std::size_t s = 0; s < n_subjects; ++s)
    if (group[s] == 1) order.push_back(s);
  n_out = n_subjects - m_out;
  if (m_out < 2 || n_out < 2)
    throw_error(errc::invalid_argument, "each group needs at least two subjects");

  std::vector<double> out(matrix.size());
  for (std::size_t v = 0; v < n_vertices; ++v) {
    const double* row = matrix.data() + v * n_subjects;
    double* dst = out.data() + v * n_subjects;
    for (std::size_t s = 0; s < n_subjects; ++s) dst[s] = row[order[s]];
  }
  return out;
}

struct ChainOutput {
  std::vector<PValueAccumulator> pointwise;  // one per usable vertex
  std::optional<MaxStatAccumulator> maxstat;
};

/// Observed statistics for every vertex plus the index map from usable
/// vertices (finite observed statistic) to field position.
struct ObservedField {
  std::vector<std::optional<double>> stats;
  std::vector<std::size_t> usable;
};

ObservedField observe_field(const TwoSampleField& field)
{
  ObservedField obs;
  obs.stats.resize(field.n_vertices());
  for (std::size_t v = 0; v < field.n_vertices(); ++v) {
    obs.stats[v] = field.vertex(v).t_statistic();
    if (obs.stats[v].has_value()) obs.usable.push_back(v);
  }
  if (obs.usable.empty())
    throw_error(errc::degenerate_statistic, "observed statistic is degenerate at every vertex");
  return obs;
}

ChainOutput run_chain(std::span<const double> reordered, std::size_t n_vertices, std::size_t m,
                      std::size_t n, const ObservedField& obs, const FieldConfig& config,
                      std::uint64_t chain_walks, std::uint64_t chain_seed)
{
  ChainOutput out;
  out.pointwise.reserve(obs.usable.size());
  for (std::size_t v : obs.usable) out.pointwise.emplace_back(*obs.stats[v], config.side);
  if (config.maxstat) out.maxstat.emplace(std::span<const std::optional<double>>(obs.stats), true);

  TwoSampleField field(reordered, n_vertices, m, n);
  WalkPlan plan;
  plan.n_walks = chain_walks;
  plan.seed = chain_seed;
  plan.burnin = config.burnin;
  run_walks_field(field, plan, [&](std::uint64_t, std::span<const std::optional<double>> stats) {
    for (std::size_t u = 0; u < obs.usable.size(); ++u)
      out.pointwise[u].update(stats[obs.usable[u]]);
    if (out.maxstat.has_value()) out.maxstat->update(stats);
  });
  return out;
}

}  // namespace

FieldResult run_field_ttest(std::span<const double> matrix, std::size_t n_vertices,
                            std::size_t n_subjects, std::span<const std::uint8_t> group,
                            const FieldConfig& config)
{
  if (config.n_walks < 1) throw_error(errc::invalid_argument, "n_walks must be >= 1");
  if (config.threads < 1) throw_error(errc::invalid_argument, "threads must be >= 1");
  if (!(config.alpha > 0.0 && config.alpha <= 1.0))
    throw_error(errc::invalid_argument, "alpha must be in (0, 1]");

  std::size_t m = 0, n = 0;
  const std::vector<double> reordered =
      reorder_by_group(matrix, n_vertices, n_subjects, group, m, n);

  // Observed field from the original labeling (chain-independent).
  const TwoSampleField initial(reordered, n_vertices, m, n);
  const ObservedField obs = observe_field(initial);

  // Chains split the walk budget; chain 0 reuses the plan seed so a
  // single-thread run matches the plain sequential walk exactly.
  const auto n_chains =
      static_cast<unsigned>(std::min<std::uint64_t>(config.threads, config.n_walks));
  std::vector<std::uint64_t> chain_walks(n_chains, config.n_walks / n_chains);
  for (std::uint64_t c = 0; c < config.n_walks % n_chains; ++c) ++chain_walks[c];
  std::vector<std::uint64_t> chain_seeds(n_chains);
  for (unsigned c = 0; c < n_chains; ++c)
    chain_seeds[c] = c == 0 ? config.seed : RandomStream::chain_seed(config.seed, c);

  std::vector<ChainOutput> outputs(n_chains);
  std::vector<std::exception_ptr> errors(n_chains);
  {
    std::vector<std::thread> workers;
    workers.reserve(n_chains > 0 ? n_chains - 1 : 0);
    auto work = [&](unsigned c) {
      try {
        outputs[c] = run_chain(reordered, n_vertices, m, n, obs, config, chain_walks[c],
                               chain_seeds[c]);
      } catch (...) {
        errors[c] = std::current_exception();
      }
    };
    for (unsigned c = 1; c < n_chains; ++c) workers.emplace_back(work, c);
    work(0);
    for (auto& w : workers) w.join();
  }
  for (const auto& err : errors)
    if (err) std::rethrow_exception(err);

  // Merge in chain order (exact: integer counts and concatenated samples).
  ChainOutput merged = std::move(outputs[0]);
  for (unsigned c = 1; c < n_chains; ++c) {
    for (std::size_t u = 0; u < merged.pointwise.size(); ++u)
      merged.pointwise[u].merge(outputs[c].pointwise[u]);
    if (merged.maxstat.has_value()) merged.maxstat->merge(*outputs[c].maxstat);
  }

  FieldResult result;
  result.m = m;
  result.n = n;
  result.n_walks = config.n_walks;
  result.stat_evaluations = (config.n_walks + 1) * static_cast<std::uint64_t>(n_vertices);
  result.statistic.assign(n_vertices, kNaN);
  result.statistic_ok.assign(n_vertices, 0);
  result.pvalue.assign(n_vertices, kNaN);
  result.exceed_count.assign(n_vertices, 0);
  result.walk_count.assign(n_vertices, 0);
  result.degenerate_count.assign(n_vertices, 0);
  if (config.maxstat) result.corrected_pvalue.assign(n_vertices, kNaN);

  for (std::size_t u = 0; u < obs.usable.size(); ++u) {
    const std::size_t v = obs.usable[u];
    const PValueAccumulator& acc = merged.pointwise[u];
    result.statistic[v] = acc.observed();
    result.statistic_ok[v] = 1;
    result.exceed_count[v] = acc.exceed_count();
    result.walk_count[v] = acc.count();
    result.degenerate_count[v] = acc.degenerate_count();
    if (acc.count() > 0) result.pvalue[v] = acc.p();
  }

  if (merged.maxstat.has_value()) {
    const MaxStatAccumulator& ms = *merged.maxstat;
    result.maxstat_walks = ms.count();
    result.maxstat_degenerate = ms.degenerate_count();
    if (ms.count() > 0) {
      result.corrected_p_sup = ms.corrected_p_sup();
      result.corrected_p_inf = ms.corrected_p_inf();
      for (std::size_t v : obs.usable)
        result.corrected_pvalue[v] = ms.corrected_pvalue_for(result.statistic[v], config.side);
      if (static_cast<double>(ms.count()) >= 1.0 / config.alpha) {
        const auto [upper, lower] = ms.threshold_at_alpha(config.alpha);
        result.has_thresholds = true;
        result.threshold_upper = upper;
        result.threshold_lower = lower;
      }
    }
  }
  return result;
}

TwinFieldResult run_twin_field(std::span<const double> matrix, std::size_t n_vertices,
                               std::size_t n_subjects, std::span<const std::uint32_t> pair_a,
                               std::span<const std::uint32_t> pair_b,
                               const TwinFieldConfig& config)
{
  if (pair_a.size() != pair_b.size())
    throw_error(errc::length_mismatch, "pair columns differ in length");
  const std::size_t n_pairs = pair_a.size();
  if (n_pairs < 2) throw_error(errc::invalid_argument, "need at least two twin pairs");
  if (n_vertices < 1) throw_error(errc::invalid_argument, "matrix has no vertices");
  if (matrix.size() != n_vertices * n_subjects)
    throw_error(errc::length_mismatch, "matrix size does not match vertices x subjects");
  if (config.n_walks < 1) throw_error(errc::invalid_argument, "n_walks must be >= 1");
  if (config.report_every < 1) throw_error(errc::invalid_argument, "report_every must be >= 1");
  for (std::size_t k = 0; k < n_pairs; ++k) {
    if (pair_a[k] >= n_subjects || pair_b[k] >= n_subjects)
      throw_error(errc::index_out_of_range, "pair index beyond the subject columns");
    if (pair_a[k] == pair_b[k])
      throw_error(errc::invalid_argument, "a twin pair cannot repeat one subject");
  }

  // One paired state per vertex, all flipped by the same pair index stream.
  std::vector<PairedState> states;
  states.reserve(n_vertices);
  std::vector<double> a(n_pairs), b(n_pairs);
  for (std::size_t v = 0; v < n_vertices; ++v) {
    const double* row = matrix.data() + v * n_subjects;
    for (std::size_t k = 0; k < n_pairs; ++k) {
      a[k] = row[pair_a[k]];
      b[k] = row[pair_b[k]];
    }
    states.emplace_back(a, b);
  }

  TwinFieldResult result;
  result.n_walks = config.n_walks;
  result.stat_evaluations = config.n_walks * static_cast<std::uint64_t>(n_vertices);
  result.degenerate_count.assign(n_vertices, 0);
  std::vector<double> sums(n_vertices, 0.0);
  std::vector<std::uint64_t> counts(n_vertices, 0);
  std::vector<double> last_mean(n_vertices, kNaN);
  bool final_converged = false;

  RandomStream rng(config.seed);
  for (std::uint64_t k = 1; k <= config.n_walks; ++k) {
    const auto flip = static_cast<std::size_t>(rng.uniform_index(n_pairs));
    for (std::size_t v = 0; v < n_vertices; ++v) {
      states[v].apply_pair_swap(flip);
      const auto rho = states[v].correlation();
      if (rho.has_value()) {
        sums[v] += *rho;
        ++counts[v];
      } else {
        ++result.degenerate_count[v];
      }
    }
    if (k % config.report_every == 0 || k == config.n_walks) {
      bool all_settled = true;
      for (std::size_t v = 0; v < n_vertices; ++v) {
        if (counts[v] == 0) continue;
        const double mean = sums[v] / static_cast<double>(counts[v]);
        if (std::isnan(last_mean[v]) || std::abs(mean - last_mean[v]) >= 5e-4)
          all_settled = false;
        last_mean[v] = mean;
      }
      final_converged = all_settled;
    }
  }
  result.converged = final_converged;

  result.mean_correlation.assign(n_vertices, kNaN);
  result.correlation_ok.assign(n_vertices, 0);
  for (std::size_t v = 0; v < n_vertices; ++v) {
    if (counts[v] == 0) continue;
    result.mean_correlation[v] = sums[v] / static_cast<double>(counts[v]);
    result.correlation_ok[v] = 1;
  }
  return result;
}

}  // namespace permwalk
