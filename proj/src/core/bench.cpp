#include "permwalk/bench.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <exception>
#include <thread>

#include <boost/math/distributions/students_t.hpp>

#include "permwalk/error.hpp"
#include "permwalk/random_stream.hpp"
#include "permwalk/two_sample.hpp"
#include "permwalk/walk.hpp"

namespace permwalk {

namespace {

using clock_type = std::chrono::steady_clock;

volatile double g_sink = 0.0;  // defeats dead-code elimination in timed loops

std::vector<double> gaussian_sample(RandomStream& rng, std::size_t count, double shift)
{
  std::vector<double> out(count);
  for (double& v : out) v = shift + rng.normal();
  return out;
}

double time_walk_loop(TwoSampleState& state, std::uint64_t evals, std::uint64_t seed)
{
  RandomStream rng(seed);
  const std::size_t m = state.m();
  const std::size_t n = state.n();
  double acc = 0.0;
  const auto start = clock_type::now();
  for (std::uint64_t k = 0; k < evals; ++k) {
    state.apply_swap(sample_between_group_transposition(rng, m, n));
    const auto t = state.t_statistic();
    if (t.has_value()) acc += *t;
  }
  const auto stop = clock_type::now();
  g_sink = acc;
  return std::chrono::duration<double, std::nano>(stop - start).count();
}

double time_naive_loop(std::span<const double> x, std::span<const double> y, std::uint64_t evals,
                       std::uint64_t seed)
{
  std::vector<double> pooled(x.begin(), x.end());
  pooled.insert(pooled.end(), y.begin(), y.end());
  const std::size_t m = x.size();
  const std::size_t l = pooled.size();
  RandomStream rng(seed);
  double acc = 0.0;
  const auto start = clock_type::now();
  for (std::uint64_t it = 0; it < evals; ++it) {
    for (std::size_t k = l - 1; k > 0; --k) {
      const auto r = static_cast<std::size_t>(rng.uniform_index(k + 1));
      std::swap(pooled[k], pooled[r]);
    }
    const auto t = direct_t(std::span<const double>(pooled.data(), m),
                            std::span<const double>(pooled.data() + m, l - m));
    if (t.has_value()) acc += *t;
  }
  const auto stop = clock_type::now();
  g_sink = acc;
  return std::chrono::duration<double, std::nano>(stop - start).count();
}

}  // namespace

ThroughputResult measure_throughput(std::size_t m, std::size_t n, std::uint64_t n_evals,
                                    std::uint64_t seed)
{
  if (n_evals < 100) throw_error(errc::invalid_argument, "n_evals must be >= 100");
  RandomStream data_rng(RandomStream::chain_seed(seed, 0));
  const auto x = gaussian_sample(data_rng, m, 0.0);
  const auto y = gaussian_sample(data_rng, n, 0.0);
  TwoSampleState state(x, y);

  // Warm up both paths (cache, branch predictors, page faults).
  const std::uint64_t warmup = std::min<std::uint64_t>(n_evals / 10 + 1, 100'000);
  time_walk_loop(state, warmup, RandomStream::chain_seed(seed, 1));
  const std::uint64_t naive_evals =
      std::clamp<std::uint64_t>(n_evals / 50, std::min<std::uint64_t>(1000, n_evals), n_evals);
  time_naive_loop(x, y, std::min<std::uint64_t>(naive_evals / 10 + 1, 2000),
                  RandomStream::chain_seed(seed, 2));

  ThroughputResult result;
  result.m = m;
  result.n = n;
  result.walk_evals = n_evals;
  result.naive_evals = naive_evals;
  const double walk_ns = time_walk_loop(state, n_evals, RandomStream::chain_seed(seed, 3));
  const double naive_ns = time_naive_loop(x, y, naive_evals, RandomStream::chain_seed(seed, 4));
  result.walk_ns_per_eval = walk_ns / static_cast<double>(n_evals);
  result.naive_ns_per_eval = naive_ns / static_cast<double>(naive_evals);
  result.ratio = result.naive_ns_per_eval / result.walk_ns_per_eval;
  return result;
}

namespace {

struct RepCurves {
  std::vector<double> walk_err;
  std::vector<double> naive_err;
};

/// One estimator replicate on the shared dataset; seeds are derived from the
/// replicate index, so curves do not depend on the thread partition.
RepCurves simulate_rep(const SimulateConfig& config, std::uint32_t rep,
                       std::span<const double> x, std::span<const double> y, double t_obs,
                       double p_true, std::span<const std::uint64_t> walk_marks,
                       std::span<const std::uint64_t> naive_marks)
{
  const std::size_t n_checkpoints = walk_marks.size();
  RepCurves curves;
  curves.walk_err.resize(n_checkpoints);
  curves.naive_err.resize(n_checkpoints);

  // Walk-based estimator, sampled at the budget marks.
  {
    TwoSampleState state(x, y);
    PValueAccumulator acc(t_obs, config.side);
    RandomStream rng(RandomStream::chain_seed(config.seed, 2ull * rep + 1));
    std::uint64_t done = 0;
    for (std::size_t c = 0; c < n_checkpoints; ++c) {
      for (; done < walk_marks[c]; ++done) {
        state.apply_swap(sample_between_group_transposition(rng, config.m, config.n));
        acc.update(state.t_statistic());
      }
      const double p_hat = acc.count() > 0 ? acc.p() : 0.0;
      curves.walk_err[c] = std::abs(p_hat - p_true) / p_true;
    }
  }

  // Naive estimator: fresh uniform assignment per iteration.
  {
    std::vector<double> pooled(x.begin(), x.end());
    pooled.insert(pooled.end(), y.begin(), y.end());
    const std::size_t l = pooled.size();
    PValueAccumulator acc(t_obs, config.side);
    RandomStream rng(RandomStream::chain_seed(config.seed, 2ull * rep + 2));
    std::uint64_t done = 0;
    for (std::size_t c = 0; c < n_checkpoints; ++c) {
      for (; done < naive_marks[c]; ++done) {
        for (std::size_t k = l - 1; k > 0; --k) {
          const auto r = static_cast<std::size_t>(rng.uniform_index(k + 1));
          std::swap(pooled[k], pooled[r]);
        }
        acc.update(direct_t(std::span<const double>(pooled.data(), config.m),
                            std::span<const double>(pooled.data() + config.m, l - config.m)));
      }
      const double p_hat = acc.count() > 0 ? acc.p() : 0.0;
      curves.naive_err[c] = std::abs(p_hat - p_true) / p_true;
    }
  }
  return curves;
}

}  // namespace

SimulateResult simulate_convergence(const SimulateConfig& config)
{
  if (config.m < 2 || config.n < 2)
    throw_error(errc::invalid_argument, "each group needs at least two samples");
  if (config.reps < 1) throw_error(errc::invalid_argument, "reps must be >= 1");
  if (config.checkpoints < 1) throw_error(errc::invalid_argument, "checkpoints must be >= 1");
  if (config.naive_perms < config.checkpoints)
    throw_error(errc::invalid_argument, "naive_perms must cover at least one per checkpoint");
  if (config.threads < 1) throw_error(errc::invalid_argument, "threads must be >= 1");

  // The representative dataset shared by every replicate, and its Gaussian
  // ground truth: a one-sided Student-t p-value for the observed statistic.
  RandomStream data_rng(RandomStream::chain_seed(config.seed, 0));
  const auto x = gaussian_sample(data_rng, config.m, 0.0);
  const auto y = gaussian_sample(data_rng, config.n, config.shift);
  const auto t_obs = direct_t(x, y);
  if (!t_obs.has_value())
    throw_error(errc::degenerate_statistic, "simulated sample produced a degenerate statistic");
  const boost::math::students_t dist(static_cast<double>(config.m + config.n - 2));
  const double p_true = config.side == Side::less
                            ? boost::math::cdf(dist, *t_obs)
                            : boost::math::cdf(boost::math::complement(dist, *t_obs));

  SimulateResult result;
  result.m = config.m;
  result.n = config.n;
  result.reps = config.reps;
  result.t_observed = *t_obs;
  result.p_true = p_true;
  result.throughput_ratio = config.throughput_ratio;
  if (result.throughput_ratio <= 0.0)
    result.throughput_ratio = measure_throughput(config.m, config.n, 2'000'000, config.seed).ratio;

  // Budget marks: checkpoint c spends fraction c/C of the naive budget, and
  // the walk spends ratio times as many evaluations in the same wall time.
  const std::uint32_t n_checkpoints = config.checkpoints;
  result.budget_fraction.resize(n_checkpoints);
  result.naive_iters.resize(n_checkpoints);
  result.walk_iters.resize(n_checkpoints);
  for (std::uint32_t c = 0; c < n_checkpoints; ++c) {
    const double frac = static_cast<double>(c + 1) / static_cast<double>(n_checkpoints);
    result.budget_fraction[c] = frac;
    result.naive_iters[c] = static_cast<std::uint64_t>(
        std::llround(frac * static_cast<double>(config.naive_perms)));
    result.walk_iters[c] = static_cast<std::uint64_t>(std::llround(
        static_cast<double>(result.naive_iters[c]) * result.throughput_ratio));
  }

  // Replicates are independent; distribute them over threads and fold the
  // curves back in replicate order so the averages are thread-count-invariant.
  std::vector<RepCurves> per_rep(config.reps);
  const unsigned n_workers = std::min<unsigned>(config.threads, config.reps);
  std::vector<std::exception_ptr> errors(n_workers);
  {
    std::vector<std::thread> workers;
    workers.reserve(n_workers > 0 ? n_workers - 1 : 0);
    auto work = [&](unsigned w) {
      try {
        for (std::uint32_t rep = w; rep < config.reps; rep += n_workers)
          per_rep[rep] = simulate_rep(config, rep, x, y, *t_obs, p_true, result.walk_iters,
                                      result.naive_iters);
      } catch (...) {
        errors[w] = std::current_exception();
      }
    };
    for (unsigned w = 1; w < n_workers; ++w) workers.emplace_back(work, w);
    work(0);
    for (auto& t : workers) t.join();
  }
  for (const auto& err : errors)
    if (err) std::rethrow_exception(err);

  result.walk_rel_error.assign(n_checkpoints, 0.0);
  result.naive_rel_error.assign(n_checkpoints, 0.0);
  for (std::uint32_t rep = 0; rep < config.reps; ++rep) {
    for (std::uint32_t c = 0; c < n_checkpoints; ++c) {
      result.walk_rel_error[c] += per_rep[rep].walk_err[c];
      result.naive_rel_error[c] += per_rep[rep].naive_err[c];
    }
  }
  for (std::uint32_t c = 0; c < n_checkpoints; ++c) {
    result.walk_rel_error[c] /= static_cast<double>(config.reps);
    result.naive_rel_error[c] /= static_cast<double>(config.reps);
  }
  return result;
}

}  // namespace permwalk
