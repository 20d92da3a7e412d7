#include "permwalk.h"

#include <cmath>
#include <limits>
#include <new>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "permwalk/bench.hpp"
#include "permwalk/driver.hpp"
#include "permwalk/error.hpp"
#include "permwalk/inference.hpp"
#include "permwalk/permutation.hpp"
#include "permwalk/random_stream.hpp"
#include "permwalk/walk.hpp"

/* Opaque handle definitions: each wraps exactly one core object. */
struct pw_rng {
  permwalk::RandomStream impl;
};
struct pw_two_sample {
  permwalk::TwoSampleState impl;
};
struct pw_paired {
  permwalk::PairedState impl;
};
struct pw_pvalue_acc {
  permwalk::PValueAccumulator impl;
};
struct pw_maxstat_acc {
  permwalk::MaxStatAccumulator impl;
};
struct pw_field_result {
  permwalk::FieldResult impl;
};
struct pw_twin_result {
  permwalk::TwinFieldResult impl;
};
struct pw_simulate_result {
  permwalk::SimulateResult impl;
};

namespace {

thread_local std::string t_last_error;

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

pw_status to_status(permwalk::errc code)
{
  switch (code) {
    case permwalk::errc::invalid_argument: return PW_E_INVALID_ARGUMENT;
    case permwalk::errc::length_mismatch: return PW_E_LENGTH_MISMATCH;
    case permwalk::errc::index_out_of_range: return PW_E_INDEX_OUT_OF_RANGE;
    case permwalk::errc::nonfinite_value: return PW_E_NONFINITE_VALUE;
    case permwalk::errc::degenerate_statistic: return PW_E_DEGENERATE_STATISTIC;
    case permwalk::errc::limit_exceeded: return PW_E_LIMIT_EXCEEDED;
    case permwalk::errc::insufficient_samples: return PW_E_INSUFFICIENT_SAMPLES;
  }
  return PW_E_INTERNAL;
}

/// Run a callable under the C boundary: exceptions become status codes and
/// the thread-local detail message.
template <typename F>
pw_status guarded(F&& f)
{
  try {
    f();
    return PW_OK;
  } catch (const permwalk::error& e) {
    t_last_error = e.what();
    return to_status(e.code());
  } catch (const std::bad_alloc&) {
    t_last_error = "out of memory";
    return PW_E_NOMEM;
  } catch (const std::exception& e) {
    t_last_error = e.what();
    return PW_E_INTERNAL;
  } catch (...) {
    t_last_error = "unknown error";
    return PW_E_INTERNAL;
  }
}

pw_status fail(pw_status status, const char* message)
{
  t_last_error = message;
  return status;
}

pw_status require_nonnull(const void* p)
{
  return p ? PW_OK : fail(PW_E_INVALID_ARGUMENT, "null pointer argument");
}

std::optional<permwalk::Side> to_side(pw_side side)
{
  switch (side) {
    case PW_SIDE_GREATER: return permwalk::Side::greater;
    case PW_SIDE_LESS: return permwalk::Side::less;
  }
  return std::nullopt;
}

std::optional<permwalk::TestStatistic> to_statistic(pw_statistic statistic)
{
  switch (statistic) {
    case PW_STAT_T: return permwalk::TestStatistic::t_stat;
    case PW_STAT_MEAN_DIFF: return permwalk::TestStatistic::mean_diff;
  }
  return std::nullopt;
}

/// NaN entries in a C field buffer mark degenerate vertices.
std::vector<std::optional<double>> to_optional_field(const double* field, std::size_t n)
{
  std::vector<std::optional<double>> out(n);
  for (std::size_t v = 0; v < n; ++v)
    if (std::isfinite(field[v])) out[v] = field[v];
  return out;
}

void write_optional(const std::optional<double>& value, double* out, int* ok)
{
  *out = value.has_value() ? *value : kNaN;
  if (ok) *ok = value.has_value() ? 1 : 0;
}

}  // namespace

extern "C" {

const char* pw_status_message(pw_status status)
{
  switch (status) {
    case PW_OK: return "success";
    case PW_E_INVALID_ARGUMENT: return "invalid argument";
    case PW_E_LENGTH_MISMATCH: return "length mismatch";
    case PW_E_INDEX_OUT_OF_RANGE: return "index out of range";
    case PW_E_NONFINITE_VALUE: return "non-finite value";
    case PW_E_DEGENERATE_STATISTIC: return "degenerate statistic";
    case PW_E_LIMIT_EXCEEDED: return "limit exceeded";
    case PW_E_INSUFFICIENT_SAMPLES: return "insufficient samples";
    case PW_E_NOMEM: return "out of memory";
    case PW_E_INTERNAL: return "internal error";
  }
  return "unknown status";
}

const char* pw_last_error(void)
{
  return t_last_error.c_str();
}

const char* pw_version(void)
{
  return "1.0.0";
}

/* ------------------------------------------------------- random streams */

pw_status pw_rng_create(uint64_t seed, pw_rng** out)
{
  if (require_nonnull(out) != PW_OK) return PW_E_INVALID_ARGUMENT;
  return guarded([&] { *out = new pw_rng{permwalk::RandomStream(seed)}; });
}

pw_status pw_rng_create_chain(uint64_t seed, uint64_t chain, pw_rng** out)
{
  if (require_nonnull(out) != PW_OK) return PW_E_INVALID_ARGUMENT;
  return guarded([&] { *out = new pw_rng{permwalk::RandomStream::for_chain(seed, chain)}; });
}

void pw_rng_destroy(pw_rng* rng)
{
  delete rng;
}

uint64_t pw_rng_next_u64(pw_rng* rng)
{
  return rng ? rng->impl.next_u64() : 0;
}

pw_status pw_rng_uniform_index(pw_rng* rng, uint64_t bound, uint64_t* out)
{
  if (require_nonnull(rng) != PW_OK || require_nonnull(out) != PW_OK)
    return PW_E_INVALID_ARGUMENT;
  if (bound == 0) return fail(PW_E_INVALID_ARGUMENT, "bound must be nonzero");
  *out = rng->impl.uniform_index(bound);
  return PW_OK;
}

double pw_rng_uniform(pw_rng* rng)
{
  return rng ? rng->impl.uniform() : kNaN;
}

double pw_rng_normal(pw_rng* rng)
{
  return rng ? rng->impl.normal() : kNaN;
}

/* --------------------------------------------------------- permutations */

pw_status pw_permutation_compose(const uint32_t* p, const uint32_t* q, size_t l, uint32_t* out)
{
  if (require_nonnull(p) != PW_OK || require_nonnull(q) != PW_OK || require_nonnull(out) != PW_OK)
    return PW_E_INVALID_ARGUMENT;
  return guarded([&] {
    permwalk::Permutation pp(std::vector<uint32_t>(p, p + l));
    permwalk::Permutation qq(std::vector<uint32_t>(q, q + l));
    const auto composed = permwalk::compose(pp, qq);
    for (size_t k = 0; k < l; ++k) out[k] = composed.mapping()[k];
  });
}

pw_status pw_permutation_factor_walks(const uint32_t* perm, size_t l, uint32_t* out_pairs,
                                      size_t* out_count)
{
  if (require_nonnull(perm) != PW_OK || require_nonnull(out_pairs) != PW_OK ||
      require_nonnull(out_count) != PW_OK)
    return PW_E_INVALID_ARGUMENT;
  return guarded([&] {
    permwalk::Permutation pp(std::vector<uint32_t>(perm, perm + l));
    const auto walks = permwalk::factor_into_walks(pp);
    for (size_t k = 0; k < walks.size(); ++k) {
      out_pairs[2 * k] = walks[k].a;
      out_pairs[2 * k + 1] = walks[k].b;
    }
    *out_count = walks.size();
  });
}

/* ------------------------------------------------- two-sample statistic */

pw_status pw_two_sample_create(const double* x, size_t m, const double* y, size_t n,
                               pw_two_sample** out)
{
  if (require_nonnull(x) != PW_OK || require_nonnull(y) != PW_OK || require_nonnull(out) != PW_OK)
    return PW_E_INVALID_ARGUMENT;
  return guarded([&] {
    *out = new pw_two_sample{permwalk::TwoSampleState(std::span<const double>(x, m),
                                                      std::span<const double>(y, n))};
  });
}

void pw_two_sample_destroy(pw_two_sample* state)
{
  delete state;
}

pw_status pw_two_sample_swap(pw_two_sample* state, size_t i, size_t j)
{
  if (require_nonnull(state) != PW_OK) return PW_E_INVALID_ARGUMENT;
  if (i >= state->impl.m() || j >= state->impl.n())
    return fail(PW_E_INDEX_OUT_OF_RANGE, "swap index out of range");
  state->impl.apply_swap({static_cast<uint32_t>(i), static_cast<uint32_t>(j)});
  return PW_OK;
}

pw_status pw_two_sample_t(const pw_two_sample* state, double* out, int* ok)
{
  if (require_nonnull(state) != PW_OK || require_nonnull(out) != PW_OK)
    return PW_E_INVALID_ARGUMENT;
  write_optional(state->impl.t_statistic(), out, ok);
  return PW_OK;
}

pw_status pw_two_sample_sums(const pw_two_sample* state, double* nu_x, double* nu_y,
                             double* om2_x, double* om2_y)
{
  if (require_nonnull(state) != PW_OK) return PW_E_INVALID_ARGUMENT;
  if (nu_x) *nu_x = state->impl.nu_x();
  if (nu_y) *nu_y = state->impl.nu_y();
  if (om2_x) *om2_x = state->impl.om2_x();
  if (om2_y) *om2_y = state->impl.om2_y();
  return PW_OK;
}

pw_status pw_two_sample_reset(pw_two_sample* state, const double* x, size_t m, const double* y,
                              size_t n)
{
  if (require_nonnull(state) != PW_OK || require_nonnull(x) != PW_OK ||
      require_nonnull(y) != PW_OK)
    return PW_E_INVALID_ARGUMENT;
  return guarded([&] {
    state->impl = permwalk::TwoSampleState(std::span<const double>(x, m),
                                           std::span<const double>(y, n));
  });
}

pw_status pw_two_sample_reinit(pw_two_sample* state)
{
  if (require_nonnull(state) != PW_OK) return PW_E_INVALID_ARGUMENT;
  return guarded([&] { state->impl.reinitialize(); });
}

pw_status pw_direct_t(const double* x, size_t m, const double* y, size_t n, double* out, int* ok)
{
  if (require_nonnull(x) != PW_OK || require_nonnull(y) != PW_OK || require_nonnull(out) != PW_OK)
    return PW_E_INVALID_ARGUMENT;
  return guarded([&] {
    write_optional(
        permwalk::direct_t(std::span<const double>(x, m), std::span<const double>(y, n)), out, ok);
  });
}

/* ------------------------------------------------------ paired statistic */

pw_status pw_paired_create(const double* a, const double* b, size_t n, pw_paired** out)
{
  if (require_nonnull(a) != PW_OK || require_nonnull(b) != PW_OK || require_nonnull(out) != PW_OK)
    return PW_E_INVALID_ARGUMENT;
  return guarded([&] {
    *out = new pw_paired{permwalk::PairedState(std::span<const double>(a, n),
                                               std::span<const double>(b, n))};
  });
}

void pw_paired_destroy(pw_paired* state)
{
  delete state;
}

pw_status pw_paired_swap(pw_paired* state, size_t i)
{
  if (require_nonnull(state) != PW_OK) return PW_E_INVALID_ARGUMENT;
  if (i >= state->impl.n()) return fail(PW_E_INDEX_OUT_OF_RANGE, "pair index out of range");
  state->impl.apply_pair_swap(i);
  return PW_OK;
}

pw_status pw_paired_correlation(const pw_paired* state, double* out, int* ok)
{
  if (require_nonnull(state) != PW_OK || require_nonnull(out) != PW_OK)
    return PW_E_INVALID_ARGUMENT;
  write_optional(state->impl.correlation(), out, ok);
  return PW_OK;
}

pw_status pw_paired_om_xy(const pw_paired* state, double* out)
{
  if (require_nonnull(state) != PW_OK || require_nonnull(out) != PW_OK)
    return PW_E_INVALID_ARGUMENT;
  *out = state->impl.om_xy();
  return PW_OK;
}

pw_status pw_paired_reset(pw_paired* state, const double* a, const double* b, size_t n)
{
  if (require_nonnull(state) != PW_OK || require_nonnull(a) != PW_OK ||
      require_nonnull(b) != PW_OK)
    return PW_E_INVALID_ARGUMENT;
  return guarded([&] {
    state->impl =
        permwalk::PairedState(std::span<const double>(a, n), std::span<const double>(b, n));
  });
}

pw_status pw_paired_reinit(pw_paired* state)
{
  if (require_nonnull(state) != PW_OK) return PW_E_INVALID_ARGUMENT;
  return guarded([&] { state->impl.reinitialize(); });
}

pw_status pw_direct_corr(const double* a, const double* b, size_t n, double* out, int* ok)
{
  if (require_nonnull(a) != PW_OK || require_nonnull(b) != PW_OK || require_nonnull(out) != PW_OK)
    return PW_E_INVALID_ARGUMENT;
  return guarded([&] {
    write_optional(
        permwalk::direct_corr(std::span<const double>(a, n), std::span<const double>(b, n)), out,
        ok);
  });
}

/* ---------------------------------------------------------- walk driver */

pw_status pw_run_walks_ttest(pw_two_sample* state, uint64_t n_walks, uint64_t seed,
                             uint64_t burnin, pw_walk_observer observer, void* user)
{
  if (require_nonnull(state) != PW_OK) return PW_E_INVALID_ARGUMENT;
  return guarded([&] {
    permwalk::WalkPlan plan;
    plan.n_walks = n_walks;
    plan.seed = seed;
    plan.burnin = burnin;
    permwalk::run_walks(state->impl, plan,
                        [&](uint64_t k, const std::optional<double>& t) {
                          if (!observer) return;
                          observer(k, t.has_value() ? *t : kNaN, t.has_value() ? 1 : 0, user);
                        });
  });
}

pw_status pw_run_walks_paired(pw_paired* state, uint64_t n_walks, uint64_t seed, uint64_t burnin,
                              pw_walk_observer observer, void* user)
{
  if (require_nonnull(state) != PW_OK) return PW_E_INVALID_ARGUMENT;
  return guarded([&] {
    permwalk::WalkPlan plan;
    plan.n_walks = n_walks;
    plan.seed = seed;
    plan.burnin = burnin;
    permwalk::run_walks(state->impl, plan,
                        [&](uint64_t k, const std::optional<double>& rho) {
                          if (!observer) return;
                          observer(k, rho.has_value() ? *rho : kNaN, rho.has_value() ? 1 : 0,
                                   user);
                        });
  });
}

/* --------------------------------------------------- p-value accumulator */

pw_status pw_pvalue_create(double observed, pw_side side, pw_pvalue_acc** out)
{
  if (require_nonnull(out) != PW_OK) return PW_E_INVALID_ARGUMENT;
  const auto s = to_side(side);
  if (!s.has_value()) return fail(PW_E_INVALID_ARGUMENT, "side must be greater or less");
  return guarded([&] { *out = new pw_pvalue_acc{permwalk::PValueAccumulator(observed, *s)}; });
}

void pw_pvalue_destroy(pw_pvalue_acc* acc)
{
  delete acc;
}

pw_status pw_pvalue_update(pw_pvalue_acc* acc, double permuted)
{
  if (require_nonnull(acc) != PW_OK) return PW_E_INVALID_ARGUMENT;
  acc->impl.update(permuted);
  return PW_OK;
}

pw_status pw_pvalue_p(const pw_pvalue_acc* acc, double* out)
{
  if (require_nonnull(acc) != PW_OK || require_nonnull(out) != PW_OK)
    return PW_E_INVALID_ARGUMENT;
  return guarded([&] { *out = acc->impl.p(); });
}

pw_status pw_pvalue_p_add_one(const pw_pvalue_acc* acc, double* out)
{
  if (require_nonnull(acc) != PW_OK || require_nonnull(out) != PW_OK)
    return PW_E_INVALID_ARGUMENT;
  *out = acc->impl.p_add_one();
  return PW_OK;
}

pw_status pw_pvalue_counts(const pw_pvalue_acc* acc, uint64_t* k, uint64_t* exceed,
                           uint64_t* degenerate)
{
  if (require_nonnull(acc) != PW_OK) return PW_E_INVALID_ARGUMENT;
  if (k) *k = acc->impl.count();
  if (exceed) *exceed = acc->impl.exceed_count();
  if (degenerate) *degenerate = acc->impl.degenerate_count();
  return PW_OK;
}

pw_status pw_pvalue_merge(pw_pvalue_acc* dst, const pw_pvalue_acc* src)
{
  if (require_nonnull(dst) != PW_OK || require_nonnull(src) != PW_OK)
    return PW_E_INVALID_ARGUMENT;
  return guarded([&] { dst->impl.merge(src->impl); });
}

/* -------------------------------------------------- max-stat accumulator */

pw_status pw_maxstat_create(const double* observed, size_t n_vertices, int retain,
                            pw_maxstat_acc** out)
{
  if (require_nonnull(observed) != PW_OK || require_nonnull(out) != PW_OK)
    return PW_E_INVALID_ARGUMENT;
  return guarded([&] {
    const auto field = to_optional_field(observed, n_vertices);
    *out = new pw_maxstat_acc{permwalk::MaxStatAccumulator(
        std::span<const std::optional<double>>(field), retain != 0)};
  });
}

void pw_maxstat_destroy(pw_maxstat_acc* acc)
{
  delete acc;
}

pw_status pw_maxstat_update(pw_maxstat_acc* acc, const double* field, size_t n_vertices)
{
  if (require_nonnull(acc) != PW_OK || require_nonnull(field) != PW_OK)
    return PW_E_INVALID_ARGUMENT;
  return guarded([&] {
    const auto opt = to_optional_field(field, n_vertices);
    acc->impl.update(std::span<const std::optional<double>>(opt));
  });
}

pw_status pw_maxstat_update_reduced(pw_maxstat_acc* acc, double sup, double inf)
{
  if (require_nonnull(acc) != PW_OK) return PW_E_INVALID_ARGUMENT;
  return guarded([&] { acc->impl.update_reduced(sup, inf); });
}

pw_status pw_maxstat_counts(const pw_maxstat_acc* acc, uint64_t* k, uint64_t* exceed_sup,
                            uint64_t* exceed_inf, uint64_t* degenerate)
{
  if (require_nonnull(acc) != PW_OK) return PW_E_INVALID_ARGUMENT;
  if (k) *k = acc->impl.count();
  if (exceed_sup) *exceed_sup = acc->impl.exceed_sup_count();
  if (exceed_inf) *exceed_inf = acc->impl.exceed_inf_count();
  if (degenerate) *degenerate = acc->impl.degenerate_count();
  return PW_OK;
}

pw_status pw_maxstat_corrected_p(const pw_maxstat_acc* acc, double* p_sup, double* p_inf)
{
  if (require_nonnull(acc) != PW_OK) return PW_E_INVALID_ARGUMENT;
  return guarded([&] {
    if (p_sup) *p_sup = acc->impl.corrected_p_sup();
    if (p_inf) *p_inf = acc->impl.corrected_p_inf();
  });
}

pw_status pw_maxstat_corrected_pvalue_for(const pw_maxstat_acc* acc, double stat, pw_side side,
                                          double* out)
{
  if (require_nonnull(acc) != PW_OK || require_nonnull(out) != PW_OK)
    return PW_E_INVALID_ARGUMENT;
  const auto s = to_side(side);
  if (!s.has_value()) return fail(PW_E_INVALID_ARGUMENT, "side must be greater or less");
  return guarded([&] { *out = acc->impl.corrected_pvalue_for(stat, *s); });
}

pw_status pw_maxstat_threshold(const pw_maxstat_acc* acc, double alpha, double* h_upper,
                               double* h_lower)
{
  if (require_nonnull(acc) != PW_OK || require_nonnull(h_upper) != PW_OK ||
      require_nonnull(h_lower) != PW_OK)
    return PW_E_INVALID_ARGUMENT;
  return guarded([&] {
    const auto [upper, lower] = acc->impl.threshold_at_alpha(alpha);
    *h_upper = upper;
    *h_lower = lower;
  });
}

pw_status pw_maxstat_merge(pw_maxstat_acc* dst, const pw_maxstat_acc* src)
{
  if (require_nonnull(dst) != PW_OK || require_nonnull(src) != PW_OK)
    return PW_E_INVALID_ARGUMENT;
  return guarded([&] { dst->impl.merge(src->impl); });
}

/* -------------------------------------------------------- field inference */

void pw_field_config_init(pw_field_config* config)
{
  if (!config) return;
  config->n_walks = 500000;
  config->seed = 0;
  config->burnin = 0;
  config->side = PW_SIDE_GREATER;
  config->maxstat = 1;
  config->alpha = 0.05;
  config->threads = 1;
}

pw_status pw_field_ttest_run(const double* matrix, size_t n_vertices, size_t n_subjects,
                             const uint8_t* group, const pw_field_config* config,
                             pw_field_result** out)
{
  if (require_nonnull(matrix) != PW_OK || require_nonnull(group) != PW_OK ||
      require_nonnull(config) != PW_OK || require_nonnull(out) != PW_OK)
    return PW_E_INVALID_ARGUMENT;
  const auto side = to_side(config->side);
  if (!side.has_value()) return fail(PW_E_INVALID_ARGUMENT, "side must be greater or less");
  return guarded([&] {
    permwalk::FieldConfig fc;
    fc.n_walks = config->n_walks;
    fc.seed = config->seed;
    fc.burnin = config->burnin;
    fc.side = *side;
    fc.maxstat = config->maxstat != 0;
    fc.alpha = config->alpha;
    fc.threads = config->threads;
    auto result = permwalk::run_field_ttest(
        std::span<const double>(matrix, n_vertices * n_subjects), n_vertices, n_subjects,
        std::span<const uint8_t>(group, n_subjects), fc);
    *out = new pw_field_result{std::move(result)};
  });
}

void pw_field_result_destroy(pw_field_result* result)
{
  delete result;
}

pw_status pw_field_result_info(const pw_field_result* result, pw_field_info* out)
{
  if (require_nonnull(result) != PW_OK || require_nonnull(out) != PW_OK)
    return PW_E_INVALID_ARGUMENT;
  const auto& r = result->impl;
  out->n_vertices = r.statistic.size();
  out->m = r.m;
  out->n = r.n;
  out->n_walks = r.n_walks;
  out->stat_evaluations = r.stat_evaluations;
  out->has_corrected = r.corrected_pvalue.empty() ? 0 : 1;
  out->has_thresholds = r.has_thresholds ? 1 : 0;
  out->threshold_upper = r.threshold_upper;
  out->threshold_lower = r.threshold_lower;
  out->corrected_p_sup = r.corrected_p_sup;
  out->corrected_p_inf = r.corrected_p_inf;
  out->maxstat_walks = r.maxstat_walks;
  out->maxstat_degenerate = r.maxstat_degenerate;
  return PW_OK;
}

const double* pw_field_result_statistic(const pw_field_result* result)
{
  return result ? result->impl.statistic.data() : nullptr;
}

const uint8_t* pw_field_result_statistic_ok(const pw_field_result* result)
{
  return result ? result->impl.statistic_ok.data() : nullptr;
}

const double* pw_field_result_pvalue(const pw_field_result* result)
{
  return result ? result->impl.pvalue.data() : nullptr;
}

const double* pw_field_result_corrected_pvalue(const pw_field_result* result)
{
  if (!result || result->impl.corrected_pvalue.empty()) return nullptr;
  return result->impl.corrected_pvalue.data();
}

const uint64_t* pw_field_result_exceed(const pw_field_result* result)
{
  return result ? result->impl.exceed_count.data() : nullptr;
}

const uint64_t* pw_field_result_walk_count(const pw_field_result* result)
{
  return result ? result->impl.walk_count.data() : nullptr;
}

const uint64_t* pw_field_result_degenerate(const pw_field_result* result)
{
  return result ? result->impl.degenerate_count.data() : nullptr;
}

/* --------------------------------------------------------- twin inference */

void pw_twin_field_config_init(pw_twin_field_config* config)
{
  if (!config) return;
  config->n_walks = 10000;
  config->seed = 0;
  config->report_every = 100;
}

pw_status pw_twin_field_run(const double* matrix, size_t n_vertices, size_t n_subjects,
                            const uint32_t* pair_a, const uint32_t* pair_b, size_t n_pairs,
                            const pw_twin_field_config* config, pw_twin_result** out)
{
  if (require_nonnull(matrix) != PW_OK || require_nonnull(pair_a) != PW_OK ||
      require_nonnull(pair_b) != PW_OK || require_nonnull(config) != PW_OK ||
      require_nonnull(out) != PW_OK)
    return PW_E_INVALID_ARGUMENT;
  return guarded([&] {
    permwalk::TwinFieldConfig tc;
    tc.n_walks = config->n_walks;
    tc.seed = config->seed;
    tc.report_every = config->report_every;
    auto result = permwalk::run_twin_field(
        std::span<const double>(matrix, n_vertices * n_subjects), n_vertices, n_subjects,
        std::span<const uint32_t>(pair_a, n_pairs), std::span<const uint32_t>(pair_b, n_pairs),
        tc);
    *out = new pw_twin_result{std::move(result)};
  });
}

void pw_twin_result_destroy(pw_twin_result* result)
{
  delete result;
}

pw_status pw_twin_result_info(const pw_twin_result* result, pw_twin_info* out)
{
  if (require_nonnull(result) != PW_OK || require_nonnull(out) != PW_OK)
    return PW_E_INVALID_ARGUMENT;
  out->n_vertices = result->impl.mean_correlation.size();
  out->n_walks = result->impl.n_walks;
  out->stat_evaluations = result->impl.stat_evaluations;
  out->converged = result->impl.converged ? 1 : 0;
  return PW_OK;
}

const double* pw_twin_result_mean_correlation(const pw_twin_result* result)
{
  return result ? result->impl.mean_correlation.data() : nullptr;
}

const uint8_t* pw_twin_result_correlation_ok(const pw_twin_result* result)
{
  return result ? result->impl.correlation_ok.data() : nullptr;
}

const uint64_t* pw_twin_result_degenerate(const pw_twin_result* result)
{
  return result ? result->impl.degenerate_count.data() : nullptr;
}

pw_status pw_twin_average(const double* a, const double* b, size_t n, uint64_t n_walks,
                          uint64_t seed, uint64_t report_every, pw_twin_average_result* out)
{
  if (require_nonnull(a) != PW_OK || require_nonnull(b) != PW_OK || require_nonnull(out) != PW_OK)
    return PW_E_INVALID_ARGUMENT;
  return guarded([&] {
    permwalk::PairedState state(std::span<const double>(a, n), std::span<const double>(b, n));
    permwalk::WalkPlan plan;
    plan.n_walks = n_walks;
    plan.seed = seed;
    plan.report_every = report_every;
    const auto result = permwalk::average_twin_correlation(std::move(state), plan);
    out->mean = result.mean;
    out->walks_used = result.walks_used;
    out->converged_at = result.converged_at.has_value()
                            ? static_cast<int64_t>(*result.converged_at)
                            : static_cast<int64_t>(-1);
    out->degenerate_skipped = result.degenerate_skipped;
  });
}

pw_status pw_heritability(const double* mz, const double* dz, size_t n_vertices, double* out)
{
  if (require_nonnull(mz) != PW_OK || require_nonnull(dz) != PW_OK ||
      require_nonnull(out) != PW_OK)
    return PW_E_INVALID_ARGUMENT;
  return guarded([&] {
    const auto hi = permwalk::heritability_index(std::span<const double>(mz, n_vertices),
                                                 std::span<const double>(dz, n_vertices));
    for (size_t v = 0; v < hi.size(); ++v) out[v] = hi[v];
  });
}

/* ------------------------------------------------------ exact + baselines */

pw_status pw_enumerate(const double* x, size_t m, const double* y, size_t n,
                       pw_statistic statistic, pw_side side, int strict, uint64_t limit,
                       pw_enumeration_result* out)
{
  if (require_nonnull(x) != PW_OK || require_nonnull(y) != PW_OK || require_nonnull(out) != PW_OK)
    return PW_E_INVALID_ARGUMENT;
  const auto s = to_side(side);
  const auto stat = to_statistic(statistic);
  if (!s.has_value()) return fail(PW_E_INVALID_ARGUMENT, "side must be greater or less");
  if (!stat.has_value()) return fail(PW_E_INVALID_ARGUMENT, "unknown statistic");
  return guarded([&] {
    permwalk::EnumerationOptions options;
    options.strict = strict != 0;
    options.limit = limit;
    const auto result = permwalk::exact_enumeration_pvalue(
        std::span<const double>(x, m), std::span<const double>(y, n), *stat, *s, options);
    out->p = result.p;
    out->n_assignments = result.n_assignments;
    out->n_exceed = result.n_exceed;
    out->n_degenerate = result.n_degenerate;
  });
}

pw_status pw_naive_mc(const double* x, size_t m, const double* y, size_t n,
                      pw_statistic statistic, pw_side side, uint64_t n_perms, uint64_t seed,
                      pw_naive_mc_result* out)
{
  if (require_nonnull(x) != PW_OK || require_nonnull(y) != PW_OK || require_nonnull(out) != PW_OK)
    return PW_E_INVALID_ARGUMENT;
  const auto s = to_side(side);
  const auto stat = to_statistic(statistic);
  if (!s.has_value()) return fail(PW_E_INVALID_ARGUMENT, "side must be greater or less");
  if (!stat.has_value()) return fail(PW_E_INVALID_ARGUMENT, "unknown statistic");
  return guarded([&] {
    const auto result = permwalk::naive_mc_pvalue(std::span<const double>(x, m),
                                                  std::span<const double>(y, n), *stat, *s,
                                                  n_perms, seed);
    out->p = result.p;
    out->n_perms = result.n_perms;
    out->n_degenerate = result.n_degenerate;
  });
}

/* ------------------------------------------------------- mixing + bench */

pw_status pw_mixing(size_t m, size_t n, uint64_t n_walks, uint32_t n_reps, uint64_t seed,
                    double* out_proportion)
{
  if (require_nonnull(out_proportion) != PW_OK) return PW_E_INVALID_ARGUMENT;
  return guarded([&] {
    const auto est = permwalk::estimate_mixing(m, n, n_walks, n_reps, seed);
    for (size_t k = 0; k < est.proportion.size(); ++k) out_proportion[k] = est.proportion[k];
  });
}

pw_status pw_measure_throughput(size_t m, size_t n, uint64_t n_evals, uint64_t seed,
                                pw_throughput_result* out)
{
  if (require_nonnull(out) != PW_OK) return PW_E_INVALID_ARGUMENT;
  return guarded([&] {
    const auto result = permwalk::measure_throughput(m, n, n_evals, seed);
    out->walk_evals = result.walk_evals;
    out->naive_evals = result.naive_evals;
    out->walk_ns_per_eval = result.walk_ns_per_eval;
    out->naive_ns_per_eval = result.naive_ns_per_eval;
    out->ratio = result.ratio;
  });
}

/* ---------------------------------------------------------- convergence */

void pw_simulate_config_init(pw_simulate_config* config)
{
  if (!config) return;
  config->m = 10;
  config->n = 10;
  config->reps = 100;
  config->naive_perms = 10000;
  config->throughput_ratio = 0.0;
  config->checkpoints = 50;
  config->seed = 0;
  config->side = PW_SIDE_LESS;
  config->shift = 0.1;
  config->threads = 1;
}

pw_status pw_simulate(const pw_simulate_config* config, pw_simulate_result** out)
{
  if (require_nonnull(config) != PW_OK || require_nonnull(out) != PW_OK)
    return PW_E_INVALID_ARGUMENT;
  const auto side = to_side(config->side);
  if (!side.has_value()) return fail(PW_E_INVALID_ARGUMENT, "side must be greater or less");
  return guarded([&] {
    permwalk::SimulateConfig sc;
    sc.m = config->m;
    sc.n = config->n;
    sc.reps = config->reps;
    sc.naive_perms = config->naive_perms;
    sc.throughput_ratio = config->throughput_ratio;
    sc.checkpoints = config->checkpoints;
    sc.seed = config->seed;
    sc.side = *side;
    sc.shift = config->shift;
    sc.threads = config->threads;
    auto result = permwalk::simulate_convergence(sc);
    *out = new pw_simulate_result{std::move(result)};
  });
}

void pw_simulate_result_destroy(pw_simulate_result* result)
{
  delete result;
}

pw_status pw_simulate_result_info(const pw_simulate_result* result, pw_simulate_info* out)
{
  if (require_nonnull(result) != PW_OK || require_nonnull(out) != PW_OK)
    return PW_E_INVALID_ARGUMENT;
  out->m = result->impl.m;
  out->n = result->impl.n;
  out->reps = result->impl.reps;
  out->checkpoints = static_cast<uint32_t>(result->impl.budget_fraction.size());
  out->throughput_ratio = result->impl.throughput_ratio;
  out->t_observed = result->impl.t_observed;
  out->p_true = result->impl.p_true;
  return PW_OK;
}

const double* pw_simulate_budget_fraction(const pw_simulate_result* result)
{
  return result ? result->impl.budget_fraction.data() : nullptr;
}

const uint64_t* pw_simulate_walk_iters(const pw_simulate_result* result)
{
  return result ? result->impl.walk_iters.data() : nullptr;
}

const uint64_t* pw_simulate_naive_iters(const pw_simulate_result* result)
{
  return result ? result->impl.naive_iters.data() : nullptr;
}

const double* pw_simulate_walk_rel_error(const pw_simulate_result* result)
{
  return result ? result->impl.walk_rel_error.data() : nullptr;
}

const double* pw_simulate_naive_rel_error(const pw_simulate_result* result)
{
  return result ? result->impl.naive_rel_error.data() : nullptr;
}

} /* extern "C" */
