/*
 * permwalk - permutation tests via random transposition walks.
 *
 * C interface to the walk engine: opaque handles, integer status codes, and
 * flat buffers. All functions return pw_status unless documented otherwise;
 * on failure a thread-local message with detail is available from
 * pw_last_error(). Buffers returned by handle getters stay valid until the
 * handle is destroyed. Handles are not thread-safe; use one per thread and
 * merge accumulators.
 */
#ifndef PERMWALK_H
#define PERMWALK_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define PW_API __declspec(dllexport)
#else
#define PW_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

/* ---------------------------------------------------------------- status */

typedef enum pw_status {
  PW_OK = 0,
  PW_E_INVALID_ARGUMENT = 1,
  PW_E_LENGTH_MISMATCH = 2,
  PW_E_INDEX_OUT_OF_RANGE = 3,
  PW_E_NONFINITE_VALUE = 4,
  PW_E_DEGENERATE_STATISTIC = 5,
  PW_E_LIMIT_EXCEEDED = 6,
  PW_E_INSUFFICIENT_SAMPLES = 7,
  PW_E_NOMEM = 8,
  PW_E_INTERNAL = 9
} pw_status;

/* Static description of a status code. */
PW_API const char* pw_status_message(pw_status status);

/* Thread-local detail message from the most recent failing call. */
PW_API const char* pw_last_error(void);

/* Library version, "major.minor.patch". */
PW_API const char* pw_version(void);

typedef enum pw_side { PW_SIDE_GREATER = 0, PW_SIDE_LESS = 1 } pw_side;
typedef enum pw_statistic { PW_STAT_T = 0, PW_STAT_MEAN_DIFF = 1 } pw_statistic;

/* ------------------------------------------------------- random streams */

typedef struct pw_rng pw_rng;

PW_API pw_status pw_rng_create(uint64_t seed, pw_rng** out);
/* Independent stream for chain `chain` of a parallel run over `seed`. */
PW_API pw_status pw_rng_create_chain(uint64_t seed, uint64_t chain, pw_rng** out);
PW_API void pw_rng_destroy(pw_rng* rng);
PW_API uint64_t pw_rng_next_u64(pw_rng* rng);
/* Uniform integer in [0, bound); bound must be nonzero. */
PW_API pw_status pw_rng_uniform_index(pw_rng* rng, uint64_t bound, uint64_t* out);
PW_API double pw_rng_uniform(pw_rng* rng);
PW_API double pw_rng_normal(pw_rng* rng);

/* --------------------------------------------------------- permutations */

/*
 * Permutations are 0-based one-line arrays: perm[k] is the image of k.
 * Walks are index pairs (a, b) meaning "exchange positions a and b".
 */

/* out[k] = p[q[k]] (apply q first). All three arrays have length l. */
PW_API pw_status pw_permutation_compose(const uint32_t* p, const uint32_t* q, size_t l,
                                        uint32_t* out);

/*
 * Factor a permutation into walks in application order: composing the pairs
 * onto the identity arrangement first to last, where pair (a, b) exchanges
 * the values a and b of the one-line form, reproduces perm. out_pairs must
 * hold at least l-1 (a, b) pairs, i.e. 2*(l-1) uint32 values; *out_count
 * receives the number of pairs written.
 */
PW_API pw_status pw_permutation_factor_walks(const uint32_t* perm, size_t l, uint32_t* out_pairs,
                                             size_t* out_count);

/* ------------------------------------------------- two-sample statistic */

typedef struct pw_two_sample pw_two_sample;

PW_API pw_status pw_two_sample_create(const double* x, size_t m, const double* y, size_t n,
                                      pw_two_sample** out);
PW_API void pw_two_sample_destroy(pw_two_sample* state);
/* Exchange x[i] with y[j] and refresh the sums in O(1). */
PW_API pw_status pw_two_sample_swap(pw_two_sample* state, size_t i, size_t j);
/*
 * Current t statistic. *ok is 0 and *out is NaN when the pooled variance
 * vanishes (degenerate).
 */
PW_API pw_status pw_two_sample_t(const pw_two_sample* state, double* out, int* ok);
/* Running sums: nu = group sum, om2 = group sum of squared deviations. */
PW_API pw_status pw_two_sample_sums(const pw_two_sample* state, double* nu_x, double* nu_y,
                                    double* om2_x, double* om2_y);
/* Reset to a fresh sample (sizes may change). */
PW_API pw_status pw_two_sample_reset(pw_two_sample* state, const double* x, size_t m,
                                     const double* y, size_t n);
/* Recompute the running sums from the current group contents in O(m+n). */
PW_API pw_status pw_two_sample_reinit(pw_two_sample* state);

/* From-scratch two-pass t statistic (the drift oracle). */
PW_API pw_status pw_direct_t(const double* x, size_t m, const double* y, size_t n, double* out,
                             int* ok);

/* ------------------------------------------------------ paired statistic */

typedef struct pw_paired pw_paired;

PW_API pw_status pw_paired_create(const double* a, const double* b, size_t n, pw_paired** out);
PW_API void pw_paired_destroy(pw_paired* state);
/* Swap the members of pair i and refresh the cross sum in O(1). */
PW_API pw_status pw_paired_swap(pw_paired* state, size_t i);
PW_API pw_status pw_paired_correlation(const pw_paired* state, double* out, int* ok);
/* Scaled cross sum om_xy = n*sum(ab) - sum(a)*sum(b). */
PW_API pw_status pw_paired_om_xy(const pw_paired* state, double* out);
PW_API pw_status pw_paired_reset(pw_paired* state, const double* a, const double* b, size_t n);
/* Recompute the running sums from the current pair contents in O(n). */
PW_API pw_status pw_paired_reinit(pw_paired* state);

/* From-scratch Pearson correlation (the drift oracle). */
PW_API pw_status pw_direct_corr(const double* a, const double* b, size_t n, double* out, int* ok);

/* ---------------------------------------------------------- walk driver */

/*
 * Called after every observed walk with the 1-based walk index and the
 * updated statistic; ok is 0 when the statistic is degenerate (value NaN).
 */
typedef void (*pw_walk_observer)(uint64_t walk_index, double statistic, int ok, void* user);

/*
 * Apply n_walks random between-group transpositions (after `burnin`
 * unobserved ones), invoking the observer after each. Deterministic in seed.
 */
PW_API pw_status pw_run_walks_ttest(pw_two_sample* state, uint64_t n_walks, uint64_t seed,
                                    uint64_t burnin, pw_walk_observer observer, void* user);
/* Paired variant: each walk flips one uniformly chosen pair. */
PW_API pw_status pw_run_walks_paired(pw_paired* state, uint64_t n_walks, uint64_t seed,
                                     uint64_t burnin, pw_walk_observer observer, void* user);

/* --------------------------------------------------- p-value accumulator */

typedef struct pw_pvalue_acc pw_pvalue_acc;

PW_API pw_status pw_pvalue_create(double observed, pw_side side, pw_pvalue_acc** out);
PW_API void pw_pvalue_destroy(pw_pvalue_acc* acc);
/* NaN counts as a degenerate walk (tallied, excluded from k). */
PW_API pw_status pw_pvalue_update(pw_pvalue_acc* acc, double permuted);
/* Raw Monte Carlo fraction exceed/k; fails before the first counted walk. */
PW_API pw_status pw_pvalue_p(const pw_pvalue_acc* acc, double* out);
/* Never-zero variant (exceed+1)/(k+1). */
PW_API pw_status pw_pvalue_p_add_one(const pw_pvalue_acc* acc, double* out);
PW_API pw_status pw_pvalue_counts(const pw_pvalue_acc* acc, uint64_t* k, uint64_t* exceed,
                                  uint64_t* degenerate);
/* Fold src into dst; both must target the same observed value and side. */
PW_API pw_status pw_pvalue_merge(pw_pvalue_acc* dst, const pw_pvalue_acc* src);

/* -------------------------------------------------- max-stat accumulator */

typedef struct pw_maxstat_acc pw_maxstat_acc;

/*
 * observed holds the statistic field on the original labeling; NaN entries
 * mark degenerate vertices. retain != 0 keeps the null sup/inf samples for
 * thresholds and per-vertex corrected p-values.
 */
PW_API pw_status pw_maxstat_create(const double* observed, size_t n_vertices, int retain,
                                   pw_maxstat_acc** out);
PW_API void pw_maxstat_destroy(pw_maxstat_acc* acc);
/* Fold one walk's field in; NaN entries are skipped in the sup/inf. */
PW_API pw_status pw_maxstat_update(pw_maxstat_acc* acc, const double* field, size_t n_vertices);
PW_API pw_status pw_maxstat_update_reduced(pw_maxstat_acc* acc, double sup, double inf);
PW_API pw_status pw_maxstat_counts(const pw_maxstat_acc* acc, uint64_t* k, uint64_t* exceed_sup,
                                   uint64_t* exceed_inf, uint64_t* degenerate);
/* Corrected p-values for the observed sup (side greater) and inf (less). */
PW_API pw_status pw_maxstat_corrected_p(const pw_maxstat_acc* acc, double* p_sup, double* p_inf);
/* Corrected p-value for an arbitrary vertex statistic. Needs retention. */
PW_API pw_status pw_maxstat_corrected_pvalue_for(const pw_maxstat_acc* acc, double stat,
                                                 pw_side side, double* out);
/* Empirical alpha-thresholds (needs retention and k >= 1/alpha). */
PW_API pw_status pw_maxstat_threshold(const pw_maxstat_acc* acc, double alpha, double* h_upper,
                                      double* h_lower);
PW_API pw_status pw_maxstat_merge(pw_maxstat_acc* dst, const pw_maxstat_acc* src);

/* -------------------------------------------------------- field inference */

typedef struct pw_field_config {
  uint64_t n_walks;  /* random transpositions to observe */
  uint64_t seed;
  uint64_t burnin;   /* unobserved walks before counting starts */
  pw_side side;
  int maxstat;       /* nonzero: max-statistic correction across vertices */
  double alpha;      /* threshold level when maxstat is on */
  unsigned threads;  /* independent chains; deterministic per thread count */
} pw_field_config;

/* Defaults: 500000 walks, seed 0, no burn-in, side greater, maxstat on,
 * alpha 0.05, one thread. */
PW_API void pw_field_config_init(pw_field_config* config);

typedef struct pw_field_result pw_field_result;

typedef struct pw_field_info {
  uint64_t n_vertices;
  uint64_t m, n;     /* group sizes after label split */
  uint64_t n_walks;
  uint64_t stat_evaluations;
  int has_corrected; /* corrected p-value buffer present */
  int has_thresholds;
  double threshold_upper, threshold_lower;
  double corrected_p_sup, corrected_p_inf;
  uint64_t maxstat_walks, maxstat_degenerate;
} pw_field_info;

/*
 * Walk-based two-sample t inference over a row-major n_vertices x n_subjects
 * matrix. group[s] is 0 (x) or 1 (y) for subject column s. One subject-level
 * walk sequence drives every vertex.
 */
PW_API pw_status pw_field_ttest_run(const double* matrix, size_t n_vertices, size_t n_subjects,
                                    const uint8_t* group, const pw_field_config* config,
                                    pw_field_result** out);
PW_API void pw_field_result_destroy(pw_field_result* result);
PW_API pw_status pw_field_result_info(const pw_field_result* result, pw_field_info* out);
/* Per-vertex buffers, length n_vertices; NaN where the vertex is degenerate. */
PW_API const double* pw_field_result_statistic(const pw_field_result* result);
PW_API const uint8_t* pw_field_result_statistic_ok(const pw_field_result* result);
PW_API const double* pw_field_result_pvalue(const pw_field_result* result);
/* NULL when the run had maxstat off. */
PW_API const double* pw_field_result_corrected_pvalue(const pw_field_result* result);
PW_API const uint64_t* pw_field_result_exceed(const pw_field_result* result);
PW_API const uint64_t* pw_field_result_walk_count(const pw_field_result* result);
PW_API const uint64_t* pw_field_result_degenerate(const pw_field_result* result);

/* --------------------------------------------------------- twin inference */

typedef struct pw_twin_field_config {
  uint64_t n_walks;
  uint64_t seed;
  uint64_t report_every; /* checkpoint cadence for the convergence flag */
} pw_twin_field_config;

/* Defaults: 10000 walks, seed 0, checkpoints every 100 walks. */
PW_API void pw_twin_field_config_init(pw_twin_field_config* config);

typedef struct pw_twin_result pw_twin_result;

typedef struct pw_twin_info {
  uint64_t n_vertices;
  uint64_t n_walks;
  uint64_t stat_evaluations;
  int converged; /* every usable vertex settled by the final checkpoint */
} pw_twin_info;

/*
 * Per-vertex averaged twin correlation over one shared pair-swap walk
 * sequence. pair_a/pair_b hold subject column indices of the twin pairs.
 */
PW_API pw_status pw_twin_field_run(const double* matrix, size_t n_vertices, size_t n_subjects,
                                   const uint32_t* pair_a, const uint32_t* pair_b, size_t n_pairs,
                                   const pw_twin_field_config* config, pw_twin_result** out);
PW_API void pw_twin_result_destroy(pw_twin_result* result);
PW_API pw_status pw_twin_result_info(const pw_twin_result* result, pw_twin_info* out);
PW_API const double* pw_twin_result_mean_correlation(const pw_twin_result* result);
PW_API const uint8_t* pw_twin_result_correlation_ok(const pw_twin_result* result);
PW_API const uint64_t* pw_twin_result_degenerate(const pw_twin_result* result);

typedef struct pw_twin_average_result {
  double mean;
  uint64_t walks_used;
  int64_t converged_at; /* first settled checkpoint walk; -1 when never */
  uint64_t degenerate_skipped;
} pw_twin_average_result;

/* Running mean of one pair vector's correlation over random pair flips. */
PW_API pw_status pw_twin_average(const double* a, const double* b, size_t n, uint64_t n_walks,
                                 uint64_t seed, uint64_t report_every,
                                 pw_twin_average_result* out);

/* HI per vertex: out[v] = mz[v] - dz[v]. */
PW_API pw_status pw_heritability(const double* mz, const double* dz, size_t n_vertices,
                                 double* out);

/* ------------------------------------------------------ exact + baselines */

typedef struct pw_enumeration_result {
  double p;
  uint64_t n_assignments;
  uint64_t n_exceed;
  uint64_t n_degenerate;
} pw_enumeration_result;

/*
 * Exact p-value over all C(m+n, m) group assignments. strict != 0 counts
 * permuted > observed (the < variant for side less); otherwise >= / <=.
 * Fails with PW_E_LIMIT_EXCEEDED when the assignment count exceeds limit.
 */
PW_API pw_status pw_enumerate(const double* x, size_t m, const double* y, size_t n,
                              pw_statistic statistic, pw_side side, int strict, uint64_t limit,
                              pw_enumeration_result* out);

typedef struct pw_naive_mc_result {
  double p;
  uint64_t n_perms;
  uint64_t n_degenerate;
} pw_naive_mc_result;

/* Baseline estimator: fresh uniform assignment + full recompute per draw. */
PW_API pw_status pw_naive_mc(const double* x, size_t m, const double* y, size_t n,
                             pw_statistic statistic, pw_side side, uint64_t n_perms, uint64_t seed,
                             pw_naive_mc_result* out);

/* ------------------------------------------------------- mixing + bench */

/*
 * Mean mixing proportion per walk index over n_reps repetitions.
 * out_proportion must hold n_walks + 1 values; entry k is the mean fraction
 * of x slots holding y-origin elements after k walks (entry 0 is 0).
 */
PW_API pw_status pw_mixing(size_t m, size_t n, uint64_t n_walks, uint32_t n_reps, uint64_t seed,
                           double* out_proportion);

typedef struct pw_throughput_result {
  uint64_t walk_evals;
  uint64_t naive_evals;
  double walk_ns_per_eval;
  double naive_ns_per_eval;
  double ratio; /* naive cost / walk cost per statistic evaluation */
} pw_throughput_result;

/* Time incremental walk updates against naive recomputation. */
PW_API pw_status pw_measure_throughput(size_t m, size_t n, uint64_t n_evals, uint64_t seed,
                                       pw_throughput_result* out);

/* ---------------------------------------------------------- convergence */

typedef struct pw_simulate_config {
  uint64_t m, n;           /* group sizes */
  uint32_t reps;
  uint64_t naive_perms;    /* naive budget; walk budget = this x ratio */
  double throughput_ratio; /* <= 0: measure once up front */
  uint32_t checkpoints;
  uint64_t seed;
  pw_side side;
  double shift;            /* y ~ shift + N(0,1) */
  unsigned threads;
} pw_simulate_config;

/* Defaults: m=n=10, 100 reps, 10000 naive perms, measured ratio, 50
 * checkpoints, seed 0, side less, shift 0.1, one thread. */
PW_API void pw_simulate_config_init(pw_simulate_config* config);

typedef struct pw_simulate_result pw_simulate_result;

typedef struct pw_simulate_info {
  uint64_t m, n;
  uint32_t reps;
  uint32_t checkpoints;
  double throughput_ratio; /* ratio actually used */
  double t_observed;       /* statistic of the representative dataset */
  double p_true;           /* its Student-t ground-truth p-value */
} pw_simulate_info;

/* Equal-budget convergence curves, averaged over replicates. */
PW_API pw_status pw_simulate(const pw_simulate_config* config, pw_simulate_result** out);
PW_API void pw_simulate_result_destroy(pw_simulate_result* result);
PW_API pw_status pw_simulate_result_info(const pw_simulate_result* result, pw_simulate_info* out);
/* Buffers of length `checkpoints`. */
PW_API const double* pw_simulate_budget_fraction(const pw_simulate_result* result);
PW_API const uint64_t* pw_simulate_walk_iters(const pw_simulate_result* result);
PW_API const uint64_t* pw_simulate_naive_iters(const pw_simulate_result* result);
PW_API const double* pw_simulate_walk_rel_error(const pw_simulate_result* result);
PW_API const double* pw_simulate_naive_rel_error(const pw_simulate_result* result);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* PERMWALK_H */
