#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdint>
#include <functional>
#include <vector>

#include "permwalk/driver.hpp"
#include "permwalk/error.hpp"
#include "permwalk/random_stream.hpp"
#include "permwalk/two_sample.hpp"
#include "permwalk/walk.hpp"

using namespace permwalk;

namespace {

errc thrown_code(const std::function<void()>& fn)
{
  try {
    fn();
  } catch (const error& e) {
    return e.code();
  }
  FAIL("expected an error");
  return errc{};
}

/// V x S iid standard normal matrix.
std::vector<double> normal_matrix(std::size_t n_vertices, std::size_t n_subjects,
                                  std::uint64_t seed)
{
  RandomStream rng(seed);
  std::vector<double> matrix(n_vertices * n_subjects);
  for (auto& v : matrix) v = rng.normal();
  return matrix;
}

}  // namespace

TEST_CASE("field inference splits shuffled group labels correctly")
{
  // Columns labeled  y x x y x y x  ->  m = 4, n = 3.
  const std::vector<std::uint8_t> group{1, 0, 0, 1, 0, 1, 0};
  const std::vector<double> matrix{
      0.3, 1.7, 2.2, 0.9, 1.4, 2.8, 0.6,   // vertex 0
      1.1, 0.2, 2.5, 1.9, 0.8, 2.1, 1.3,   // vertex 1
  };
  FieldConfig config;
  config.n_walks = 50;
  config.seed = 7;
  config.maxstat = false;
  const auto res = run_field_ttest(matrix, 2, 7, group, config);

  CHECK(res.m == 4);
  CHECK(res.n == 3);
  REQUIRE(res.statistic.size() == 2);
  for (std::size_t v = 0; v < 2; ++v) {
    std::vector<double> x, y;
    for (std::size_t s = 0; s < 7; ++s)
      (group[s] == 0 ? x : y).push_back(matrix[v * 7 + s]);
    const auto expected = direct_t(x, y);
    REQUIRE(expected.has_value());
    CHECK(res.statistic_ok[v] == 1);
    CHECK(res.statistic[v] == doctest::Approx(*expected).epsilon(1e-12));
    CHECK(res.walk_count[v] == 50);
  }
  CHECK(res.n_walks == 50);
  CHECK(res.stat_evaluations == 51 * 2);
  CHECK(res.corrected_pvalue.empty());
}

TEST_CASE("a single-thread run reproduces the plain field walk")
{
  const std::vector<std::uint8_t> group{1, 0, 0, 1, 0, 1, 0};
  const std::vector<double> matrix{
      0.3, 1.7, 2.2, 0.9, 1.4, 2.8, 0.6,
      1.1, 0.2, 2.5, 1.9, 0.8, 2.1, 1.3,
  };
  FieldConfig config;
  config.n_walks = 500;
  config.seed = 99;
  config.maxstat = false;
  const auto res = run_field_ttest(matrix, 2, 7, group, config);

  // Reorder columns by label (x block first, original order within blocks)
  // and drive the same walk plan directly.
  const std::vector<std::size_t> order{1, 2, 4, 6, 0, 3, 5};
  std::vector<double> reordered(matrix.size());
  for (std::size_t v = 0; v < 2; ++v)
    for (std::size_t s = 0; s < 7; ++s) reordered[v * 7 + s] = matrix[v * 7 + order[s]];

  TwoSampleField field(reordered, 2, 4, 3);
  std::vector<PValueAccumulator> accs;
  for (std::size_t v = 0; v < 2; ++v) accs.emplace_back(res.statistic[v], Side::greater);
  WalkPlan plan;
  plan.n_walks = 500;
  plan.seed = 99;
  run_walks_field(field, plan, [&](std::uint64_t, std::span<const std::optional<double>> stats) {
    for (std::size_t v = 0; v < 2; ++v) accs[v].update(stats[v]);
  });

  for (std::size_t v = 0; v < 2; ++v) {
    CHECK(res.exceed_count[v] == accs[v].exceed_count());
    CHECK(res.walk_count[v] == accs[v].count());
    CHECK(res.pvalue[v] == accs[v].p());
  }
}

TEST_CASE("multi-chain runs are deterministic for a fixed thread count")
{
  const auto matrix = normal_matrix(4, 20, 31);
  std::vector<std::uint8_t> group(20, 0);
  for (std::size_t s = 10; s < 20; ++s) group[s] = 1;

  FieldConfig config;
  config.n_walks = 4001;  // odd on purpose: uneven chain split
  config.seed = 5;
  config.threads = 2;
  const auto a = run_field_ttest(matrix, 4, 20, group, config);
  const auto b = run_field_ttest(matrix, 4, 20, group, config);
  CHECK(a.statistic == b.statistic);
  CHECK(a.pvalue == b.pvalue);
  CHECK(a.exceed_count == b.exceed_count);
  CHECK(a.corrected_pvalue == b.corrected_pvalue);
  CHECK(a.threshold_upper == b.threshold_upper);
  CHECK(a.threshold_lower == b.threshold_lower);

  std::uint64_t total_walks = 0;
  for (std::size_t v = 0; v < 4; ++v) total_walks += a.walk_count[v];
  CHECK(total_walks == 4 * 4001);
  CHECK(a.maxstat_walks == 4001);
}

TEST_CASE("corrected p-values dominate pointwise p-values")
{
  const auto matrix = normal_matrix(5, 16, 77);
  std::vector<std::uint8_t> group(16, 0);
  for (std::size_t s = 8; s < 16; ++s) group[s] = 1;

  FieldConfig config;
  config.n_walks = 2000;
  config.seed = 13;
  config.maxstat = true;
  config.alpha = 0.05;
  const auto res = run_field_ttest(matrix, 5, 16, group, config);

  REQUIRE(res.corrected_pvalue.size() == 5);
  for (std::size_t v = 0; v < 5; ++v) {
    REQUIRE(res.statistic_ok[v] == 1);
    // With no degenerate walks both fractions share the denominator and the
    // sup exceeds every vertex statistic, so dominance is exact.
    CHECK(res.degenerate_count[v] == 0);
    CHECK(res.corrected_pvalue[v] >= res.pvalue[v]);
    CHECK(res.pvalue[v] >= 0.0);
    CHECK(res.corrected_pvalue[v] <= 1.0);
  }
  CHECK(res.has_thresholds);
  CHECK(res.threshold_upper >= res.threshold_lower);
  CHECK(res.corrected_p_sup >= 0.0);
  CHECK(res.corrected_p_inf >= 0.0);
}

TEST_CASE("field inference validates labels and config")
{
  const auto matrix = normal_matrix(2, 6, 3);
  const std::vector<std::uint8_t> good{0, 0, 0, 1, 1, 1};
  FieldConfig config;
  config.n_walks = 10;

  const std::vector<std::uint8_t> short_labels{0, 0, 1, 1};
  CHECK(thrown_code([&] { (void)run_field_ttest(matrix, 2, 6, short_labels, config); }) ==
        errc::length_mismatch);

  const std::vector<std::uint8_t> bad_value{0, 0, 2, 1, 1, 1};
  CHECK(thrown_code([&] { (void)run_field_ttest(matrix, 2, 6, bad_value, config); }) ==
        errc::invalid_argument);

  const std::vector<std::uint8_t> lopsided{0, 0, 0, 0, 0, 1};
  CHECK(thrown_code([&] { (void)run_field_ttest(matrix, 2, 6, lopsided, config); }) ==
        errc::invalid_argument);

  FieldConfig zero_threads = config;
  zero_threads.threads = 0;
  CHECK(thrown_code([&] { (void)run_field_ttest(matrix, 2, 6, good, zero_threads); }) ==
        errc::invalid_argument);

  FieldConfig bad_alpha = config;
  bad_alpha.alpha = 0.0;
  CHECK(thrown_code([&] { (void)run_field_ttest(matrix, 2, 6, good, bad_alpha); }) ==
        errc::invalid_argument);

  CHECK(thrown_code([&] { (void)run_field_ttest(matrix, 3, 6, good, config); }) ==
        errc::length_mismatch);
}

TEST_CASE("a constant vertex is reported degenerate without poisoning the rest")
{
  std::vector<double> matrix = normal_matrix(1, 8, 15);
  matrix.insert(matrix.end(), 8, 4.2);  // vertex 1 is constant
  const std::vector<std::uint8_t> group{0, 0, 0, 0, 1, 1, 1, 1};

  FieldConfig config;
  config.n_walks = 200;
  config.seed = 2;
  const auto res = run_field_ttest(matrix, 2, 8, group, config);

  CHECK(res.statistic_ok[0] == 1);
  CHECK(res.statistic_ok[1] == 0);
  CHECK(std::isnan(res.statistic[1]));
  CHECK(std::isnan(res.pvalue[1]));
  CHECK(std::isnan(res.corrected_pvalue[1]));
  CHECK(res.walk_count[1] == 0);
  // The healthy vertex keeps the max-stat reduction alive on every walk.
  CHECK(res.maxstat_walks == 200);
  CHECK(res.maxstat_degenerate == 0);
  CHECK(res.walk_count[0] == 200);
}

TEST_CASE("pointwise p-values under the null stay centered")
{
  const auto matrix = normal_matrix(50, 20, 101);
  std::vector<std::uint8_t> group(20, 0);
  for (std::size_t s = 10; s < 20; ++s) group[s] = 1;

  FieldConfig config;
  config.n_walks = 2000;
  config.seed = 55;
  config.maxstat = false;
  const auto res = run_field_ttest(matrix, 50, 20, group, config);

  double sum = 0.0;
  for (std::size_t v = 0; v < 50; ++v) {
    REQUIRE(res.statistic_ok[v] == 1);
    CHECK(res.pvalue[v] >= 0.0);
    CHECK(res.pvalue[v] <= 1.0);
    sum += res.pvalue[v];
  }
  // Null p-values are near-uniform; the mean over 50 vertices should sit
  // well inside (0.35, 0.65).
  CHECK(sum / 50.0 > 0.35);
  CHECK(sum / 50.0 < 0.65);
}

TEST_CASE("twin field averages are deterministic and clamp identical pairs")
{
  // Vertex 0: twins identical -> every configuration has correlation 1.
  // Vertex 1: generic data.
  const std::vector<double> matrix{
      0.4, 0.4, 1.9, 1.9, -0.3, -0.3, 2.6, 2.6,
      0.4, 0.9, 1.9, 1.5, -0.3, 0.2,  2.6, 2.2,
  };
  const std::vector<std::uint32_t> pair_a{0, 2, 4, 6};
  const std::vector<std::uint32_t> pair_b{1, 3, 5, 7};

  TwinFieldConfig config;
  config.n_walks = 3000;
  config.seed = 19;
  config.report_every = 100;
  const auto res = run_twin_field(matrix, 2, 8, pair_a, pair_b, config);
  const auto res2 = run_twin_field(matrix, 2, 8, pair_a, pair_b, config);

  CHECK(res.mean_correlation == res2.mean_correlation);
  REQUIRE(res.correlation_ok[0] == 1);
  REQUIRE(res.correlation_ok[1] == 1);
  CHECK(res.mean_correlation[0] == 1.0);
  CHECK(res.mean_correlation[1] > -1.0);
  CHECK(res.mean_correlation[1] < 1.0);
  CHECK(res.n_walks == 3000);
  CHECK(res.stat_evaluations == 3000 * 2);
  CHECK(res.degenerate_count[0] == 0);
}

TEST_CASE("twin field validates its pair columns")
{
  const auto matrix = normal_matrix(1, 6, 4);
  const std::vector<std::uint32_t> a{0, 2, 4};
  const std::vector<std::uint32_t> b{1, 3, 5};
  TwinFieldConfig config;
  config.n_walks = 10;

  const std::vector<std::uint32_t> short_b{1, 3};
  CHECK(thrown_code([&] { (void)run_twin_field(matrix, 1, 6, a, short_b, config); }) ==
        errc::length_mismatch);

  const std::vector<std::uint32_t> oob{1, 3, 6};
  CHECK(thrown_code([&] { (void)run_twin_field(matrix, 1, 6, a, oob, config); }) ==
        errc::index_out_of_range);

  const std::vector<std::uint32_t> self_pair{0, 2, 4};
  CHECK(thrown_code([&] { (void)run_twin_field(matrix, 1, 6, a, self_pair, config); }) ==
        errc::invalid_argument);

  const std::vector<std::uint32_t> one_a{0}, one_b{1};
  CHECK(thrown_code([&] { (void)run_twin_field(matrix, 1, 6, one_a, one_b, config); }) ==
        errc::invalid_argument);
}
