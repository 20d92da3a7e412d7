#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <functional>
#include <optional>
#include <vector>

#include "permwalk/error.hpp"
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

std::vector<double> collect_walk_ts(std::uint64_t seed, std::uint64_t n_walks,
                                    std::uint64_t burnin = 0)
{
  TwoSampleState state(std::vector<double>{0.3, 1.7, 2.2, 0.9},
                       std::vector<double>{1.1, 2.8, 2.4});
  WalkPlan plan;
  plan.n_walks = n_walks;
  plan.seed = seed;
  plan.burnin = burnin;
  std::vector<double> ts;
  run_walks(state, plan, [&](std::uint64_t, const std::optional<double>& t) {
    REQUIRE(t.has_value());
    ts.push_back(*t);
  });
  return ts;
}

}  // namespace

TEST_CASE("walk sequences are deterministic in the seed")
{
  const auto a = collect_walk_ts(5, 200);
  const auto b = collect_walk_ts(5, 200);
  const auto c = collect_walk_ts(6, 200);
  CHECK(a == b);
  CHECK(a != c);
}

TEST_CASE("observer sees consecutive walk indices starting at one")
{
  TwoSampleState state(std::vector<double>{1, 2, 3}, std::vector<double>{4, 5, 6});
  WalkPlan plan;
  plan.n_walks = 50;
  plan.seed = 9;
  std::uint64_t expected = 0;
  run_walks(state, plan, [&](std::uint64_t k, const std::optional<double>&) {
    CHECK(k == ++expected);
  });
  CHECK(expected == 50);
}

TEST_CASE("burn-in walks advance the chain without being observed")
{
  // burnin B + W observed walks consume the same stream as B+W observed
  // walks, so the final statistics agree exactly.
  const auto with_burnin = collect_walk_ts(13, 40, 10);
  const auto plain = collect_walk_ts(13, 50, 0);
  REQUIRE(with_burnin.size() == 40);
  REQUIRE(plain.size() == 50);
  CHECK(with_burnin.back() == plain.back());
  CHECK(std::equal(with_burnin.begin(), with_burnin.end(), plain.begin() + 10));
}

TEST_CASE("walks permute the pooled values without changing the multiset")
{
  RandomStream rng(3);
  std::vector<double> x(6), y(9);
  for (auto& v : x) v = rng.normal();
  for (auto& v : y) v = rng.normal();
  std::vector<double> pooled(x.begin(), x.end());
  pooled.insert(pooled.end(), y.begin(), y.end());
  std::sort(pooled.begin(), pooled.end());

  TwoSampleState state(x, y);
  WalkPlan plan;
  plan.n_walks = 5000;
  plan.seed = 21;
  run_walks(state, plan, [](std::uint64_t, const std::optional<double>&) {});

  std::vector<double> after(state.x_values().begin(), state.x_values().end());
  after.insert(after.end(), state.y_values().begin(), state.y_values().end());
  std::sort(after.begin(), after.end());
  CHECK(after == pooled);
}

TEST_CASE("plan validation rejects zero walks")
{
  TwoSampleState state(std::vector<double>{1, 2}, std::vector<double>{3, 4});
  WalkPlan plan;
  plan.n_walks = 0;
  CHECK(thrown_code([&] {
          run_walks(state, plan, [](std::uint64_t, const std::optional<double>&) {});
        }) == errc::invalid_argument);
}

TEST_CASE("a single-vertex field reproduces the plain walk")
{
  const std::vector<double> row{0.3, 1.7, 2.2, 0.9, 1.1, 2.8, 2.4};
  TwoSampleField field(row, 1, 4, 3);
  WalkPlan plan;
  plan.n_walks = 300;
  plan.seed = 5;
  std::vector<double> field_ts;
  run_walks_field(field, plan,
                  [&](std::uint64_t, std::span<const std::optional<double>> stats) {
                    REQUIRE(stats.size() == 1);
                    REQUIRE(stats[0].has_value());
                    field_ts.push_back(*stats[0]);
                  });
  CHECK(field_ts == collect_walk_ts(5, 300));
}

TEST_CASE("every vertex of a field sees the same subject-level swap")
{
  // Second row is an affine image of the first; the t statistic of an
  // affine-in-value row differs, but both vertices must swap in lockstep.
  std::vector<double> matrix;
  const std::vector<double> base{0.3, 1.7, 2.2, 0.9, 1.1, 2.8, 2.4};
  matrix.insert(matrix.end(), base.begin(), base.end());
  for (double v : base) matrix.push_back(2.0 * v + 1.0);
  TwoSampleField field(matrix, 2, 4, 3);

  WalkPlan plan;
  plan.n_walks = 200;
  plan.seed = 77;
  run_walks_field(field, plan,
                  [&](std::uint64_t, std::span<const std::optional<double>> stats) {
                    REQUIRE(stats[0].has_value());
                    REQUIRE(stats[1].has_value());
                    // t is invariant under positive affine maps of the data.
                    CHECK(*stats[0] == doctest::Approx(*stats[1]).epsilon(1e-9));
                  });
}

TEST_CASE("field construction validates the matrix shape")
{
  const std::vector<double> row{1, 2, 3, 4};
  CHECK(thrown_code([&] { TwoSampleField f(row, 1, 3, 2); }) == errc::length_mismatch);
  CHECK(thrown_code([&] { TwoSampleField f(row, 0, 2, 2); }) == errc::invalid_argument);
}

TEST_CASE("mixing proportion starts at zero and reacts to swaps")
{
  const std::vector<double> row{1, 2, 3, 4, 5};
  TwoSampleField field(row, 1, 3, 2);
  CHECK(field.mixing_proportion() == 0.0);
  field.apply_swap({0, 0});
  CHECK(field.mixing_proportion() == doctest::Approx(1.0 / 3.0));
  field.apply_swap({0, 0});  // swaps the y-origin element straight back
  CHECK(field.mixing_proportion() == 0.0);
}

TEST_CASE("mixing estimate alternates exactly for one-element groups")
{
  // With m = n = 1 every walk exchanges the two elements, so the proportion
  // alternates 0,1,0,1,... deterministically.
  const auto est = estimate_mixing(1, 1, 6, 3, 99);
  REQUIRE(est.proportion.size() == 7);
  for (std::size_t k = 0; k < est.proportion.size(); ++k)
    CHECK(est.proportion[k] == (k % 2 == 0 ? 0.0 : 1.0));
}

TEST_CASE("mixing estimate validates its arguments")
{
  CHECK(thrown_code([] { estimate_mixing(0, 3, 10, 1, 0); }) == errc::invalid_argument);
  CHECK(thrown_code([] { estimate_mixing(3, 3, 0, 1, 0); }) == errc::invalid_argument);
  CHECK(thrown_code([] { estimate_mixing(3, 3, 10, 0, 0); }) == errc::invalid_argument);
}
