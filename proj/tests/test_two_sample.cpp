#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <functional>
#include <limits>
#include <vector>

#include "permwalk/error.hpp"
#include "permwalk/random_stream.hpp"
#include "permwalk/two_sample.hpp"

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

}  // namespace

TEST_CASE("accumulators and statistic on a worked example")
{
  // x = (1,2,3), y = (4,5,6): nu_x = 6, nu_y = 15, om2_x = om2_y = 2,
  // t = (2-5)/sqrt((4/4)*(2/3)) = -3/sqrt(2/3).
  TwoSampleState state(std::vector<double>{1, 2, 3}, std::vector<double>{4, 5, 6});
  CHECK(state.nu_x() == doctest::Approx(6.0).epsilon(1e-14));
  CHECK(state.nu_y() == doctest::Approx(15.0).epsilon(1e-14));
  CHECK(state.om2_x() == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(state.om2_y() == doctest::Approx(2.0).epsilon(1e-14));
  REQUIRE(state.t_statistic().has_value());
  CHECK(*state.t_statistic() == doctest::Approx(-3.0 / std::sqrt(2.0 / 3.0)).epsilon(1e-12));

  // Swapping x[0]=1 with y[0]=4: x = (4,2,3), y = (1,5,6).
  state.apply_swap({0, 0});
  CHECK(state.nu_x() == doctest::Approx(9.0).epsilon(1e-14));
  CHECK(state.nu_y() == doctest::Approx(12.0).epsilon(1e-14));
  CHECK(state.om2_x() == doctest::Approx(2.0).epsilon(1e-13));
  CHECK(state.om2_y() == doctest::Approx(14.0).epsilon(1e-13));
  REQUIRE(state.t_statistic().has_value());
  CHECK(*state.t_statistic() == doctest::Approx(-1.0 / std::sqrt(8.0 / 3.0)).epsilon(1e-12));
  CHECK(state.x_values()[0] == 4.0);
  CHECK(state.y_values()[0] == 1.0);
}

TEST_CASE("direct_t matches an independently computed value")
{
  // Pooled-variance two-sample t for these arrays, computed externally.
  const std::vector<double> x{0.3, 1.7, 2.2, 0.9, 1.4};
  const std::vector<double> y{1.1, 2.8, 2.4, 1.9};
  const auto t = direct_t(x, y);
  REQUIRE(t.has_value());
  CHECK(*t == doctest::Approx(-1.5275252316519463).epsilon(1e-12));
}

TEST_CASE("incremental updates track the direct recomputation")
{
  RandomStream rng(17);
  std::vector<double> x(9), y(6);
  for (auto& v : x) v = rng.normal();
  for (auto& v : y) v = rng.normal();
  TwoSampleState state(x, y);

  for (int k = 0; k < 2000; ++k) {
    state.apply_swap(sample_between_group_transposition(rng, state.m(), state.n()));
    const auto direct = direct_t(state.x_values(), state.y_values());
    REQUIRE(state.t_statistic().has_value());
    REQUIRE(direct.has_value());
    CHECK(*state.t_statistic() == doctest::Approx(*direct).epsilon(1e-11));
  }
}

TEST_CASE("a swap applied twice restores the state")
{
  TwoSampleState state(std::vector<double>{1.5, -0.3, 2.2}, std::vector<double>{0.7, 1.1, -0.9, 0.4});
  const double t0 = *state.t_statistic();
  state.apply_swap({2, 1});
  state.apply_swap({2, 1});
  CHECK(state.x_values()[2] == 2.2);
  CHECK(state.y_values()[1] == 1.1);
  CHECK(*state.t_statistic() == doctest::Approx(t0).epsilon(1e-12));
}

TEST_CASE("degenerate pooled variance yields no statistic")
{
  TwoSampleState state(std::vector<double>{2.0, 2.0, 2.0}, std::vector<double>{2.0, 2.0});
  CHECK_FALSE(state.t_statistic().has_value());
  CHECK_FALSE(direct_t(std::vector<double>{1, 1}, std::vector<double>{1, 1}).has_value());
}

TEST_CASE("reinitialize recomputes the sums from the contents")
{
  RandomStream rng(23);
  std::vector<double> x(5), y(5);
  for (auto& v : x) v = rng.uniform();
  for (auto& v : y) v = rng.uniform();
  TwoSampleState state(x, y);
  for (int k = 0; k < 500; ++k)
    state.apply_swap(sample_between_group_transposition(rng, 5, 5));
  const double before = *state.t_statistic();
  state.reinitialize();
  CHECK(*state.t_statistic() == doctest::Approx(before).epsilon(1e-12));
  CHECK(*state.t_statistic() ==
        doctest::Approx(*direct_t(state.x_values(), state.y_values())).epsilon(1e-14));
}

TEST_CASE("construction and swaps validate their inputs")
{
  const std::vector<double> ok{1.0, 2.0};
  CHECK(thrown_code([&] { TwoSampleState s(std::vector<double>{1.0}, ok); }) ==
        errc::invalid_argument);
  CHECK(thrown_code([&] { TwoSampleState s(ok, {}); }) == errc::invalid_argument);
  const double inf = std::numeric_limits<double>::infinity();
  CHECK(thrown_code([&] { TwoSampleState s(std::vector<double>{1.0, inf}, ok); }) ==
        errc::nonfinite_value);
  CHECK(thrown_code([&] {
          TwoSampleState s(ok, ok);
          s.apply_swap({2, 0});
        }) == errc::index_out_of_range);
  CHECK(thrown_code([&] {
          TwoSampleState s(ok, ok);
          s.apply_swap({0, 2});
        }) == errc::index_out_of_range);
}
