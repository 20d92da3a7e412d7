#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <functional>
#include <limits>
#include <vector>

#include "permwalk/error.hpp"
#include "permwalk/paired.hpp"
#include "permwalk/random_stream.hpp"

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

TEST_CASE("covariance accumulator on a worked example")
{
  // x = (1,2,3), y = (6,5,4): om_xy = 3*28 - 6*15 = -6, rho = -6/(3*2) = -1.
  PairedState state(std::vector<double>{1, 2, 3}, std::vector<double>{6, 5, 4});
  CHECK(state.om_xy() == doctest::Approx(-6.0).epsilon(1e-14));
  REQUIRE(state.correlation().has_value());
  CHECK(*state.correlation() == doctest::Approx(-1.0).epsilon(1e-14));

  // Swap pair 0: x = (6,2,3), y = (1,5,4). Sum(x_k*y_k) is unchanged, so
  // om_xy = 3*28 - 11*10 = -26; the O(1) update must land there too.
  state.apply_pair_swap(0);
  CHECK(state.nu_x() == doctest::Approx(11.0).epsilon(1e-14));
  CHECK(state.nu_y() == doctest::Approx(10.0).epsilon(1e-14));
  CHECK(state.om_xy() == doctest::Approx(-26.0).epsilon(1e-13));
  const auto direct = direct_corr(state.x_values(), state.y_values());
  REQUIRE(direct.has_value());
  CHECK(*state.correlation() == doctest::Approx(*direct).epsilon(1e-13));
}

TEST_CASE("direct_corr matches an independently computed value")
{
  const std::vector<double> a{0.2, 1.9, -0.4, 2.7, 1.1, 0.6};
  const std::vector<double> b{1.0, 2.1, 0.3, 2.2, 0.8, 1.4};
  const auto rho = direct_corr(a, b);
  REQUIRE(rho.has_value());
  CHECK(*rho == doctest::Approx(0.8929114350188112).epsilon(1e-12));
}

TEST_CASE("incremental pair swaps track the direct recomputation")
{
  RandomStream rng(31);
  std::vector<double> a(8), b(8);
  for (auto& v : a) v = rng.normal();
  for (auto& v : b) v = rng.normal();
  PairedState state(a, b);

  for (int k = 0; k < 2000; ++k) {
    state.apply_pair_swap(rng.uniform_index(state.n()));
    const auto direct = direct_corr(state.x_values(), state.y_values());
    REQUIRE(state.correlation().has_value());
    REQUIRE(direct.has_value());
    CHECK(*state.correlation() == doctest::Approx(*direct).epsilon(1e-11));
  }
}

TEST_CASE("a pair swap applied twice restores the state")
{
  PairedState state(std::vector<double>{1.3, -0.2, 0.7, 2.1},
                    std::vector<double>{0.9, 0.1, 1.4, 1.8});
  const double rho0 = *state.correlation();
  state.apply_pair_swap(2);
  state.apply_pair_swap(2);
  CHECK(state.x_values()[2] == 0.7);
  CHECK(state.y_values()[2] == 1.4);
  CHECK(*state.correlation() == doctest::Approx(rho0).epsilon(1e-12));
}

TEST_CASE("correlation is clamped and degenerate margins are reported")
{
  // Perfectly linear pairs: the clamp pins the value to exactly 1.
  PairedState linear(std::vector<double>{1, 2, 3, 4}, std::vector<double>{2, 4, 6, 8});
  REQUIRE(linear.correlation().has_value());
  CHECK(*linear.correlation() == 1.0);

  PairedState flat(std::vector<double>{1, 1, 1}, std::vector<double>{0.5, 1.5, 2.5});
  CHECK_FALSE(flat.correlation().has_value());
  CHECK_FALSE(direct_corr(std::vector<double>{1, 1}, std::vector<double>{3, 4}).has_value());
}

TEST_CASE("reinitialize recomputes the sums from the contents")
{
  RandomStream rng(37);
  std::vector<double> a(6), b(6);
  for (auto& v : a) v = rng.uniform();
  for (auto& v : b) v = rng.uniform();
  PairedState state(a, b);
  for (int k = 0; k < 500; ++k) state.apply_pair_swap(rng.uniform_index(6));
  const double before = *state.correlation();
  state.reinitialize();
  CHECK(*state.correlation() == doctest::Approx(before).epsilon(1e-12));
}

TEST_CASE("construction and swaps validate their inputs")
{
  CHECK(thrown_code([] {
          PairedState s(std::vector<double>{1.0, 2.0}, std::vector<double>{1.0});
        }) == errc::length_mismatch);
  CHECK(thrown_code([] {
          PairedState s(std::vector<double>{1.0}, std::vector<double>{2.0});
        }) == errc::invalid_argument);
  const double nan = std::numeric_limits<double>::quiet_NaN();
  CHECK(thrown_code([&] {
          PairedState s(std::vector<double>{1.0, nan}, std::vector<double>{1.0, 2.0});
        }) == errc::nonfinite_value);
  CHECK(thrown_code([] {
          PairedState s(std::vector<double>{1.0, 2.0}, std::vector<double>{3.0, 4.0});
          s.apply_pair_swap(2);
        }) == errc::index_out_of_range);
}
