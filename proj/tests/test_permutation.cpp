#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cstdlib>
#include <functional>
#include <numeric>
#include <vector>

#include "permwalk/error.hpp"
#include "permwalk/permutation.hpp"
#include "permwalk/random_stream.hpp"

using namespace permwalk;

namespace {

/// Uniform random permutation of size l (Fisher-Yates).
Permutation random_permutation(RandomStream& rng, std::size_t l)
{
  std::vector<std::uint32_t> mapping(l);
  std::iota(mapping.begin(), mapping.end(), 0u);
  for (std::size_t k = l; k > 1; --k)
    std::swap(mapping[k - 1], mapping[rng.uniform_index(k)]);
  return Permutation(std::move(mapping));
}

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

TEST_CASE("constructor validates bijections")
{
  CHECK(thrown_code([] { Permutation p({0, 0, 2}); }) == errc::invalid_argument);
  CHECK(thrown_code([] { Permutation p({0, 3, 1}); }) == errc::invalid_argument);
  CHECK_NOTHROW(Permutation({2, 0, 1}));
}

TEST_CASE("identity maps every element to itself")
{
  const auto id = Permutation::identity(5);
  CHECK(id.is_identity());
  for (std::uint32_t k = 0; k < 5; ++k) CHECK(id(k) == k);
}

TEST_CASE("compose applies the right factor first")
{
  // p = (0 1 2) as one-line [1,2,0]; q exchanges 0 and 1.
  const Permutation p({1, 2, 0});
  const Permutation q({1, 0, 2});
  const auto pq = compose(p, q);
  CHECK(pq.mapping() == std::vector<std::uint32_t>{2, 1, 0});
  const auto qp = compose(q, p);
  CHECK(qp.mapping() == std::vector<std::uint32_t>{0, 2, 1});
}

TEST_CASE("inverse composes to the identity")
{
  RandomStream rng(11);
  for (int rep = 0; rep < 50; ++rep) {
    const auto p = random_permutation(rng, 1 + rng.uniform_index(10));
    CHECK(compose(p, p.inverse()).is_identity());
    CHECK(compose(p.inverse(), p).is_identity());
  }
}

TEST_CASE("cycle decomposition is canonical and complete")
{
  // 0 -> 1 -> 2 -> 0, 3 <-> 4, 5 fixed.
  const Permutation p({1, 2, 0, 4, 3, 5});
  const auto cycles = cycle_decompose(p);
  REQUIRE(cycles.size() == 3);
  CHECK(cycles[0] == Cycle{0, 1, 2});
  CHECK(cycles[1] == Cycle{3, 4});
  CHECK(cycles[2] == Cycle{5});
}

TEST_CASE("cycle factorization is in product order")
{
  // (c0 c1 c2) = [c0,c2] . [c0,c1]: the last transposition acts first.
  const auto ts = cycle_to_transpositions({0, 1, 2});
  REQUIRE(ts.size() == 2);
  CHECK(ts[0] == IndexSwap{0, 2});
  CHECK(ts[1] == IndexSwap{0, 1});

  auto p = Permutation::identity(3);
  for (auto it = ts.rbegin(); it != ts.rend(); ++it) p = apply_transposition(p, *it);
  CHECK(p.mapping() == std::vector<std::uint32_t>{1, 2, 0});

  CHECK(cycle_to_transpositions({4}).empty());
}

TEST_CASE("factor_into_walks reconstructs the permutation exactly")
{
  CHECK(factor_into_walks(Permutation::identity(6)).empty());

  RandomStream rng(29);
  for (int rep = 0; rep < 200; ++rep) {
    const std::size_t l = 1 + rng.uniform_index(8);
    const auto target = random_permutation(rng, l);
    const auto walks = factor_into_walks(target);
    CHECK(walks.size() <= (l > 0 ? l - 1 : 0));
    auto rebuilt = Permutation::identity(l);
    for (const auto& t : walks) rebuilt = apply_transposition(rebuilt, t);
    CHECK(rebuilt == target);
  }
}

TEST_CASE("apply_transposition composes on the left")
{
  const Permutation p({1, 2, 0});
  // [0,1] . p: images 0 and 1 trade places wherever they occur.
  const auto q = apply_transposition(p, {0, 1});
  CHECK(q.mapping() == std::vector<std::uint32_t>{0, 2, 1});
}

TEST_CASE("between-group sampler stays in range and is roughly uniform")
{
  RandomStream rng(3);
  const std::size_t m = 3, n = 2;
  std::vector<std::uint64_t> counts(m * n, 0);
  const std::uint64_t draws = 60'000;
  for (std::uint64_t k = 0; k < draws; ++k) {
    const auto t = sample_between_group_transposition(rng, m, n);
    REQUIRE(t.i < m);
    REQUIRE(t.j < n);
    ++counts[t.i * n + t.j];
  }
  // Expected 10000 per cell; 500 is about 5.5 standard deviations.
  for (const auto c : counts) CHECK(std::llabs(static_cast<long long>(c) - 10'000) < 500);
}

TEST_CASE("between-group sampler rejects empty groups")
{
  RandomStream rng(1);
  CHECK(thrown_code([&] { sample_between_group_transposition(rng, 0, 4); }) ==
        errc::invalid_argument);
  CHECK(thrown_code([&] { sample_between_group_transposition(rng, 4, 0); }) ==
        errc::invalid_argument);
}

TEST_CASE("random streams are deterministic and chain-independent")
{
  RandomStream a(42), b(42);
  for (int k = 0; k < 100; ++k) CHECK(a.next_u64() == b.next_u64());

  auto c0 = RandomStream::for_chain(42, 0);
  auto c1 = RandomStream::for_chain(42, 1);
  CHECK(c0.next_u64() != c1.next_u64());

  RandomStream u(7);
  for (int k = 0; k < 1000; ++k) {
    const double v = u.uniform();
    CHECK(v >= 0.0);
    CHECK(v < 1.0);
  }
}
