#include "permwalk/permutation.hpp"

#include <algorithm>
#include <string>

#include "permwalk/error.hpp"

namespace permwalk {

Permutation::Permutation(std::vector<std::uint32_t> mapping) : mapping_(std::move(mapping))
{
  const std::size_t n = mapping_.size();
  std::vector<bool> seen(n, false);
  for (std::uint32_t v : mapping_) {
    if (v >= n || seen[v])
      throw_error(errc::invalid_argument, "mapping is not a bijection on {0.." +
                                              std::to_string(n == 0 ? 0 : n - 1) + "}");
    seen[v] = true;
  }
}

Permutation Permutation::identity(std::size_t n)
{
  std::vector<std::uint32_t> m(n);
  for (std::size_t k = 0; k < n; ++k) m[k] = static_cast<std::uint32_t>(k);
  return Permutation(std::move(m), unchecked_tag{});
}

Permutation Permutation::inverse() const
{
  std::vector<std::uint32_t> inv(mapping_.size());
  for (std::uint32_t k = 0; k < mapping_.size(); ++k) inv[mapping_[k]] = k;
  return Permutation(std::move(inv), unchecked_tag{});
}

bool Permutation::is_identity() const
{
  for (std::uint32_t k = 0; k < mapping_.size(); ++k)
    if (mapping_[k] != k) return false;
  return true;
}

Permutation compose(const Permutation& p, const Permutation& q)
{
  if (p.size() != q.size())
    throw_error(errc::length_mismatch, "compose: permutations have different lengths");
  std::vector<std::uint32_t> out(p.size());
  for (std::uint32_t k = 0; k < p.size(); ++k) out[k] = p(q(k));
  return Permutation(std::move(out), Permutation::unchecked_tag{});
}

std::vector<Cycle> cycle_decompose(const Permutation& p)
{
  const std::size_t n = p.size();
  std::vector<Cycle> cycles;
  std::vector<bool> covered(n, false);
  for (std::uint32_t start = 0; start < n; ++start) {
    if (covered[start]) continue;
    Cycle c;
    std::uint32_t k = start;
    do {
      c.push_back(k);
      covered[k] = true;
      k = p(k);
    } while (k != start);
    cycles.push_back(std::move(c));
  }
  return cycles;
}

std::vector<IndexSwap> cycle_to_transpositions(const Cycle& cycle)
{
  if (cycle.empty()) throw_error(errc::invalid_argument, "empty cycle");
  std::vector<IndexSwap> out;
  out.reserve(cycle.size() - 1);
  for (std::size_t k = cycle.size() - 1; k >= 1; --k) out.push_back({cycle[0], cycle[k]});
  return out;
}

std::vector<IndexSwap> factor_into_walks(const Permutation& p)
{
  std::vector<IndexSwap> walks;
  for (const Cycle& c : cycle_decompose(p)) {
    auto factors = cycle_to_transpositions(c);
    // Reverse into application order; disjoint cycles commute, so the
    // per-cycle blocks may be concatenated in any order.
    walks.insert(walks.end(), factors.rbegin(), factors.rend());
  }
  return walks;
}

Permutation apply_transposition(const Permutation& p, IndexSwap t)
{
  if (t.a >= p.size() || t.b >= p.size())
    throw_error(errc::index_out_of_range, "transposition index out of range");
  if (t.a == t.b) throw_error(errc::invalid_argument, "transposition must move two positions");
  std::vector<std::uint32_t> out = p.mapping();
  for (auto& v : out) {
    if (v == t.a)
      v = t.b;
    else if (v == t.b)
      v = t.a;
  }
  return Permutation(std::move(out));
}

namespace detail {

void empty_group_error()
{
  throw_error(errc::invalid_argument, "both groups must be nonempty to sample a walk");
}

}  // namespace detail

}  // namespace permwalk
