#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "permwalk/random_stream.hpp"

namespace permwalk {

/// A bijection on {0, ..., size()-1}, stored as its one-line mapping.
/// Positions are 0-based throughout the library.
class Permutation {
public:
  /// Validates that `mapping` is a bijection.
  explicit Permutation(std::vector<std::uint32_t> mapping);

  static Permutation identity(std::size_t n);

  std::size_t size() const { return mapping_.size(); }

  /// Image of k under the permutation.
  std::uint32_t operator()(std::uint32_t k) const { return mapping_[k]; }

  Permutation inverse() const;

  bool is_identity() const;

  const std::vector<std::uint32_t>& mapping() const { return mapping_; }

  friend bool operator==(const Permutation& a, const Permutation& b) = default;

private:
  struct unchecked_tag {};
  Permutation(std::vector<std::uint32_t> mapping, unchecked_tag) : mapping_(std::move(mapping)) {}

  std::vector<std::uint32_t> mapping_;

  friend Permutation compose(const Permutation&, const Permutation&);
};

/// An orbit (x, p(x), p^2(x), ...) of a permutation, listed in traversal order.
using Cycle = std::vector<std::uint32_t>;

/// A 2-cycle on raw positions a != b of the combined index set.
struct IndexSwap {
  std::uint32_t a;
  std::uint32_t b;

  friend bool operator==(const IndexSwap&, const IndexSwap&) = default;
};

/// A between-group walk: exchange x[i] with y[j] (0-based within each group).
struct WalkPair {
  std::uint32_t i;
  std::uint32_t j;

  friend bool operator==(const WalkPair&, const WalkPair&) = default;
};

/// Composition with the rightmost factor applied first: compose(p, q)(k) = p(q(k)).
Permutation compose(const Permutation& p, const Permutation& q);

/// Disjoint cycles covering every position, length-1 cycles included.
/// Each cycle starts at its smallest member and cycles are ordered by that
/// member, so the output is canonical.
std::vector<Cycle> cycle_decompose(const Permutation& p);

/// Factor a cycle into 2-cycles:
///   (c0 c1 ... cj) = [c0,cj] . [c0,cj-1] ... [c0,c1]
/// The returned list is in product order; the *last* element is applied
/// first. A length-1 cycle yields an empty list.
std::vector<IndexSwap> cycle_to_transpositions(const Cycle& cycle);

/// Factor a permutation into transpositions, returned in application order:
/// applying them left to right, starting from the identity, reproduces `p`
/// exactly. The identity yields an empty list.
std::vector<IndexSwap> factor_into_walks(const Permutation& p);

/// Apply a raw transposition to a permutation: result = [a,b] . p.
Permutation apply_transposition(const Permutation& p, IndexSwap t);

namespace detail {
[[noreturn]] void empty_group_error();
}

/// Draw i uniform on {0..m-1} and j uniform on {0..n-1}, independently.
inline WalkPair sample_between_group_transposition(RandomStream& rng, std::size_t m, std::size_t n)
{
  if (m == 0 || n == 0) detail::empty_group_error();
  const auto i = static_cast<std::uint32_t>(rng.uniform_index(m));
  const auto j = static_cast<std::uint32_t>(rng.uniform_index(n));
  return {i, j};
}

}  // namespace permwalk
