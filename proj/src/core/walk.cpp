#include "permwalk/walk.hpp"

#include <numeric>

namespace permwalk {

TwoSampleField::TwoSampleField(std::span<const double> matrix, std::size_t n_vertices,
                               std::size_t m, std::size_t n)
    : m_(m), n_(n)
{
  if (n_vertices < 1) throw_error(errc::invalid_argument, "field needs at least one vertex");
  if (matrix.size() != n_vertices * (m + n))
    throw_error(errc::length_mismatch, "matrix size does not match n_vertices*(m+n)");
  states_.reserve(n_vertices);
  for (std::size_t v = 0; v < n_vertices; ++v) {
    const double* row = matrix.data() + v * (m + n);
    states_.emplace_back(std::span<const double>(row, m), std::span<const double>(row + m, n));
  }
  origin_x_.assign(m, 0);
  origin_y_.assign(n, 1);
}

void TwoSampleField::apply_swap(WalkPair t)
{
  if (t.i >= m_ || t.j >= n_) throw_error(errc::index_out_of_range, "swap index out of range");
  for (auto& s : states_) s.apply_swap(t);
  std::swap(origin_x_[t.i], origin_y_[t.j]);
}

double TwoSampleField::mixing_proportion() const
{
  const auto moved = std::accumulate(origin_x_.begin(), origin_x_.end(), std::size_t{0});
  return static_cast<double>(moved) / static_cast<double>(m_);
}

MixingEstimate estimate_mixing(std::size_t m, std::size_t n, std::uint64_t n_walks,
                               std::uint32_t n_reps, std::uint64_t seed)
{
  if (m < 1 || n < 1) throw_error(errc::invalid_argument, "group sizes must be >= 1");
  if (n_walks < 1 || n_reps < 1)
    throw_error(errc::invalid_argument, "n_walks and n_reps must be >= 1");

  MixingEstimate est;
  est.n_reps = n_reps;
  est.proportion.assign(n_walks + 1, 0.0);

  // Only the origin marks matter here; values never enter the proportion.
  std::vector<std::uint8_t> origin_x(m), origin_y(n);
  for (std::uint32_t rep = 0; rep < n_reps; ++rep) {
    RandomStream rng = RandomStream::for_chain(seed, rep);
    std::fill(origin_x.begin(), origin_x.end(), std::uint8_t{0});
    std::fill(origin_y.begin(), origin_y.end(), std::uint8_t{1});
    std::uint64_t in_x = 0;  // y-origin elements currently in x slots
    for (std::uint64_t k = 1; k <= n_walks; ++k) {
      const auto i = rng.uniform_index(m);
      const auto j = rng.uniform_index(n);
      if (origin_x[i] != origin_y[j]) {
        in_x += origin_y[j] ? 1 : -1;
        std::swap(origin_x[i], origin_y[j]);
      }
      est.proportion[k] += static_cast<double>(in_x) / static_cast<double>(m);
    }
  }
  for (auto& p : est.proportion) p /= static_cast<double>(n_reps);
  return est;
}

}  // namespace permwalk
