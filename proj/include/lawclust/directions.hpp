// Brownian-bridge random directions with reproducible per-direction streams.
#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <utility>
#include <vector>

#include "lawclust/errors.hpp"
#include "lawclust/rng.hpp"
#include "lawclust/types.hpp"

namespace lawclust {

namespace detail {
// Stream label separating direction sampling from other consumers of a seed.
inline constexpr std::uint64_t kDirectionStream = 0x6469u;  // "di"
}  // namespace detail

// M independent Brownian-bridge paths on a common grid.
struct DirectionSet {
  Grid grid;
  std::uint64_t seed = 0;
  std::vector<std::vector<double>> paths;  // each has one value per grid point

  std::size_t count() const { return paths.size(); }
};

// Wiener path on the grid: W(t_0) = 0, independent Gaussian increments with
// variance t_{i+1} - t_i.
inline std::vector<double> sample_wiener(const Grid& grid, std::mt19937_64& rng) {
  const auto& t = grid.times();
  std::vector<double> incr(t.size() - 1);
  fill_standard_normal(incr, rng);
  std::vector<double> w(t.size());
  w[0] = 0.0;
  for (std::size_t i = 0; i + 1 < t.size(); ++i)
    w[i + 1] = w[i] + std::sqrt(t[i + 1] - t[i]) * incr[i];
  return w;
}

// Brownian bridge B(t) = W(t) - (t/T) W(T). Endpoints are set to 0 exactly.
inline std::vector<double> sample_brownian_bridge(const Grid& grid, std::mt19937_64& rng) {
  std::vector<double> b = sample_wiener(grid, rng);
  const double w_end = b.back();
  const double inv_t = 1.0 / grid.horizon();
  const auto& t = grid.times();
  for (std::size_t i = 1; i + 1 < b.size(); ++i) b[i] -= t[i] * inv_t * w_end;
  b.front() = 0.0;
  b.back() = 0.0;
  return b;
}

// M bridges, direction m drawn from the sub-stream (seed, m). Generation
// order cannot change the result, so directions may be filled in parallel.
inline DirectionSet sample_directions(const Grid& grid, std::size_t m_directions,
                                      std::uint64_t seed) {
  if (m_directions == 0) throw InvalidCount("direction count must be at least 1");
  DirectionSet out{grid, seed, {}};
  out.paths.resize(m_directions);
  for (std::size_t m = 0; m < m_directions; ++m) {
    std::mt19937_64 rng(derive_seed(seed, detail::kDirectionStream, m));
    out.paths[m] = sample_brownian_bridge(grid, rng);
  }
  return out;
}

}  // namespace lawclust
