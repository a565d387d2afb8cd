#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "lawclust/directions.hpp"
#include "lawclust/rng.hpp"
#include "lawclust/types.hpp"

using namespace lawclust;

namespace {

double sample_variance(const std::vector<double>& v) {
  double mean = 0.0;
  for (double x : v) mean += x;
  mean /= static_cast<double>(v.size());
  double sq = 0.0;
  for (double x : v) sq += (x - mean) * (x - mean);
  return sq / static_cast<double>(v.size() - 1);
}

}  // namespace

TEST_CASE("derive_seed is deterministic and order-sensitive") {
  CHECK(derive_seed(7, 1, 2) == derive_seed(7, 1, 2));
  CHECK(derive_seed(7, 1, 2) != derive_seed(7, 2, 1));
  CHECK(derive_seed(7, 1) != derive_seed(8, 1));
}

TEST_CASE("wiener path starts at zero and is seed-deterministic") {
  const Grid g = Grid::uniform(80, 1.0);
  std::mt19937_64 a(42), b(42);
  const auto wa = sample_wiener(g, a);
  const auto wb = sample_wiener(g, b);
  CHECK(wa[0] == 0.0);
  CHECK(wa == wb);
}

TEST_CASE("wiener terminal variance matches the horizon") {
  // Monte Carlo oracle: Var W(T) = T
  const Grid g = Grid::uniform(80, 1.0);
  std::mt19937_64 rng(20240101);
  std::vector<double> terminal(10000);
  for (auto& v : terminal) v = sample_wiener(g, rng).back();
  CHECK(sample_variance(terminal) == doctest::Approx(1.0).epsilon(0.05));
}

TEST_CASE("brownian bridge pins both endpoints exactly") {
  const Grid g = Grid::uniform(80, 1.0);
  std::mt19937_64 rng(7);
  for (int i = 0; i < 50; ++i) {
    const auto b = sample_brownian_bridge(g, rng);
    CHECK(b.front() == 0.0);
    CHECK(b.back() == 0.0);
  }
}

TEST_CASE("bridge mid-point variance matches t(T-t)/T") {
  // odd point count so the grid hits T/2 exactly; Var B(T/2) = 1/4
  const Grid g = Grid::uniform(81, 1.0);
  std::mt19937_64 rng(20240102);
  std::vector<double> mid(10000);
  for (auto& v : mid) v = sample_brownian_bridge(g, rng)[40];
  CHECK(sample_variance(mid) == doctest::Approx(0.25).epsilon(0.05));
}

TEST_CASE("direction set is reproducible and rejects M = 0") {
  const Grid g = Grid::uniform(40, 1.0);
  const DirectionSet d1 = sample_directions(g, 3, 7);
  const DirectionSet d2 = sample_directions(g, 3, 7);
  CHECK(d1.paths == d2.paths);
  CHECK(d1.count() == 3);
  CHECK(d1.paths[0] != d1.paths[1]);
  CHECK(sample_directions(g, 1, 7).count() == 1);
  CHECK_THROWS_AS(sample_directions(g, 0, 7), InvalidCount);
}

TEST_CASE("per-direction sub-streams are independent of the batch size") {
  // direction m depends only on (seed, m): a larger batch shares its prefix
  const Grid g = Grid::uniform(40, 1.0);
  const DirectionSet small = sample_directions(g, 3, 99);
  const DirectionSet large = sample_directions(g, 8, 99);
  for (std::size_t m = 0; m < 3; ++m) CHECK(small.paths[m] == large.paths[m]);
}

TEST_CASE("pooled direction variance at a mid-grid time matches t(T-t)/T") {
  const Grid g = Grid::uniform(80, 1.0);
  const std::size_t mid = 40;
  const double t = g.times()[mid];
  const DirectionSet dirs = sample_directions(g, 10000, 20240103);
  std::vector<double> vals(dirs.count());
  for (std::size_t m = 0; m < dirs.count(); ++m) vals[m] = dirs.paths[m][mid];
  const double expected = t * (g.horizon() - t) / g.horizon();
  CHECK(sample_variance(vals) == doctest::Approx(expected).epsilon(0.05));
}
