#include <doctest.h>

#include <algorithm>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "lawclust/dendrogram.hpp"
#include "lawclust/distance.hpp"
#include "lawclust/rng.hpp"

using namespace lawclust;

namespace {

DistanceMatrix make_matrix(std::vector<std::string> labels,
                           const std::vector<std::vector<double>>& d) {
  const std::size_t s = labels.size();
  std::vector<double> dist(s * s, 0.0), var(s * s, 0.0);
  for (std::size_t i = 0; i < s; ++i)
    for (std::size_t j = 0; j < s; ++j) dist[i * s + j] = d[i][j];
  return DistanceMatrix(std::move(labels), std::move(dist), std::move(var));
}

DistanceMatrix random_matrix(std::mt19937_64& rng, std::size_t s) {
  std::vector<std::string> labels(s);
  for (std::size_t i = 0; i < s; ++i) labels[i] = "L" + std::to_string(i);
  std::vector<std::vector<double>> d(s, std::vector<double>(s, 0.0));
  for (std::size_t i = 0; i < s; ++i)
    for (std::size_t j = i + 1; j < s; ++j) d[i][j] = d[j][i] = uniform_unit(rng);
  return make_matrix(std::move(labels), d);
}

// the three-label example: d(a,b) = 0.1, d(a,c) = 0.9, d(b,c) = 0.8
DistanceMatrix abc_matrix() {
  return make_matrix({"a", "b", "c"},
                     {{0.0, 0.1, 0.9}, {0.1, 0.0, 0.8}, {0.9, 0.8, 0.0}});
}

}  // namespace

TEST_CASE("two sets force a single merge at their distance") {
  const auto dendro = complete_linkage(make_matrix({"a", "b"}, {{0.0, 0.3}, {0.3, 0.0}}));
  REQUIRE(dendro.merges.size() == 1);
  CHECK(dendro.merges[0].height == 0.3);
  CHECK(dendro.merges[0].left == std::vector<std::size_t>{0});
  CHECK(dendro.merges[0].right == std::vector<std::size_t>{1});
}

TEST_CASE("complete linkage merges the closest pair, then at the max cross distance") {
  const auto dendro = complete_linkage(abc_matrix());
  REQUIRE(dendro.merges.size() == 2);
  CHECK(dendro.merges[0].height == 0.1);
  CHECK(dendro.merges[0].left == std::vector<std::size_t>{0});
  CHECK(dendro.merges[0].right == std::vector<std::size_t>{1});
  CHECK(dendro.merges[1].height == 0.9);  // max(0.9, 0.8)
  CHECK(dendro.merges[1].left == std::vector<std::size_t>{0, 1});
  CHECK(dendro.merges[1].right == std::vector<std::size_t>{2});
}

TEST_CASE("complete linkage heights never decrease") {
  std::mt19937_64 rng(20240110);
  for (int rep = 0; rep < 30; ++rep) {
    const std::size_t s = 2 + static_cast<std::size_t>(uniform_unit(rng) * 11);
    const auto dendro = complete_linkage(random_matrix(rng, s));
    REQUIRE(dendro.merges.size() == s - 1);
    for (std::size_t k = 1; k < dendro.merges.size(); ++k)
      CHECK(dendro.merges[k].height >= dendro.merges[k - 1].height);
  }
}

TEST_CASE("complete linkage needs at least two sets") {
  CHECK_THROWS_AS(complete_linkage(make_matrix({"a"}, {{0.0}})), TooFewSets);
}

TEST_CASE("threshold cut selects the partition before the first tall merge") {
  const auto dendro = complete_linkage(abc_matrix());

  const Partition below = cut_at_threshold(dendro, 0.05);  // below every height
  CHECK(below.cluster_count() == 3);

  const Partition mid = cut_at_threshold(dendro, 0.5);
  CHECK(mid.cluster_count() == 2);
  CHECK(mid.cluster_of("a") == mid.cluster_of("b"));
  CHECK(mid.cluster_of("a") != mid.cluster_of("c"));

  const Partition above = cut_at_threshold(dendro, 0.95);  // above every height
  CHECK(above.cluster_count() == 1);

  // the trigger is strict: a merge at exactly gamma stops the replay
  const Partition edge = cut_at_threshold(dendro, 0.9);
  CHECK(edge.cluster_count() == 2);
}

TEST_CASE("partition_at_k recovers each level of the dendrogram") {
  const auto dendro = complete_linkage(abc_matrix());
  CHECK(partition_at_k(dendro, 3).cluster_count() == 3);
  CHECK(partition_at_k(dendro, 1).cluster_count() == 1);
  const Partition two = partition_at_k(dendro, 2);
  CHECK(two.cluster_of("a") == two.cluster_of("b"));
  CHECK(two.cluster_of("a") != two.cluster_of("c"));
  CHECK_THROWS_AS(partition_at_k(dendro, 0), InvalidK);
  CHECK_THROWS_AS(partition_at_k(dendro, 4), InvalidK);
}

TEST_CASE("threshold cut agrees with partition_at_k at the stop level") {
  std::mt19937_64 rng(20240111);
  for (int rep = 0; rep < 30; ++rep) {
    const std::size_t s = 2 + static_cast<std::size_t>(uniform_unit(rng) * 9);
    const auto dendro = complete_linkage(random_matrix(rng, s));
    const double gamma = uniform_unit(rng);
    std::size_t steps = dendro.merges.size();
    for (std::size_t k = 0; k < dendro.merges.size(); ++k)
      if (dendro.merges[k].height >= gamma) {
        steps = k;
        break;
      }
    const Partition cut = cut_at_threshold(dendro, gamma);
    const Partition at_k = partition_at_k(dendro, s - steps);
    CHECK(cut.same_clustering(at_k));
  }
}

TEST_CASE("permuting labels permutes the partition identically") {
  std::mt19937_64 rng(20240112);
  const std::size_t s = 6;
  const DistanceMatrix m = random_matrix(rng, s);
  const double gamma = 0.5;
  const Partition base = cut_at_threshold(complete_linkage(m), gamma);

  // rotate the label/index order by one
  std::vector<std::size_t> perm(s);
  for (std::size_t i = 0; i < s; ++i) perm[i] = (i + 1) % s;
  std::vector<std::string> plabels(s);
  std::vector<double> pdist(s * s, 0.0), pvar(s * s, 0.0);
  for (std::size_t i = 0; i < s; ++i) {
    plabels[i] = m.labels()[perm[i]];
    for (std::size_t j = 0; j < s; ++j) pdist[i * s + j] = m.dist(perm[i], perm[j]);
  }
  const DistanceMatrix pm(std::move(plabels), std::move(pdist), std::move(pvar));
  const Partition permuted = cut_at_threshold(complete_linkage(pm), gamma);
  CHECK(base.same_clustering(permuted));
}

TEST_CASE("exact distance ties break deterministically") {
  // all pairwise distances equal; the (a, b) pair wins lexicographically
  const auto dendro = complete_linkage(make_matrix(
      {"b", "c", "a"}, {{0.0, 0.5, 0.5}, {0.5, 0.0, 0.5}, {0.5, 0.5, 0.0}}));
  REQUIRE(dendro.merges.size() == 2);
  // first merge joins the clusters whose min labels are "a" and "b"
  CHECK(dendro.labels[dendro.merges[0].left.front()] == "a");
  CHECK(dendro.labels[dendro.merges[0].right.front()] == "b");
}
