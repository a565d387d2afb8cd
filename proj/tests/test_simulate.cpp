#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "lawclust/rng.hpp"
#include "lawclust/simulate.hpp"
#include "lawclust/types.hpp"

using namespace lawclust;

namespace {

double lag1_autocorrelation(const std::vector<double>& x) {
  double mean = 0.0;
  for (double v : x) mean += v;
  mean /= static_cast<double>(x.size());
  double num = 0.0, den = 0.0;
  for (std::size_t t = 0; t + 1 < x.size(); ++t)
    num += (x[t] - mean) * (x[t + 1] - mean);
  for (double v : x) den += (v - mean) * (v - mean);
  return num / den;
}

}  // namespace

TEST_CASE("zero-scaled bridge samples are identically zero") {
  const Grid g = Grid::uniform(80, 1.0);
  std::mt19937_64 rng(3);
  const DataSet ds = gen_sbb("u", 0.0, 5, g, rng);
  for (const auto& s : ds.samples())
    for (double v : s) CHECK(v == 0.0);
}

TEST_CASE("scaled bridge samples stay pinned at the endpoints") {
  const Grid g = Grid::uniform(80, 1.0);
  std::mt19937_64 rng(4);
  const DataSet ds = gen_sbb("u", 3.0, 20, g, rng);
  for (const auto& s : ds.samples()) {
    CHECK(s.front() == 0.0);
    CHECK(s.back() == 0.0);
  }
}

TEST_CASE("scaled bridge mid-point variance matches theta^2 t(T-t)/T") {
  const Grid g = Grid::uniform(81, 1.0);
  std::mt19937_64 rng(20240113);
  const DataSet ds = gen_sbb("u", 2.0, 10000, g, rng);
  double mean = 0.0;
  for (const auto& s : ds.samples()) mean += s[40];
  mean /= 10000.0;
  double var = 0.0;
  for (const auto& s : ds.samples()) var += (s[40] - mean) * (s[40] - mean);
  var /= 9999.0;
  CHECK(var == doctest::Approx(1.0).epsilon(0.05));  // 4 * 0.25
}

TEST_CASE("AR generator validates its parameter, allowing the degenerate 0") {
  const Grid g = Grid::uniform(10, 1.0);
  std::mt19937_64 rng(5);
  CHECK_THROWS_AS(gen_ar("u", 1.0, 2, g, rng), InvalidParameter);
  CHECK_THROWS_AS(gen_ar("u", -0.1, 2, g, rng), InvalidParameter);
  CHECK_NOTHROW(gen_ar("u", 0.0, 2, g, rng));
}

TEST_CASE("AR with parameter 0 is an i.i.d. normal sequence") {
  const Grid g = Grid::uniform(10000, 1.0);
  std::mt19937_64 rng(20240114);
  const DataSet ds = gen_ar("u", 0.0, 1, g, rng);
  CHECK(std::abs(lag1_autocorrelation(ds.samples()[0])) <= 0.05);
}

TEST_CASE("AR lag-1 autocorrelation approaches the parameter on long runs") {
  const Grid g = Grid::uniform(10000, 1.0);
  std::mt19937_64 rng(20240115);
  const DataSet ds = gen_ar("u", 0.66, 5, g, rng);
  double pooled = 0.0;
  for (const auto& s : ds.samples()) pooled += lag1_autocorrelation(s);
  pooled /= 5.0;
  CHECK(pooled == doctest::Approx(0.66).epsilon(0.05 / 0.66));
}

TEST_CASE("generators are seed-deterministic") {
  const Grid g = Grid::uniform(80, 1.0);
  std::mt19937_64 a(77), b(77);
  CHECK(gen_ar("u", 0.5, 4, g, a).samples() == gen_ar("u", 0.5, 4, g, b).samples());
  std::mt19937_64 c(78), d(78);
  CHECK(gen_sbb("u", 2.0, 4, g, c).samples() == gen_sbb("u", 2.0, 4, g, d).samples());
}

TEST_CASE("partition metrics on the identity") {
  const Partition truth({{"a", 0}, {"b", 0}, {"c", 1}});
  const auto m = partition_metrics(truth, truth);
  CHECK(m.exact);
  CHECK(m.type1 == 0.0);
  CHECK(m.type2 == 0.0);
}

TEST_CASE("partition metrics count confused pairs") {
  const Partition truth({{"a", 0}, {"b", 0}, {"c", 1}});
  const Partition estimated({{"a", 0}, {"b", 1}, {"c", 1}});
  const auto m = partition_metrics(estimated, truth);
  CHECK_FALSE(m.exact);
  // different-law pairs: (a,c), (b,c); only (b,c) merged
  CHECK(m.type1 == 0.5);
  // same-law pairs: (a,b); split
  CHECK(m.type2 == 1.0);
}

TEST_CASE("all-singleton estimate is exact when every law differs") {
  const Partition truth({{"a", 0}, {"b", 1}, {"c", 2}});
  const Partition estimated({{"a", 2}, {"b", 0}, {"c", 1}});
  const auto m = partition_metrics(estimated, truth);
  CHECK(m.exact);
  CHECK(m.type1 == 0.0);
  CHECK(m.type2 == 0.0);
}

TEST_CASE("partition metrics reject different label sets") {
  const Partition truth({{"a", 0}, {"b", 1}});
  const Partition other({{"a", 0}, {"z", 1}});
  CHECK_THROWS_AS(partition_metrics(other, truth), LabelMismatch);
}

TEST_CASE("partition metrics are invariant to cluster relabeling") {
  const Partition truth({{"a", 0}, {"b", 0}, {"c", 1}, {"d", 2}});
  const Partition est1({{"a", 0}, {"b", 1}, {"c", 1}, {"d", 2}});
  const Partition est2({{"a", 2}, {"b", 0}, {"c", 0}, {"d", 1}});  // same relation as est1
  const auto m1 = partition_metrics(est1, truth);
  const auto m2 = partition_metrics(est2, truth);
  CHECK(m1.type1 == m2.type1);
  CHECK(m1.type2 == m2.type2);
  CHECK(m1.exact == m2.exact);
}

TEST_CASE("ground-truth partitions of both studies have cluster sizes 2, 3, 2") {
  for (const auto& thetas : {std::vector<double>{1, 1, 2, 2, 2, 4, 4},
                             std::vector<double>{0.99, 0.99, 0.66, 0.66, 0.66, 0.33, 0.33}}) {
    const Partition p = truth_partition(thetas);
    CHECK(p.cluster_count() == 3);
    std::vector<std::size_t> sizes(3, 0);
    for (const auto& [label, cluster] : p.assignment()) ++sizes[cluster];
    CHECK(sizes == std::vector<std::size_t>{2, 3, 2});
    CHECK(p.cluster_of("set1") == p.cluster_of("set2"));
    CHECK(p.cluster_of("set3") == p.cluster_of("set5"));
    CHECK(p.cluster_of("set6") == p.cluster_of("set7"));
  }
}

TEST_CASE("a replicate is deterministic in its seed") {
  ReplicateConfig rc;
  rc.model = Model::SBB;
  rc.thetas = {1, 1, 4};
  rc.n_samples = 20;
  rc.n_directions = 60;
  rc.alpha = std::sqrt(1.0 / 20.0);
  rc.grid_points = 40;
  rc.seed = 99;
  const auto r1 = run_replicate(rc);
  const auto r2 = run_replicate(rc);
  CHECK(r1.partition.assignment() == r2.partition.assignment());
  CHECK(r1.threshold == r2.threshold);
  CHECK(r1.threshold_delta == r2.threshold_delta);
  CHECK(r1.partition.size() == 3);
}

TEST_CASE("experiment report cells follow the configured (N, sigma) order") {
  ExperimentConfig cfg;
  cfg.model = Model::SBB;
  cfg.thetas = {1, 4};
  cfg.n_values = {12, 16};
  cfg.sigma_values = {3, 5};
  cfg.replicates = 2;
  cfg.grid_points = 20;
  cfg.seed = 1;
  const auto report = run_experiment(cfg);
  REQUIRE(report.cells.size() == 4);
  CHECK(report.cells[0].n_samples == 12);
  CHECK(report.cells[0].sigma == 3);
  CHECK(report.cells[1].n_samples == 12);
  CHECK(report.cells[1].sigma == 5);
  CHECK(report.cells[3].n_samples == 16);
  CHECK(report.cells[3].sigma == 5);
  for (const auto& c : report.cells) {
    CHECK(c.proportion_correct >= 0.0);
    CHECK(c.proportion_correct <= 1.0);
    CHECK(c.type1_rate >= 0.0);
    CHECK(c.type2_rate >= 0.0);
  }
}

TEST_CASE("a single replicate yields indicator rates") {
  ExperimentConfig cfg;
  cfg.model = Model::AR;
  cfg.thetas = {0.2, 0.9};
  cfg.n_values = {12};
  cfg.sigma_values = {3};
  cfg.replicates = 1;
  cfg.grid_points = 20;
  cfg.seed = 5;
  const auto report = run_experiment(cfg);
  REQUIRE(report.cells.size() == 1);
  const auto& c = report.cells[0];
  CHECK((c.proportion_correct == 0.0 || c.proportion_correct == 1.0));
  CHECK((c.type1_rate == 0.0 || c.type1_rate == 1.0));
  CHECK((c.type2_rate == 0.0 || c.type2_rate == 1.0));
}

TEST_CASE("experiment results do not depend on the thread count") {
  ExperimentConfig cfg;
  cfg.model = Model::SBB;
  cfg.thetas = {1, 2, 4};
  cfg.n_values = {10, 14};
  cfg.sigma_values = {4};
  cfg.replicates = 6;
  cfg.grid_points = 20;
  cfg.seed = 31;
  cfg.threads = 1;
  const auto serial = run_experiment(cfg);
  cfg.threads = 4;
  const auto parallel = run_experiment(cfg);
  REQUIRE(serial.cells.size() == parallel.cells.size());
  for (std::size_t i = 0; i < serial.cells.size(); ++i) {
    CHECK(serial.cells[i].proportion_correct == parallel.cells[i].proportion_correct);
    CHECK(serial.cells[i].type1_rate == parallel.cells[i].type1_rate);
    CHECK(serial.cells[i].type2_rate == parallel.cells[i].type2_rate);
  }
}

TEST_CASE("experiment config validation") {
  ExperimentConfig cfg;
  cfg.thetas = {1, 2};
  cfg.n_values = {10};
  cfg.sigma_values = {2};
  cfg.replicates = 0;
  CHECK_THROWS_AS(run_experiment(cfg), InvalidConfig);
  cfg.replicates = 1;
  cfg.sigma_values = {0};
  CHECK_THROWS_AS(run_experiment(cfg), InvalidConfig);
  cfg.sigma_values = {2};
  cfg.thetas = {1.0};
  CHECK_THROWS_AS(run_experiment(cfg), InvalidConfig);
}
