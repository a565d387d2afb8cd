// Data generators for the scaled-Brownian-bridge and AR(1) models, the
// end-to-end clustering replicate, the Monte Carlo experiment runner, and
// partition-quality metrics.
#pragma once

#include <cmath>
#include <cstdint>
#include <map>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "lawclust/bounds.hpp"
#include "lawclust/dendrogram.hpp"
#include "lawclust/directions.hpp"
#include "lawclust/distance.hpp"
#include "lawclust/errors.hpp"
#include "lawclust/parallel.hpp"
#include "lawclust/rng.hpp"
#include "lawclust/types.hpp"

namespace lawclust {

enum class Model { SBB, AR };

inline const char* model_name(Model m) { return m == Model::SBB ? "sbb" : "ar"; }

namespace detail {
inline constexpr std::uint64_t kDataStream = 0x6474u;       // per-set data streams
inline constexpr std::uint64_t kDirectionSeed = 0x6d73u;    // direction master seed
inline std::uint64_t model_tag(Model m) { return m == Model::SBB ? 0u : 1u; }
}  // namespace detail

inline std::string set_label(std::size_t index) { return "set" + std::to_string(index + 1); }

// N independent theta-scaled Brownian-bridge samples.
inline DataSet gen_sbb(std::string id, double theta, std::size_t n_samples, const Grid& grid,
                       std::mt19937_64& rng) {
  if (n_samples == 0) throw InvalidCount("need at least one sample");
  std::vector<FunctionalSample> samples(n_samples);
  for (auto& s : samples) {
    s = sample_brownian_bridge(grid, rng);
    for (double& v : s) v *= theta;
  }
  return DataSet(std::move(id), grid, std::move(samples));
}

// N independent AR(1) paths with standard normal innovations, initialized at
// an independent standard normal, indexed along the grid.
inline DataSet gen_ar(std::string id, double theta, std::size_t n_samples, const Grid& grid,
                      std::mt19937_64& rng) {
  if (n_samples == 0) throw InvalidCount("need at least one sample");
  if (!(theta >= 0.0 && theta < 1.0))
    throw InvalidParameter("AR parameter must lie in [0,1)");
  std::vector<FunctionalSample> samples(n_samples);
  for (auto& s : samples) {
    s.resize(grid.size());
    fill_standard_normal(s, rng);  // innovations, transformed in place
    for (std::size_t t = 1; t < s.size(); ++t) s[t] += theta * s[t - 1];
  }
  return DataSet(std::move(id), grid, std::move(samples));
}

// Pairwise confusion between an estimated partition and the ground truth.
// type1: fraction of different-law pairs merged by the estimate.
// type2: fraction of same-law pairs split by the estimate.
struct PartitionComparison {
  bool exact = false;
  double type1 = 0.0;
  double type2 = 0.0;
};

inline PartitionComparison partition_metrics(const Partition& estimated, const Partition& truth) {
  if (estimated.size() != truth.size())
    throw LabelMismatch("partitions cover different label sets");
  std::vector<std::pair<std::size_t, std::size_t>> pairs;  // (estimated, truth) per label
  pairs.reserve(truth.size());
  for (const auto& [label, true_cluster] : truth.assignment())
    pairs.emplace_back(estimated.cluster_of(label), true_cluster);

  std::size_t same_pairs = 0, split_same = 0, diff_pairs = 0, merged_diff = 0;
  for (std::size_t a = 0; a < pairs.size(); ++a) {
    for (std::size_t b = a + 1; b < pairs.size(); ++b) {
      const bool same_law = pairs[a].second == pairs[b].second;
      const bool merged = pairs[a].first == pairs[b].first;
      if (same_law) {
        ++same_pairs;
        if (!merged) ++split_same;
      } else {
        ++diff_pairs;
        if (merged) ++merged_diff;
      }
    }
  }
  PartitionComparison out;
  out.type1 = diff_pairs == 0 ? 0.0
                              : static_cast<double>(merged_diff) / static_cast<double>(diff_pairs);
  out.type2 = same_pairs == 0 ? 0.0
                              : static_cast<double>(split_same) / static_cast<double>(same_pairs);
  out.exact = merged_diff == 0 && split_same == 0;
  return out;
}

// Ground-truth partition induced by parameter equality: sets share a cluster
// iff their generating parameters are equal.
inline Partition truth_partition(const std::vector<double>& thetas) {
  std::map<std::string, std::size_t> assignment;
  std::vector<double> distinct;
  for (std::size_t i = 0; i < thetas.size(); ++i) {
    std::size_t c = distinct.size();
    for (std::size_t k = 0; k < distinct.size(); ++k)
      if (distinct[k] == thetas[i]) {
        c = k;
        break;
      }
    if (c == distinct.size()) distinct.push_back(thetas[i]);
    assignment[set_label(i)] = c;
  }
  return Partition(std::move(assignment));
}

struct ReplicateConfig {
  Model model = Model::SBB;
  std::vector<double> thetas;        // one generating parameter per data set
  std::size_t n_samples = 2;         // N per set
  std::size_t n_directions = 2;      // M
  double alpha = 0.05;
  double dkw_constant = std::numbers::e;
  std::size_t delta_grid_size = 512;
  std::size_t grid_points = 80;
  double horizon = 1.0;
  std::uint64_t seed = 0;
};

struct ReplicateResult {
  Partition partition;
  PartitionComparison comparison;
  double threshold = 0.0;
  double threshold_delta = 0.0;
};

// One full pipeline pass: generate data and directions, build the distance
// matrix, select the threshold, cluster, cut, and score against the truth.
inline ReplicateResult run_replicate(const ReplicateConfig& cfg) {
  if (cfg.thetas.size() < 2) throw TooFewSets("need at least 2 data sets");
  const Grid grid = Grid::uniform(cfg.grid_points, cfg.horizon);

  std::vector<DataSet> datasets;
  datasets.reserve(cfg.thetas.size());
  for (std::size_t u = 0; u < cfg.thetas.size(); ++u) {
    std::mt19937_64 rng(derive_seed(cfg.seed, detail::kDataStream, u));
    datasets.push_back(cfg.model == Model::SBB
                           ? gen_sbb(set_label(u), cfg.thetas[u], cfg.n_samples, grid, rng)
                           : gen_ar(set_label(u), cfg.thetas[u], cfg.n_samples, grid, rng));
  }

  const DirectionSet dirs =
      sample_directions(grid, cfg.n_directions, derive_seed(cfg.seed, detail::kDirectionSeed));
  const DistanceMatrix dmat = distance_matrix(datasets, dirs);

  ThresholdConfig tc;
  tc.alpha = cfg.alpha;
  tc.dkw_constant = cfg.dkw_constant;
  tc.delta_grid_size = cfg.delta_grid_size;
  tc.directions = cfg.n_directions;
  tc.min_samples = dmat.min_samples();
  tc.max_variance = dmat.max_variance();
  const ThresholdSelection thr = select_cut_threshold(tc);

  const DendrogramModel dendro = complete_linkage(dmat);
  Partition estimated = cut_at_threshold(dendro, thr.value);
  PartitionComparison cmp = partition_metrics(estimated, truth_partition(cfg.thetas));
  return ReplicateResult{std::move(estimated), cmp, thr.value, thr.delta};
}

struct ExperimentConfig {
  Model model = Model::SBB;
  std::vector<double> thetas;
  std::vector<std::size_t> n_values;
  std::vector<std::size_t> sigma_values;  // M = sigma * N
  std::size_t replicates = 100;
  std::size_t grid_points = 80;
  double horizon = 1.0;
  std::uint64_t seed = 0;
  double dkw_constant = std::numbers::e;
  std::size_t delta_grid_size = 512;
  double alpha_override = 0.0;  // 0 = use the sqrt(1/N) rule
  unsigned threads = 1;         // 0 = hardware concurrency

  void validate() const {
    if (replicates < 1) throw InvalidConfig("need at least one replicate");
    if (grid_points < 2) throw InvalidConfig("grid needs at least 2 points");
    if (thetas.size() < 2) throw InvalidConfig("need at least 2 data sets");
    if (n_values.empty() || sigma_values.empty())
      throw InvalidConfig("need at least one N and one sigma");
    for (std::size_t s : sigma_values)
      if (s < 1) throw InvalidConfig("sigma must be at least 1");
    for (std::size_t n : n_values)
      if (n < 2) throw InvalidConfig("N must be at least 2");
  }
};

struct ExperimentCell {
  std::size_t n_samples = 0;
  std::size_t sigma = 0;
  double proportion_correct = 0.0;
  double type1_rate = 0.0;
  double type2_rate = 0.0;
};

struct ExperimentReport {
  Model model = Model::SBB;
  std::vector<ExperimentCell> cells;  // N-major, sigma-minor order
};

// Runs `replicates` independent replicates per (N, sigma) cell with
// alpha = sqrt(1/N) and M = sigma N. Each replicate draws its seed from
// (master seed, model, N, sigma, replicate index), and results are
// aggregated in replicate order, so the report does not depend on thread
// count or scheduling.
inline ExperimentReport run_experiment(const ExperimentConfig& cfg) {
  cfg.validate();
  ExperimentReport report{cfg.model, {}};
  report.cells.reserve(cfg.n_values.size() * cfg.sigma_values.size());

  for (std::size_t n : cfg.n_values) {
    for (std::size_t sigma : cfg.sigma_values) {
      std::vector<PartitionComparison> results(cfg.replicates);
      parallel_for(cfg.replicates, cfg.threads, [&](std::size_t rep) {
        ReplicateConfig rc;
        rc.model = cfg.model;
        rc.thetas = cfg.thetas;
        rc.n_samples = n;
        rc.n_directions = sigma * n;
        rc.alpha = cfg.alpha_override > 0.0 ? cfg.alpha_override
                                            : std::sqrt(1.0 / static_cast<double>(n));
        rc.dkw_constant = cfg.dkw_constant;
        rc.delta_grid_size = cfg.delta_grid_size;
        rc.grid_points = cfg.grid_points;
        rc.horizon = cfg.horizon;
        rc.seed = derive_seed(cfg.seed, detail::model_tag(cfg.model), n, sigma, rep);
        results[rep] = run_replicate(rc).comparison;
      });

      ExperimentCell cell;
      cell.n_samples = n;
      cell.sigma = sigma;
      std::size_t exact = 0;
      double t1 = 0.0, t2 = 0.0;
      for (const auto& r : results) {
        exact += r.exact ? 1u : 0u;
        t1 += r.type1;
        t2 += r.type2;
      }
      const double reps = static_cast<double>(cfg.replicates);
      cell.proportion_correct = static_cast<double>(exact) / reps;
      cell.type1_rate = t1 / reps;
      cell.type2_rate = t2 / reps;
      report.cells.push_back(cell);
    }
  }
  return report;
}

}  // namespace lawclust
