// Two-sample Kolmogorov-Smirnov machinery: per-direction KS distances, the
// direction-averaged empirical distance with its empirical variance, the full
// pairwise distance matrix, and the single-direction goodness-of-fit test.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "lawclust/directions.hpp"
#include "lawclust/errors.hpp"
#include "lawclust/parallel.hpp"
#include "lawclust/projection.hpp"
#include "lawclust/types.hpp"

namespace lawclust {

// Empirical CDF over a sample: f(t) = (#values <= t) / N, right-continuous.
class Ecdf {
 public:
  explicit Ecdf(std::vector<double> values) : sorted_(std::move(values)) {
    if (sorted_.empty()) throw EmptyInput("empirical CDF needs at least one value");
    std::sort(sorted_.begin(), sorted_.end());
  }

  double operator()(double t) const {
    const auto it = std::upper_bound(sorted_.begin(), sorted_.end(), t);
    return static_cast<double>(it - sorted_.begin()) / static_cast<double>(sorted_.size());
  }

  const std::vector<double>& sorted() const { return sorted_; }

 private:
  std::vector<double> sorted_;
};

namespace detail {

// Exact sup |F_x - F_y| by a merge scan over the pooled sorted values.
// The difference is evaluated after all jumps at each distinct value, which
// makes tied values (across and within samples) exact.
inline double ks_sorted(const std::vector<double>& xs, const std::vector<double>& ys) {
  const double nx = static_cast<double>(xs.size());
  const double ny = static_cast<double>(ys.size());
  std::size_t i = 0, j = 0;
  double sup = 0.0;
  while (i < xs.size() || j < ys.size()) {
    double v;
    if (i < xs.size() && (j == ys.size() || xs[i] <= ys[j]))
      v = xs[i];
    else
      v = ys[j];
    while (i < xs.size() && xs[i] == v) ++i;
    while (j < ys.size() && ys[j] == v) ++j;
    const double diff = std::abs(static_cast<double>(i) / nx - static_cast<double>(j) / ny);
    if (diff > sup) sup = diff;
  }
  return sup;
}

}  // namespace detail

// Two-sample KS distance in [0, 1].
inline double ks_two_sample(std::vector<double> x, std::vector<double> y) {
  if (x.empty() || y.empty()) throw EmptyInput("KS distance needs two nonempty samples");
  std::sort(x.begin(), x.end());
  std::sort(y.begin(), y.end());
  return detail::ks_sorted(x, y);
}

// Direction-averaged empirical distance between two projected data sets,
// with the empirical variance of the per-direction values.
struct PairDistance {
  double mean = 0.0;
  double variance = 0.0;  // 1/(M-1) normalization; 0 when M == 1
  std::vector<double> per_direction;
};

namespace detail {

inline PairDistance pair_from_per_direction(std::vector<double> per_direction) {
  PairDistance out;
  out.per_direction = std::move(per_direction);
  const std::size_t m = out.per_direction.size();
  double sum = 0.0;
  for (double d : out.per_direction) sum += d;
  out.mean = sum / static_cast<double>(m);
  if (m > 1) {
    double sq = 0.0;
    for (double d : out.per_direction) {
      const double c = d - out.mean;
      sq += c * c;
    }
    out.variance = sq / static_cast<double>(m - 1);
  }
  return out;
}

// Per-direction sorted projection columns of one set; lets the matrix path
// sort each column once instead of once per pair.
inline std::vector<std::vector<double>> sorted_columns(const ProjectionSet& p) {
  std::vector<std::vector<double>> cols(p.directions);
  for (std::size_t m = 0; m < p.directions; ++m) {
    cols[m] = p.direction_column(m);
    std::sort(cols[m].begin(), cols[m].end());
  }
  return cols;
}

inline PairDistance pair_from_sorted_columns(const std::vector<std::vector<double>>& u,
                                             const std::vector<std::vector<double>>& v) {
  std::vector<double> per(u.size());
  for (std::size_t m = 0; m < u.size(); ++m) per[m] = ks_sorted(u[m], v[m]);
  return pair_from_per_direction(std::move(per));
}

}  // namespace detail

inline PairDistance pair_distance(const ProjectionSet& proj_u, const ProjectionSet& proj_v) {
  if (proj_u.directions != proj_v.directions)
    throw DirectionCountMismatch("projection sets use different direction counts");
  return detail::pair_from_sorted_columns(detail::sorted_columns(proj_u),
                                          detail::sorted_columns(proj_v));
}

// Symmetric matrix of direction-averaged distances and their empirical
// variances over all data-set pairs.
class DistanceMatrix {
 public:
  DistanceMatrix(std::vector<std::string> labels, std::vector<double> dist,
                 std::vector<double> var)
      : labels_(std::move(labels)), dist_(std::move(dist)), var_(std::move(var)) {}

  std::size_t size() const { return labels_.size(); }
  const std::vector<std::string>& labels() const { return labels_; }
  double dist(std::size_t i, std::size_t j) const { return dist_[i * size() + j]; }
  double var(std::size_t i, std::size_t j) const { return var_[i * size() + j]; }

  // Worst-case empirical variance over all pairs.
  double max_variance() const {
    double v = 0.0;
    for (std::size_t i = 0; i < size(); ++i)
      for (std::size_t j = i + 1; j < size(); ++j) v = std::max(v, var(i, j));
    return v;
  }

  // Smallest sample count is the conservative choice for threshold bounds.
  std::size_t min_samples() const { return min_samples_; }
  void set_min_samples(std::size_t n) { min_samples_ = n; }

 private:
  std::vector<std::string> labels_;
  std::vector<double> dist_;
  std::vector<double> var_;
  std::size_t min_samples_ = 0;
};

// Distances between all unordered pairs of data sets under one shared
// direction set. Pair computations may run on several threads; every slot is
// written exactly once, so the result is identical for any thread count.
inline DistanceMatrix distance_matrix(const std::vector<DataSet>& datasets,
                                      const DirectionSet& directions, unsigned threads = 1) {
  if (datasets.size() < 2) throw TooFewSets("distance matrix needs at least 2 data sets");
  validate_common_grid(datasets);
  const std::size_t s = datasets.size();
  std::vector<std::string> labels(s);
  for (std::size_t i = 0; i < s; ++i) labels[i] = datasets[i].id();
  for (std::size_t i = 0; i < s; ++i)
    for (std::size_t j = i + 1; j < s; ++j)
      if (labels[i] == labels[j])
        throw LabelMismatch("duplicate data set label '" + labels[i] + "'");

  std::vector<std::vector<std::vector<double>>> cols(s);
  parallel_for(s, threads, [&](std::size_t i) {
    cols[i] = detail::sorted_columns(project_set(datasets[i], directions));
  });

  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  pairs.reserve(s * (s - 1) / 2);
  for (std::size_t i = 0; i < s; ++i)
    for (std::size_t j = i + 1; j < s; ++j) pairs.emplace_back(i, j);

  std::vector<double> dist(s * s, 0.0), var(s * s, 0.0);
  parallel_for(pairs.size(), threads, [&](std::size_t k) {
    const auto [i, j] = pairs[k];
    const PairDistance pd = detail::pair_from_sorted_columns(cols[i], cols[j]);
    dist[i * s + j] = dist[j * s + i] = pd.mean;
    var[i * s + j] = var[j * s + i] = pd.variance;
  });

  DistanceMatrix out(std::move(labels), std::move(dist), std::move(var));
  std::size_t min_n = datasets.front().sample_count();
  for (const auto& ds : datasets) min_n = std::min(min_n, ds.sample_count());
  out.set_min_samples(min_n);
  return out;
}

// Survival function of the asymptotic Kolmogorov distribution,
// 2 sum_{k>=1} (-1)^{k-1} exp(-2 k^2 x^2), clamped to [0, 1].
inline double kolmogorov_sf(double x) {
  if (x <= 0.02) return 1.0;  // series converges too slowly below this point
  double sum = 0.0;
  double sign = 1.0;
  for (int k = 1; k <= 1000; ++k) {
    const double term = std::exp(-2.0 * k * k * x * x);
    sum += sign * term;
    sign = -sign;
    if (term < 1e-12) break;
  }
  return std::clamp(2.0 * sum, 0.0, 1.0);
}

// Single-direction two-sample goodness-of-fit test: the scaled KS statistic
// with its asymptotic p-value. Uses the effective sample size
// Nx*Ny/(Nx+Ny), which reduces to N/2 for equal sizes.
struct GofResult {
  double statistic = 0.0;
  double p_value = 1.0;
};

inline GofResult ks_gof_test(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.empty() || y.empty()) throw EmptyInput("goodness-of-fit test needs nonempty samples");
  const double nx = static_cast<double>(x.size());
  const double ny = static_cast<double>(y.size());
  const double effective = nx * ny / (nx + ny);
  const double statistic = std::sqrt(effective) * ks_two_sample(x, y);
  return GofResult{statistic, kolmogorov_sf(statistic)};
}

}  // namespace lawclust
