// Complete-linkage agglomeration, the dendrogram model (merge sequence plus
// heights), and partition selection by threshold or cluster count.
#pragma once

#include <algorithm>
#include <cstddef>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "lawclust/distance.hpp"
#include "lawclust/errors.hpp"
#include "lawclust/types.hpp"

namespace lawclust {

// One agglomeration step: the two merged clusters as sorted label-index
// lists, and the complete-linkage distance at merge time.
struct Merge {
  std::vector<std::size_t> left;
  std::vector<std::size_t> right;
  double height = 0.0;
};

struct DendrogramModel {
  std::vector<std::string> labels;
  std::vector<Merge> merges;  // exactly labels.size() - 1 entries
};

namespace detail {

inline Partition partition_from_clusters(const std::vector<std::string>& labels,
                                         std::vector<std::vector<std::size_t>> clusters) {
  std::sort(clusters.begin(), clusters.end(),
            [](const auto& a, const auto& b) { return a.front() < b.front(); });
  std::map<std::string, std::size_t> assignment;
  for (std::size_t c = 0; c < clusters.size(); ++c)
    for (std::size_t idx : clusters[c]) assignment[labels[idx]] = c;
  return Partition(std::move(assignment));
}

// Applies the first `steps` merges starting from singletons.
inline std::vector<std::vector<std::size_t>> replay_merges(const DendrogramModel& dendro,
                                                           std::size_t steps) {
  std::vector<std::vector<std::size_t>> clusters;
  clusters.reserve(dendro.labels.size());
  for (std::size_t i = 0; i < dendro.labels.size(); ++i) clusters.push_back({i});
  for (std::size_t s = 0; s < steps; ++s) {
    const Merge& m = dendro.merges[s];
    auto find_cluster = [&](std::size_t member) {
      for (std::size_t c = 0; c < clusters.size(); ++c)
        for (std::size_t idx : clusters[c])
          if (idx == member) return c;
      return clusters.size();
    };
    const std::size_t ci = find_cluster(m.left.front());
    const std::size_t cj = find_cluster(m.right.front());
    std::vector<std::size_t> merged = clusters[ci];
    merged.insert(merged.end(), clusters[cj].begin(), clusters[cj].end());
    std::sort(merged.begin(), merged.end());
    clusters.erase(clusters.begin() + static_cast<std::ptrdiff_t>(std::max(ci, cj)));
    clusters.erase(clusters.begin() + static_cast<std::ptrdiff_t>(std::min(ci, cj)));
    clusters.push_back(std::move(merged));
  }
  return clusters;
}

}  // namespace detail

// Agglomerates from singletons, always merging the pair of clusters with
// minimal complete-linkage distance. Ties break deterministically on the
// lexicographically smallest (min label, min label) pair.
inline DendrogramModel complete_linkage(const DistanceMatrix& matrix) {
  const std::size_t s = matrix.size();
  if (s < 2) throw TooFewSets("clustering needs at least 2 data sets");

  struct Cluster {
    std::vector<std::size_t> members;  // sorted label indices
    std::string min_label;
  };
  std::vector<Cluster> active(s);
  for (std::size_t i = 0; i < s; ++i) active[i] = {{i}, matrix.labels()[i]};

  // working complete-linkage distances between active clusters
  std::vector<std::vector<double>> d(s, std::vector<double>(s, 0.0));
  for (std::size_t i = 0; i < s; ++i)
    for (std::size_t j = 0; j < s; ++j) d[i][j] = matrix.dist(i, j);

  DendrogramModel out{matrix.labels(), {}};
  out.merges.reserve(s - 1);

  while (active.size() > 1) {
    std::size_t best_i = 0, best_j = 1;
    bool have = false;
    for (std::size_t i = 0; i < active.size(); ++i) {
      for (std::size_t j = i + 1; j < active.size(); ++j) {
        // canonical order: cluster with the smaller min label first
        const bool swap = active[j].min_label < active[i].min_label;
        const std::size_t a = swap ? j : i;
        const std::size_t b = swap ? i : j;
        if (!have) {
          best_i = a;
          best_j = b;
          have = true;
          continue;
        }
        const double cur = d[a][b];
        const double best = d[best_i][best_j];
        if (cur < best ||
            (cur == best && std::pair(active[a].min_label, active[b].min_label) <
                                std::pair(active[best_i].min_label, active[best_j].min_label)))
          best_i = a, best_j = b;
      }
    }

    out.merges.push_back(
        Merge{active[best_i].members, active[best_j].members, d[best_i][best_j]});

    // merge best_j into best_i, then drop best_j (Lance-Williams max update)
    Cluster merged;
    merged.members = active[best_i].members;
    merged.members.insert(merged.members.end(), active[best_j].members.begin(),
                          active[best_j].members.end());
    std::sort(merged.members.begin(), merged.members.end());
    merged.min_label = std::min(active[best_i].min_label, active[best_j].min_label);

    for (std::size_t c = 0; c < active.size(); ++c) {
      if (c == best_i || c == best_j) continue;
      d[best_i][c] = d[c][best_i] = std::max(d[best_i][c], d[best_j][c]);
    }
    active[best_i] = std::move(merged);
    active.erase(active.begin() + static_cast<std::ptrdiff_t>(best_j));
    d.erase(d.begin() + static_cast<std::ptrdiff_t>(best_j));
    for (auto& row : d) row.erase(row.begin() + static_cast<std::ptrdiff_t>(best_j));
  }
  return out;
}

// Replays merges in order and stops before the first one whose height
// reaches gamma. If no merge triggers, every label lands in one cluster.
inline Partition cut_at_threshold(const DendrogramModel& dendro, double gamma) {
  std::size_t steps = dendro.merges.size();
  for (std::size_t s = 0; s < dendro.merges.size(); ++s) {
    if (dendro.merges[s].height >= gamma) {
      steps = s;
      break;
    }
  }
  return detail::partition_from_clusters(dendro.labels, detail::replay_merges(dendro, steps));
}

// The partition with exactly k clusters.
inline Partition partition_at_k(const DendrogramModel& dendro, std::size_t k) {
  const std::size_t s = dendro.labels.size();
  if (k < 1 || k > s) throw InvalidK("cluster count must lie in [1, number of sets]");
  return detail::partition_from_clusters(dendro.labels, detail::replay_merges(dendro, s - k));
}

}  // namespace lawclust
