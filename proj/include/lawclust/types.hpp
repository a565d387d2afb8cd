// Core domain types: grids, functional samples, data sets, partitions.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "lawclust/errors.hpp"

namespace lawclust {

// Relative tolerance for grid equispacing and pointwise grid agreement.
inline constexpr double kGridRelTol = 1e-9;

// Equispaced time grid on [0, T]. Immutable after construction.
class Grid {
 public:
  // Validates: >= 2 points, first point 0, strictly increasing, equispaced
  // to within kGridRelTol * T, T > 0.
  explicit Grid(std::vector<double> t_values) : t_(std::move(t_values)) {
    if (t_.size() < 2) throw InvalidParameter("grid needs at least 2 points");
    horizon_ = t_.back();
    if (!(horizon_ > 0.0) || !std::isfinite(horizon_))
      throw InvalidParameter("grid horizon must be positive and finite");
    const double tol = kGridRelTol * horizon_;
    if (std::abs(t_.front()) > tol) throw InvalidParameter("grid must start at 0");
    const double h = horizon_ / static_cast<double>(t_.size() - 1);
    for (std::size_t i = 0; i + 1 < t_.size(); ++i) {
      const double step = t_[i + 1] - t_[i];
      if (!(step > 0.0)) throw InvalidParameter("grid points must be strictly increasing");
      if (std::abs(step - h) > tol) throw InvalidParameter("grid points must be equispaced");
    }
  }

  // points equispaced points covering [0, horizon] exactly.
  static Grid uniform(std::size_t points, double horizon) {
    if (points < 2) throw InvalidParameter("grid needs at least 2 points");
    std::vector<double> t(points);
    for (std::size_t i = 0; i + 1 < points; ++i)
      t[i] = horizon * static_cast<double>(i) / static_cast<double>(points - 1);
    t.back() = horizon;
    return Grid(std::move(t));
  }

  const std::vector<double>& times() const { return t_; }
  double horizon() const { return horizon_; }
  std::size_t size() const { return t_.size(); }
  double step() const { return horizon_ / static_cast<double>(t_.size() - 1); }

  bool approx_equal(const Grid& other) const {
    if (t_.size() != other.t_.size()) return false;
    const double tol = kGridRelTol * std::max(horizon_, other.horizon_);
    for (std::size_t i = 0; i < t_.size(); ++i)
      if (std::abs(t_[i] - other.t_[i]) > tol) return false;
    return true;
  }

 private:
  std::vector<double> t_;
  double horizon_ = 0.0;
};

// One functional sample: one value per grid point.
using FunctionalSample = std::vector<double>;

// A labelled set of functional samples sharing one grid.
class DataSet {
 public:
  DataSet(std::string id, Grid grid, std::vector<FunctionalSample> samples)
      : id_(std::move(id)), grid_(std::move(grid)), samples_(std::move(samples)) {
    if (samples_.empty()) throw EmptyInput("data set '" + id_ + "' has no samples");
    for (const auto& s : samples_) {
      if (s.size() != grid_.size())
        throw LengthMismatch("sample length does not match grid in data set '" + id_ + "'");
      for (double v : s)
        if (!std::isfinite(v))
          throw NonFiniteValue("non-finite sample value in data set '" + id_ + "'");
    }
  }

  const std::string& id() const { return id_; }
  const Grid& grid() const { return grid_; }
  const std::vector<FunctionalSample>& samples() const { return samples_; }
  std::size_t sample_count() const { return samples_.size(); }

 private:
  std::string id_;
  Grid grid_;
  std::vector<FunctionalSample> samples_;
};

// Assignment of every data-set label to a cluster index in {0, .., k-1}.
class Partition {
 public:
  explicit Partition(std::map<std::string, std::size_t> assignment)
      : assignment_(std::move(assignment)) {
    if (assignment_.empty()) throw EmptyInput("partition has no labels");
    std::set<std::size_t> seen;
    for (const auto& [label, cluster] : assignment_) seen.insert(cluster);
    // indices must be exactly {0, .., k-1}
    if (*seen.begin() != 0 || *seen.rbegin() != seen.size() - 1)
      throw InvalidParameter("partition cluster indices must be contiguous from 0");
  }

  const std::map<std::string, std::size_t>& assignment() const { return assignment_; }

  std::size_t cluster_of(const std::string& label) const {
    auto it = assignment_.find(label);
    if (it == assignment_.end()) throw LabelMismatch("unknown label '" + label + "'");
    return it->second;
  }

  std::size_t cluster_count() const {
    std::size_t k = 0;
    for (const auto& [label, cluster] : assignment_) k = std::max(k, cluster + 1);
    return k;
  }

  std::size_t size() const { return assignment_.size(); }

  // True when both partitions induce the same equivalence relation,
  // regardless of how cluster indices are numbered.
  bool same_clustering(const Partition& other) const {
    if (assignment_.size() != other.assignment_.size()) return false;
    std::map<std::size_t, std::size_t> fwd, bwd;
    for (const auto& [label, cluster] : assignment_) {
      auto it = other.assignment_.find(label);
      if (it == other.assignment_.end()) return false;
      auto [f, finserted] = fwd.emplace(cluster, it->second);
      if (!finserted && f->second != it->second) return false;
      auto [b, binserted] = bwd.emplace(it->second, cluster);
      if (!binserted && b->second != cluster) return false;
    }
    return true;
  }

 private:
  std::map<std::string, std::size_t> assignment_;
};

// Returns the shared grid if all data sets agree pointwise within tolerance.
inline Grid validate_common_grid(const std::vector<DataSet>& datasets) {
  if (datasets.empty()) throw EmptyInput("no data sets given");
  const Grid& ref = datasets.front().grid();
  for (const auto& ds : datasets)
    if (!ref.approx_equal(ds.grid()))
      throw GridMismatch("data set '" + ds.id() + "' is not on the common grid");
  return ref;
}

}  // namespace lawclust
