// Random projections: trapezoidal L2[0,T] inner products of samples with
// direction paths.
#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "lawclust/directions.hpp"
#include "lawclust/errors.hpp"
#include "lawclust/types.hpp"

namespace lawclust {

namespace detail {
// Trapezoid rule for integral of y*h over an equispaced grid with step dt.
// Shared by the scalar and the batched projection so entries agree bitwise.
inline double trapezoid_dot(const double* y, const double* h, std::size_t n, double dt) {
  double acc = 0.5 * (y[0] * h[0] + y[n - 1] * h[n - 1]);
  for (std::size_t i = 1; i + 1 < n; ++i) acc += y[i] * h[i];
  return dt * acc;
}
}  // namespace detail

// All projections of one data set: entry (n, m) is sample n against
// direction m.
struct ProjectionSet {
  std::string set_id;
  std::size_t samples = 0;     // N
  std::size_t directions = 0;  // M
  std::vector<double> values;  // row-major N x M

  double at(std::size_t n, std::size_t m) const { return values[n * directions + m]; }

  std::vector<double> direction_column(std::size_t m) const {
    std::vector<double> col(samples);
    for (std::size_t n = 0; n < samples; ++n) col[n] = values[n * directions + m];
    return col;
  }
};

// Quadrature approximation of the inner product of a sample with a direction.
inline double project(const FunctionalSample& sample, const std::vector<double>& direction,
                      const Grid& grid) {
  if (sample.size() != grid.size() || direction.size() != grid.size())
    throw LengthMismatch("sample, direction and grid lengths must agree");
  return detail::trapezoid_dot(sample.data(), direction.data(), grid.size(), grid.step());
}

// Full N x M projection matrix of a data set against a direction set.
inline ProjectionSet project_set(const DataSet& dataset, const DirectionSet& directions) {
  if (!dataset.grid().approx_equal(directions.grid))
    throw GridMismatch("data set '" + dataset.id() + "' and directions use different grids");
  const std::size_t n_samples = dataset.sample_count();
  const std::size_t n_dirs = directions.count();
  const std::size_t g = dataset.grid().size();
  const double dt = dataset.grid().step();

  ProjectionSet out{dataset.id(), n_samples, n_dirs, {}};
  out.values.resize(n_samples * n_dirs);
  for (std::size_t n = 0; n < n_samples; ++n) {
    const double* y = dataset.samples()[n].data();
    double* row = out.values.data() + n * n_dirs;
    for (std::size_t m = 0; m < n_dirs; ++m)
      row[m] = detail::trapezoid_dot(y, directions.paths[m].data(), g, dt);
  }
  return out;
}

}  // namespace lawclust
