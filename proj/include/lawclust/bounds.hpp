// Concentration-bound calculators and the data-driven dendrogram cut
// threshold, obtained by a one-dimensional numerical minimization.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numbers>

#include "lawclust/errors.hpp"

namespace lawclust {

// Tail bound on the estimation error of the direction-averaged distance:
// P(|estimate - true distance| >= gamma) for N samples per set and M
// directions. Not clamped; callers may cap at 1.
inline double distance_error_bound(double gamma, std::size_t n_samples, std::size_t n_directions,
                                   double dkw_constant) {
  const double n = static_cast<double>(n_samples);
  const double m = static_cast<double>(n_directions);
  const double g2 = gamma * gamma;
  return 2.0 * std::exp(-m * g2 / 2.0) + 2.0 * std::exp(-m * g2 / 32.0) +
         2.0 * dkw_constant * std::exp(-n * g2 / 16.0);
}

// Bias term of the empirical Bernstein inequality: 7 log(2/delta) / (3(M-1)).
inline double bernstein_epsilon(double delta, std::size_t m_directions) {
  if (!(delta > 0.0 && delta < 1.0)) throw InvalidDelta("delta must lie in (0,1)");
  if (m_directions < 2) throw InvalidM("the bias term needs at least 2 directions");
  return 7.0 * std::log(2.0 / delta) / (3.0 * static_cast<double>(m_directions - 1));
}

// Variance term of the empirical Bernstein inequality,
// sqrt(2 V log(2/delta) / M), with V the worst-case empirical variance.
inline double bernstein_variance_term(double delta, std::size_t m_directions, double variance) {
  if (!(delta > 0.0 && delta < 1.0)) throw InvalidDelta("delta must lie in (0,1)");
  return std::sqrt(2.0 * variance * std::log(2.0 / delta) / static_cast<double>(m_directions));
}

// Null-hypothesis tail bound C exp(-N (gamma - eps(delta))^2) + delta,
// valid only when eps(delta) < gamma.
inline double bernstein_null_bound(double gamma, double delta, std::size_t n_samples,
                                   std::size_t m_directions, double dkw_constant) {
  const double eps = bernstein_epsilon(delta, m_directions);
  if (eps >= gamma)
    throw HypothesisViolated("bias term must be smaller than gamma for this bound");
  const double d = gamma - eps;
  return dkw_constant * std::exp(-static_cast<double>(n_samples) * d * d) + delta;
}

// Inputs of the threshold minimization.
struct ThresholdConfig {
  double alpha = 0.05;                        // test level
  double dkw_constant = std::numbers::e;      // C, any value >= 2
  std::size_t delta_grid_size = 512;          // resolution of the delta search
  std::size_t directions = 2;                 // M
  std::size_t min_samples = 2;                // smallest N across data sets
  double max_variance = 0.0;                  // worst-case empirical variance

  void validate() const {
    if (!(alpha > 0.0 && alpha < 1.0)) throw InvalidConfig("alpha must lie in (0,1)");
    if (!(dkw_constant >= 2.0)) throw InvalidConfig("constant C must be at least 2");
    if (delta_grid_size < 16) throw InvalidConfig("delta grid needs at least 16 points");
    if (directions < 2) throw InvalidConfig("need at least 2 directions");
    if (min_samples < 2) throw InvalidConfig("need at least 2 samples per set");
    if (!(max_variance >= 0.0) || !std::isfinite(max_variance))
      throw InvalidConfig("variance must be finite and non-negative");
  }
};

// Cut threshold together with the delta that attains it.
struct ThresholdSelection {
  double value = 0.0;
  double delta = 0.0;
};

namespace detail {

inline double threshold_objective(double delta, const ThresholdConfig& cfg) {
  const double n = static_cast<double>(cfg.min_samples);
  return bernstein_variance_term(delta, cfg.directions, cfg.max_variance) +
         std::sqrt(std::log(cfg.dkw_constant / (cfg.alpha - delta)) / n) +
         bernstein_epsilon(delta, cfg.directions);
}

}  // namespace detail

// Minimizes variance_term(delta) + sqrt(log(C/(alpha-delta))/N) + eps(delta)
// over delta in (0, alpha): a log-spaced grid scan followed by one
// golden-section refinement inside the best grid cell. The objective blows
// up at both ends and is strictly convex in between, so the refined cell
// brackets the global minimum.
inline ThresholdSelection select_cut_threshold(const ThresholdConfig& cfg) {
  cfg.validate();
  const double lo = cfg.alpha * 1e-6;
  const double hi = cfg.alpha * (1.0 - 1e-6);
  const std::size_t k = cfg.delta_grid_size;

  ThresholdSelection best{detail::threshold_objective(lo, cfg), lo};
  std::size_t best_i = 0;
  const double ratio = hi / lo;
  auto grid_point = [&](std::size_t i) {
    return lo * std::pow(ratio, static_cast<double>(i) / static_cast<double>(k - 1));
  };
  for (std::size_t i = 1; i < k; ++i) {
    const double d = grid_point(i);
    const double f = detail::threshold_objective(d, cfg);
    if (f < best.value) {
      best = {f, d};
      best_i = i;
    }
  }

  double a = grid_point(best_i == 0 ? 0 : best_i - 1);
  double b = grid_point(std::min(best_i + 1, k - 1));
  constexpr double inv_phi = 0.6180339887498949;
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double fc = detail::threshold_objective(c, cfg);
  double fd = detail::threshold_objective(d, cfg);
  for (int it = 0; it < 200 && (b - a) > 1e-14 * cfg.alpha; ++it) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = detail::threshold_objective(c, cfg);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = detail::threshold_objective(d, cfg);
    }
    if (fc < best.value) best = {fc, c};
    if (fd < best.value) best = {fd, d};
  }
  return best;
}

}  // namespace lawclust
