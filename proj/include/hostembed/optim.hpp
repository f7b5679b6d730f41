#pragma once

// Deterministic bracketed 1-D optimization: dense grid, then golden-section
// refinement of the best grid cell. Everything here runs on compact intervals.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <utility>
#include <vector>

#include "hostembed/errors.hpp"

namespace hostembed::optim {

inline constexpr std::size_t kDefaultGridPoints = 2001;
inline constexpr double kDefaultTol = 1e-10;

struct ScalarOptResult {
  double arg = 0.0;
  double value = 0.0;
  std::size_t evaluations = 0;
};

struct InfSupResult {
  double outer_arg = 0.0;
  ScalarOptResult inner;
  std::size_t outer_evaluations = 0;
};

enum class Sense { maximize, minimize };

namespace detail {

inline bool better(Sense sense, double candidate, double incumbent) {
  return sense == Sense::maximize ? candidate > incumbent : candidate < incumbent;
}

template <class F>
double checked_eval(F& f, double x) {
  const double v = f(x);
  if (std::isnan(v)) throw NumericDomainError("objective returned NaN", x);
  return v;
}

inline double grid_point(double lo, double hi, std::size_t i, std::size_t n) {
  if (i + 1 == n) return hi;
  return lo + (hi - lo) * (static_cast<double>(i) / static_cast<double>(n - 1));
}

inline void validate_bracket(double lo, double hi, std::size_t grid_points, double tol) {
  if (!(lo <= hi)) throw ValidationError("optimization bracket requires lo <= hi");
  if (grid_points < 3) throw ValidationError("optimization grid needs at least 3 points");
  if (!(tol > 0.0)) throw ValidationError("optimization tolerance must be positive");
}

}  // namespace detail

// Golden-section search on [a, b]. The best point seen over the whole run is
// returned, so a smaller tol can only improve the result.
template <class F>
ScalarOptResult golden_section(F&& f, double a, double b, double tol, Sense sense,
                               ScalarOptResult incumbent) {
  constexpr double kInvPhi = 0.6180339887498949;
  constexpr int kMaxIterations = 300;
  auto consider = [&](double x, double v) {
    ++incumbent.evaluations;
    if (detail::better(sense, v, incumbent.value)) {
      incumbent.arg = x;
      incumbent.value = v;
    }
  };
  if (!(b > a)) return incumbent;
  double c = b - kInvPhi * (b - a);
  double d = a + kInvPhi * (b - a);
  double fc = detail::checked_eval(f, c);
  double fd = detail::checked_eval(f, d);
  consider(c, fc);
  consider(d, fd);
  for (int it = 0; it < kMaxIterations; ++it) {
    if (b - a <= tol * std::max(1.0, std::abs(a) + std::abs(b))) break;
    // Ties move toward the lower end, matching the grid tie-break.
    if (!detail::better(sense, fd, fc)) {
      b = d;
      d = c;
      fd = fc;
      c = b - kInvPhi * (b - a);
      fc = detail::checked_eval(f, c);
      consider(c, fc);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + kInvPhi * (b - a);
      fd = detail::checked_eval(f, d);
      consider(d, fd);
    }
  }
  return incumbent;
}

// Refines an already evaluated uniform grid on [lo, hi]. `values[i]` must equal
// f(grid_point(i)). The lowest-index best sample wins before refinement.
template <class F>
ScalarOptResult refine_grid(F&& f, double lo, double hi, std::span<const double> values,
                            double tol, Sense sense) {
  const std::size_t n = values.size();
  if (n == 0) throw ValidationError("empty grid");
  std::size_t best = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (std::isnan(values[i])) {
      throw NumericDomainError("objective returned NaN", detail::grid_point(lo, hi, i, n));
    }
    if (detail::better(sense, values[i], values[best])) best = i;
  }
  ScalarOptResult result{detail::grid_point(lo, hi, best, n), values[best], n};
  if (n < 2 || hi == lo) return result;
  const double a = detail::grid_point(lo, hi, best == 0 ? 0 : best - 1, n);
  const double b = detail::grid_point(lo, hi, std::min(best + 1, n - 1), n);
  return golden_section(f, a, b, tol, sense, result);
}

template <class F>
ScalarOptResult optimize_on_interval(F&& f, double lo, double hi, std::size_t grid_points,
                                     double tol, Sense sense) {
  detail::validate_bracket(lo, hi, grid_points, tol);
  if (lo == hi) {
    return {lo, detail::checked_eval(f, lo), 1};
  }
  std::vector<double> values(grid_points);
  for (std::size_t i = 0; i < grid_points; ++i) {
    values[i] = f(detail::grid_point(lo, hi, i, grid_points));
  }
  return refine_grid(f, lo, hi, values, tol, sense);
}

template <class F>
ScalarOptResult maximize_on_interval(F&& f, double lo, double hi,
                                     std::size_t grid_points = kDefaultGridPoints,
                                     double tol = kDefaultTol) {
  return optimize_on_interval(std::forward<F>(f), lo, hi, grid_points, tol, Sense::maximize);
}

template <class F>
ScalarOptResult minimize_on_interval(F&& f, double lo, double hi,
                                     std::size_t grid_points = kDefaultGridPoints,
                                     double tol = kDefaultTol) {
  return optimize_on_interval(std::forward<F>(f), lo, hi, grid_points, tol, Sense::minimize);
}

// Outer minimization of an inner supremum. `inner(y)` returns the inner
// ScalarOptResult for outer point y. Outer values within tol of the best count
// as ties, so flat landscapes resolve to the lowest grid index, and refinement
// is adopted only when it improves by more than tol.
template <class Inner>
InfSupResult inf_sup(double outer_lo, double outer_hi, Inner&& inner,
                     std::size_t grid_points = kDefaultGridPoints, double tol = kDefaultTol) {
  detail::validate_bracket(outer_lo, outer_hi, grid_points, tol);
  std::size_t outer_evals = 0;
  auto outer = [&](double y) {
    ++outer_evals;
    return inner(y).value;
  };
  if (outer_lo == outer_hi) return {outer_lo, inner(outer_lo), 1};

  std::vector<double> values(grid_points);
  double best_value = INFINITY;
  for (std::size_t i = 0; i < grid_points; ++i) {
    values[i] = detail::checked_eval(outer, detail::grid_point(outer_lo, outer_hi, i, grid_points));
    best_value = std::min(best_value, values[i]);
  }
  const double slack = tol * std::max(1.0, std::abs(best_value));
  std::size_t pick = 0;
  while (values[pick] > best_value + slack) ++pick;

  const ScalarOptResult grid_best{detail::grid_point(outer_lo, outer_hi, pick, grid_points),
                                  values[pick], grid_points};
  const double a = detail::grid_point(outer_lo, outer_hi, pick == 0 ? 0 : pick - 1, grid_points);
  const double b = detail::grid_point(outer_lo, outer_hi, std::min(pick + 1, grid_points - 1), grid_points);
  const ScalarOptResult refined = golden_section(outer, a, b, tol, Sense::minimize, grid_best);
  const double arg = refined.value < grid_best.value - slack ? refined.arg : grid_best.arg;
  return {arg, inner(arg), outer_evals};
}

}  // namespace hostembed::optim
