#include "hostembed/weighted_cost.hpp"

#include <algorithm>
#include <cmath>

#include "hostembed/achievability.hpp"
#include "hostembed/errors.hpp"
#include "hostembed/lower_bounds.hpp"

namespace hostembed {

namespace {

constexpr double kZeroPowerTol = 1e-10;

// Minimizes k^2 P + mmse(P) over [lo, hi]. The grid is uniform in t with
// P = lo + (hi - lo) t^2, which packs samples near the least feasible power
// where the small-k optimum sits.
template <class Mmse>
CostResult envelope(double k2, double lo, double hi, Mmse&& mmse, const CostOptions& opts) {
  auto power_at = [&](double t) { return t >= 1.0 ? hi : lo + (hi - lo) * t * t; };
  auto cost = [&](double t) {
    const double pw = power_at(t);
    return k2 * pw + mmse(pw);
  };
  const optim::ScalarOptResult best =
      optim::minimize_on_interval(cost, 0.0, 1.0, opts.power_grid_points, opts.tol);
  return {best.value, power_at(best.arg)};
}

// Least power at which the chosen lower bound reaches zero.
double zero_power(const WeightedCostParams& params, BoundVariant variant) {
  const double sigma2 = params.base.sigma2;
  const double rate = params.base.rate;
  if (variant == BoundVariant::full) return min_power_for_perfect(sigma2, rate);
  auto bound_at = [&](double pw) {
    return mmse_lower(ProblemParams{sigma2, pw, rate, 1.0}, variant).value;
  };
  double lo = params.base.min_power();
  if (bound_at(lo) == 0.0) return lo;
  double hi = cost_power_cap(params);
  if (bound_at(hi) > 0.0) throw SearchError("lower bound does not vanish below the power cap");
  while (hi - lo > kZeroPowerTol * std::max(1.0, hi)) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (bound_at(mid) == 0.0) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return hi;
}

}  // namespace

double cost_power_cap(const WeightedCostParams& params) {
  return 64.0 * std::max({params.base.rate_factor(), params.base.sigma2, 1.0});
}

CostResult cost_lower(const WeightedCostParams& params, BoundVariant variant,
                      const CostOptions& opts) {
  params.validate();
  const double sigma2 = params.base.sigma2;
  const double rate = params.base.rate;
  const double lo = params.base.min_power();
  // Past the zero of the bound the cost only grows, and the zero never
  // exceeds the cancellation power sigma^2 + 2^{2R} - 1 < cap.
  const double hi = zero_power(params, variant);
  if (hi > cost_power_cap(params)) throw SearchError("power search range exceeds the cap");
  auto mmse = [&](double pw) {
    return mmse_lower(ProblemParams{sigma2, pw, rate, 1.0}, variant).value;
  };
  return envelope(params.k2, lo, hi, mmse, opts);
}

CostResult cost_upper(const WeightedCostParams& params, const CostOptions& opts) {
  params.validate();
  const double sigma2 = params.base.sigma2;
  const double rate = params.base.rate;
  const double lo = params.base.min_power();
  const double hi = std::max(lo, min_power_for_perfect(sigma2, rate));
  auto mmse = [&](double pw) {
    return mmse_upper_numeric(ProblemParams{sigma2, pw, rate, 1.0}).mmse;
  };
  CostResult best = envelope(params.k2, lo, hi, mmse, opts);
  // The analytical strategies' operating points.
  const double cap = cost_power_cap(params);
  for (double pw : {params.base.rate_factor(), sigma2 + params.base.min_power()}) {
    if (pw > cap) continue;
    const double v = params.k2 * pw + mmse(pw);
    if (v < best.value) best = {v, pw};
  }
  return best;
}

std::string_view to_string(Region r) {
  switch (r) {
    case Region::case1: return "case1";
    case Region::case2: return "case2";
    case Region::case3: return "case3";
    case Region::case4a: return "case4a";
    case Region::case4b: return "case4b";
  }
  return "unknown";
}

double region_constant_kappa_floor() {
  const double a = 1.0 + std::pow(2.0, 0.25) / 4.0;
  return 1.0 / (a * a + 1.0);
}

double region_constant_case3_gap() {
  const double g = std::sqrt(0.37) - std::pow(2.0, 0.25) / 4.0;
  return g * g;
}

double region_constant_case4b_gap() {
  const double g = std::sqrt(1.0 / 2.69) - std::sqrt(1.0 / 8.0);
  return g * g;
}

RegionClass classify_region(const WeightedCostParams& params, double p_star) {
  params.validate();
  if (!(p_star >= 0.0)) throw ValidationError("p_star must be non-negative");
  const double sigma2 = params.base.sigma2;
  const double f = params.base.rate_factor();
  const double root = params.base.sigma() + std::sqrt(p_star);
  RegionClass out;
  out.kappa = sigma2 * f / (root * root + 1.0);
  if (params.base.rate >= 0.25) {
    out.region = Region::case1;
    out.certificate = std::sqrt(2.0) / (std::sqrt(2.0) - 1.0);
  } else if (p_star >= f / 16.0) {
    out.region = Region::case2;
    out.certificate = 16.0;
  } else if (sigma2 > 1.0) {
    out.region = Region::case3;
    out.certificate = 1.0 / 0.09;
  } else if (p_star >= sigma2 / 8.0) {
    out.region = Region::case4a;
    out.certificate = 16.0;
  } else {
    out.region = Region::case4b;
    out.certificate = 1.0 / 0.065;
  }
  return out;
}

CostSandwich cost_sandwich(const WeightedCostParams& params, const CostOptions& opts) {
  const CostResult lower = cost_lower(params, BoundVariant::full, opts);
  const CostResult upper = cost_upper(params, opts);
  const CostResult loosened = cost_lower(params, BoundVariant::loosened, opts);
  CostSandwich out;
  out.j_lb = lower.value;
  out.j_ub_numeric = upper.value;
  out.j_ub_analytical = cost_upper_analytical(params).value;
  out.ratio = upper.value / lower.value;
  out.ratio_analytical = out.j_ub_analytical / lower.value;
  out.p_star_lb = lower.p_star;
  out.p_star_ub = upper.p_star;
  out.p_star_loosened = loosened.p_star;
  out.region = classify_region(params, loosened.p_star);
  const RegionClass full = classify_region(params, lower.p_star);
  if (full.region != out.region.region) out.region_full = full;
  return out;
}

}  // namespace hostembed
