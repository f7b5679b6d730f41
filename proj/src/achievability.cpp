#include "hostembed/achievability.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <tuple>
#include <vector>

#include "hostembed/errors.hpp"
#include "hostembed/lower_bounds.hpp"

namespace hostembed {

namespace {

// Rate constraints are closed; closed-form candidates that meet them with
// equality are accepted up to rounding.
constexpr double kRateSlack = 1e-12;
constexpr double kInf = std::numeric_limits<double>::infinity();

double rate_of(double p_dpc, double st2, double alpha) {
  const double den = p_dpc * st2 * (1.0 - alpha) * (1.0 - alpha) + p_dpc + alpha * alpha * st2;
  return 0.5 * std::log2(p_dpc * (p_dpc + st2 + 1.0) / den);
}

double mmse_of(double p_dpc, double st2, double alpha) {
  const double var_t = alpha * alpha * st2 + p_dpc;
  if (var_t == 0.0) return st2 / (st2 + 1.0);
  const double num = p_dpc * st2 * (1.0 - alpha) * (1.0 - alpha);
  return num / (num + var_t);
}

bool preferred(const AchievablePoint& a, const AchievablePoint& b) {
  return std::tie(a.mmse, a.strategy.beta, a.strategy.alpha) <
         std::tie(b.mmse, b.strategy.beta, b.strategy.alpha);
}

// Best alpha for a fixed beta. The rate constraint q(alpha) <= K is an
// interval because q is a convex quadratic; the distortion (1-alpha)^2/q(alpha)
// has its only minimum at alpha = 1 and one maximum, so on any interval the
// minimum sits at alpha = 1 or at an endpoint.
std::optional<AchievablePoint> best_for_beta(const ProblemParams& p, double beta) {
  StrategyParams s{0.0, beta, p.sigma2, p.power};
  const double pd = s.p_dpc();
  const double st2 = s.sigma_tilde2();
  if (pd <= 0.0) {
    if (p.rate != 0.0) return std::nullopt;
    return AchievablePoint{0.0, st2 / (st2 + 1.0), s, StrategyVariant::dpc_general};
  }
  if (st2 == 0.0) {
    s.alpha = 1.0;
    const double r = rate_of(pd, st2, 1.0);
    if (r < p.rate - kRateSlack) return std::nullopt;
    return AchievablePoint{r, 0.0, s, StrategyVariant::dpc_general};
  }
  const double a = st2 * (pd + 1.0);
  const double b = pd * st2;
  const double c = pd * (st2 + 1.0);
  const double k = pd * (pd + st2 + 1.0) / p.rate_factor();
  const double disc = b * b - a * (c - k);
  if (disc < 0.0) return std::nullopt;
  const double root = std::sqrt(disc);
  const double lo = std::max((b - root) / a, 0.0);
  const double hi = std::min((b + root) / a, 2.0);
  if (lo > hi) return std::nullopt;

  auto point_at = [&](double alpha) {
    StrategyParams t = s;
    t.alpha = alpha;
    return AchievablePoint{rate_of(pd, st2, alpha), mmse_of(pd, st2, alpha), t,
                           StrategyVariant::dpc_general};
  };
  if (lo <= 1.0 && 1.0 <= hi) return point_at(1.0);

  std::optional<AchievablePoint> best;
  for (double alpha : {lo, hi}) {
    AchievablePoint candidate = point_at(alpha);
    if (candidate.rate < p.rate - kRateSlack) continue;
    if (!best || preferred(candidate, *best)) best = candidate;
  }
  return best;
}

}  // namespace

double StrategyParams::p_dpc() const { return std::max(power - p_lin(), 0.0); }

void StrategyParams::validate() const {
  if (!std::isfinite(alpha) || !std::isfinite(beta) || !std::isfinite(sigma2) ||
      !std::isfinite(power)) {
    throw ValidationError("strategy parameters must be finite");
  }
  if (sigma2 <= kMinSigma2) throw ValidationError("sigma2 must exceed 1e-12");
  if (power < 0.0) throw ValidationError("power must be non-negative");
  if (beta < 0.0 || beta > 1.0) throw ValidationError("beta must lie in [0, 1]");
  if (alpha < 0.0 || alpha > 2.0) throw ValidationError("alpha must lie in [0, 2]");
  if (p_lin() > power * (1.0 + 1e-12) + 1e-300) {
    throw ValidationError("linear part beta^2 sigma^2 exceeds the power budget");
  }
}

StrategyParams make_strategy(double alpha, double beta, double sigma2, double power) {
  StrategyParams s{alpha, beta, sigma2, power};
  s.validate();
  return s;
}

std::string_view to_string(StrategyVariant v) {
  switch (v) {
    case StrategyVariant::dpc_general: return "dpc_general";
    case StrategyVariant::dpc_one: return "dpc_one";
    case StrategyVariant::dpc_costa: return "dpc_costa";
    case StrategyVariant::cancel: return "cancel";
  }
  return "unknown";
}

double dpc_rate(const StrategyParams& s) {
  const double pd = s.p_dpc();
  if (pd <= 0.0) throw NumericDomainError("degenerate strategy: no dirty-paper power", s.beta);
  return rate_of(pd, s.sigma_tilde2(), s.alpha);
}

double lmmse_joint(const StrategyParams& s) {
  const double pd = s.p_dpc();
  const double st2 = s.sigma_tilde2();
  if (pd == 0.0 && st2 == 0.0) {
    throw NumericDomainError("degenerate strategy: modified host is identically zero", s.beta);
  }
  return mmse_of(pd, st2, s.alpha);
}

double lmmse_t_only(const StrategyParams& s) {
  const double pd = s.p_dpc();
  const double st2 = s.sigma_tilde2();
  const double var_t = s.alpha * s.alpha * st2 + pd;
  if (var_t == 0.0) return st2 + pd;
  return pd * st2 * (1.0 - s.alpha) * (1.0 - s.alpha) / var_t;
}

double lmmse_y_only(const StrategyParams& s) {
  const double var_x1 = s.sigma_tilde2() + s.p_dpc();
  return var_x1 / (var_x1 + 1.0);
}

AchievablePoint mmse_upper_numeric(const ProblemParams& params, const UpperBoundOptions& opts) {
  require_feasible(params);
  const double sigma2 = params.sigma2;
  const double power = params.power;

  std::vector<AchievablePoint> candidates;
  auto offer = [&](std::optional<AchievablePoint> pt, StrategyVariant variant) {
    if (!pt) return;
    pt->variant = variant;
    candidates.push_back(*pt);
  };

  // DPC(alpha_Costa) without linear scaling; at P = 0 this is "no input".
  {
    const double alpha = power / (power + 1.0);
    StrategyParams s{alpha, 0.0, sigma2, power};
    if (power == 0.0) {
      offer(AchievablePoint{0.0, sigma2 / (sigma2 + 1.0), s, {}}, StrategyVariant::dpc_costa);
    } else {
      const double r = dpc_rate(s);
      if (r >= params.rate - kRateSlack) {
        offer(AchievablePoint{r, lmmse_joint(s), s, {}}, StrategyVariant::dpc_costa);
      }
    }
  }
  if (power > 0.0) {
    StrategyParams s{1.0, 0.0, sigma2, power};
    const double r = dpc_rate(s);
    if (r >= params.rate - kRateSlack) offer(AchievablePoint{r, 0.0, s, {}}, StrategyVariant::dpc_one);
  }
  if (power >= sigma2 + params.min_power() && power > sigma2) {
    StrategyParams s{1.0, 1.0, sigma2, power};
    offer(AchievablePoint{std::max(dpc_rate(s), params.rate), 0.0, s, {}}, StrategyVariant::cancel);
  }
  if (power > 0.0) {
    const RateWitness w = perfect_rate_via_dpc(sigma2, power);
    if (w.rate >= params.rate - kRateSlack) {
      const double beta = std::min(std::sqrt(w.witness / sigma2), 1.0);
      StrategyParams s{1.0, beta, sigma2, power};
      offer(AchievablePoint{w.rate, 0.0, s, {}}, StrategyVariant::dpc_general);
    }
  }

  const double beta_max = std::min(1.0, std::sqrt(power / sigma2));
  if (beta_max > 0.0) {
    auto objective = [&](double beta) {
      const auto pt = best_for_beta(params, beta);
      return pt ? pt->mmse : kInf;
    };
    const optim::ScalarOptResult best =
        optim::minimize_on_interval(objective, 0.0, beta_max, opts.beta_grid_points, opts.tol);
    offer(best_for_beta(params, best.arg), StrategyVariant::dpc_general);
  }

  if (candidates.empty()) {
    throw InfeasibleError("no admissible strategy reaches the requested rate");
  }
  return *std::min_element(candidates.begin(), candidates.end(),
                           [](const AchievablePoint& a, const AchievablePoint& b) {
                             return preferred(a, b);
                           });
}

AnalyticalCost cost_upper_analytical(const WeightedCostParams& params) {
  params.validate();
  const double k2 = params.k2;
  const double sigma2 = params.base.sigma2;
  const double f = params.base.rate_factor();
  const double estimation = std::min(1.0, sigma2 / (f * f + (f - 1.0) * sigma2));
  AnalyticalCost out;
  out.branches = {k2 * f, k2 * (f - 1.0) + estimation, k2 * (sigma2 + f - 1.0)};
  constexpr std::array<StrategyVariant, 3> kBranches{StrategyVariant::dpc_one,
                                                     StrategyVariant::dpc_costa,
                                                     StrategyVariant::cancel};
  std::size_t best = 0;
  for (std::size_t i = 1; i < 3; ++i) {
    if (out.branches[i] < out.branches[best]) best = i;
  }
  out.value = out.branches[best];
  out.branch = kBranches[best];
  return out;
}

RateWitness perfect_rate_r0_detail(double sigma2, double power) {
  const ProblemParams p = make_params(sigma2, power, 0.0);
  if (power == 0.0) return {-kInf, 0.0};
  const double edge = p.sigma() * std::sqrt(power);
  auto f = [&](double s) {
    const double signal = (edge - s) * (edge + s);
    const double x1_power = sigma2 + power + 2.0 * s;
    if (!(signal > 0.0) || !(x1_power > 0.0)) return -kInf;
    return 0.5 * std::log2(signal * (1.0 + x1_power) / (sigma2 * x1_power));
  };
  const optim::ScalarOptResult best = optim::maximize_on_interval(f, -edge, 0.0);
  return {best.value, best.arg};
}

double perfect_rate_r0(double sigma2, double power) {
  return perfect_rate_r0_detail(sigma2, power).rate;
}

RateWitness perfect_rate_via_dpc(double sigma2, double power) {
  make_params(sigma2, power, 0.0);
  if (power == 0.0) return {-kInf, 0.0};
  auto f = [&](double p_lin) {
    StrategyParams s{1.0, std::min(std::sqrt(p_lin / sigma2), 1.0), sigma2, power};
    const double pd = power - p_lin;
    if (!(pd > 0.0)) return -kInf;
    return rate_of(pd, s.sigma_tilde2(), 1.0);
  };
  const optim::ScalarOptResult best = optim::maximize_on_interval(f, 0.0, std::min(power, sigma2));
  return {best.value, best.arg};
}

double min_power_for_perfect(double sigma2, double rate) {
  const ProblemParams p = make_params(sigma2, 0.0, rate);
  double lo = p.min_power();
  if (perfect_rate_r0(sigma2, lo) >= rate) return lo;
  // Cancelling the host and coding over a clean channel always reaches the rate.
  double hi = sigma2 + p.min_power();
  for (int i = 0; perfect_rate_r0(sigma2, hi) < rate; ++i) {
    if (i > 60) throw SearchError("could not bracket the minimum power for perfect recovery");
    hi += std::max(hi, 1e-12) * 1e-9 * std::exp2(i);
  }
  while (hi - lo > kPerfectPowerTol) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (perfect_rate_r0(sigma2, mid) >= rate) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return hi;
}

double power_upper_for_mmse(double sigma2, double rate, double target_mmse) {
  const ProblemParams base = make_params(sigma2, 0.0, rate);
  if (!std::isfinite(target_mmse) || target_mmse < 0.0) {
    throw ValidationError("target MMSE must be a non-negative finite number");
  }
  const double goal = target_mmse * (1.0 + kTargetSlack);
  auto upper_at = [&](double power) {
    return mmse_upper_numeric(ProblemParams{sigma2, power, rate, 1.0}).mmse;
  };
  double lo = base.min_power();
  if (upper_at(lo) <= goal) return lo;
  double hi = sigma2 + base.min_power();
  if (upper_at(hi) > goal) throw SearchError("could not bracket the achievable power");
  while (hi - lo > kPerfectPowerTol) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (upper_at(mid) <= goal) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return hi;
}

}  // namespace hostembed
