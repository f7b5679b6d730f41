#include "hostembed/lower_bounds.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <vector>

#include "hostembed/errors.hpp"
#include "hostembed/kernels.hpp"

namespace hostembed {

namespace {

constexpr double kGammaLo = 1e-6;
constexpr double kGammaHi = 4.0;

kernels::ConverseCoeffs coeffs(const ProblemParams& p) {
  return {p.sigma2, p.power, p.rate_factor()};
}

double converse_at(const kernels::ConverseCoeffs& k, double sigma_xv) {
  std::array<double, 1> in{sigma_xv};
  std::array<double, 1> out{};
  kernels::converse_objective(k, in, out);
  return out[0];
}

// Unconstrained maximizer u* of c u - sqrt(sigma^2 u^2 - 2 B u + S) with u = 1/gamma.
double best_inverse_gamma(const ProblemParams& p, double sigma_xv) {
  const double s2 = p.sigma2;
  const double c2 = s2 * p.rate_factor() / (1.0 + s2 + p.power + 2.0 * sigma_xv);
  const double d = std::sqrt(std::max(s2 * p.power - sigma_xv * sigma_xv, 0.0)) / s2;
  const double e = std::sqrt(std::max(s2 - c2, 0.0));
  if (e == 0.0) return INFINITY;
  return (s2 + sigma_xv) / s2 + std::sqrt(c2) * d / e;
}

double positive_part_squared(double x) { return x > 0.0 ? x * x : 0.0; }

}  // namespace

double GammaObjectiveTerms::b(double gamma) const {
  const double radicand = (1.0 - gamma) * (1.0 - gamma) * sigma2 + gamma * gamma * power -
                          2.0 * gamma * (1.0 - gamma) * sigma_xv;
  return std::sqrt(std::max(radicand, 0.0));
}

double GammaObjectiveTerms::objective(double gamma) const {
  if (gamma == 0.0) throw NumericDomainError("gamma = 0 is not admissible", gamma);
  return positive_part_squared(c - b(gamma)) / (gamma * gamma);
}

GammaObjectiveTerms gamma_terms(const ProblemParams& params, double sigma_xv) {
  params.validate();
  const double denom = 1.0 + params.sigma2 + params.power + 2.0 * sigma_xv;
  if (!(denom > 0.0)) throw NumericDomainError("1 + sigma^2 + P + 2 sigma_xv must be positive", sigma_xv);
  return {params.sigma2, params.power, sigma_xv,
          std::sqrt(params.sigma2 * params.rate_factor() / denom)};
}

double gamma_sup(const ProblemParams& params, double sigma_xv) {
  params.validate();
  return converse_at(coeffs(params), sigma_xv);
}

std::optional<double> gamma_sup_argmax(const ProblemParams& params, double sigma_xv) {
  params.validate();
  const double u = best_inverse_gamma(params, sigma_xv);
  if (!std::isfinite(u)) return std::nullopt;
  if (u <= 0.0) return std::nullopt;
  return 1.0 / u;
}

optim::ScalarOptResult gamma_sup_numeric(const ProblemParams& params, double sigma_xv,
                                         std::size_t grid_points, double tol) {
  const GammaObjectiveTerms terms = gamma_terms(params, sigma_xv);
  auto f = [&](double gamma) { return terms.objective(gamma); };
  optim::ScalarOptResult best = optim::maximize_on_interval(f, kGammaLo, kGammaHi, grid_points, tol);
  const double denom = params.sigma2 + params.power + 2.0 * sigma_xv;
  if (denom > 0.0) {
    const double gamma_star = (params.sigma2 + sigma_xv) / denom;
    if (gamma_star > 0.0) {
      const double v = f(gamma_star);
      ++best.evaluations;
      if (v > best.value) best = {gamma_star, v, best.evaluations};
    }
  }
  return best;
}

double negative_gamma_gain(const ProblemParams& params, double sigma_xv) {
  params.validate();
  const double s2 = params.sigma2;
  const double c2 = s2 * params.rate_factor() / (1.0 + s2 + params.power + 2.0 * sigma_xv);
  const double d = std::sqrt(std::max(s2 * params.power - sigma_xv * sigma_xv, 0.0));
  const double e = std::sqrt(std::max(s2 - c2, 0.0));
  const double c = std::sqrt(c2);
  const double pos = positive_part_squared((c * (s2 + sigma_xv) - d * e) / s2);
  const double neg = positive_part_squared((-c * (s2 + sigma_xv) - d * e) / s2);
  return neg - pos;
}

std::optional<double> mmse_lower_gamma_star_candidate(const ProblemParams& params,
                                                      double sigma_xv) {
  // gamma* vanishes with its numerator; that includes the 0/0 corner
  // sigma_xv = -sigma^2 = -sigma sqrt(P).
  if (params.sigma2 + sigma_xv == 0.0) return std::nullopt;
  const double denom = params.sigma2 + params.power + 2.0 * sigma_xv;
  if (!(denom > 0.0)) throw NumericDomainError("sigma^2 + P + 2 sigma_xv must be positive", sigma_xv);
  const double gamma_star = (params.sigma2 + sigma_xv) / denom;
  return gamma_terms(params, sigma_xv).objective(gamma_star);
}

BoundResult mmse_lower_full(const ProblemParams& params, const LowerBoundOptions& opts) {
  const Interval range = sigma_xv_interval(params);
  const kernels::ConverseCoeffs k = coeffs(params);
  auto f = [&](double s) { return converse_at(k, s); };

  optim::ScalarOptResult best;
  if (range.width() == 0.0) {
    best = {range.lo, f(range.lo), 1};
  } else {
    if (opts.grid_points < 3) throw ValidationError("lower bound grid needs at least 3 points");
    const std::size_t n = opts.grid_points;
    std::vector<double> xs(n);
    for (std::size_t i = 0; i < n; ++i) xs[i] = optim::detail::grid_point(range.lo, range.hi, i, n);
    std::vector<double> values(n);
    kernels::converse_objective(k, xs, values);
    best = optim::refine_grid(f, range.lo, range.hi, values, opts.tol, optim::Sense::minimize);
  }
  BoundResult out{best.value, best.arg, std::nullopt, BoundVariant::full};
  out.witness_gamma = gamma_sup_argmax(params, best.arg).value_or(kGammaLo);
  return out;
}

BoundResult mmse_lower_loosened(const ProblemParams& params) {
  require_feasible(params);
  const double sigma = params.sigma();
  const double root_p = std::sqrt(params.power);
  const double target = std::sqrt(params.sigma2 * params.rate_factor() /
                                  (params.sigma2 + params.power + 2.0 * sigma * root_p + 1.0));
  return {positive_part_squared(target - root_p), sigma * root_p, std::nullopt,
          BoundVariant::loosened};
}

BoundResult mmse_lower_legacy(const ProblemParams& params) {
  params.validate();
  if (params.rate != 0.0) {
    throw UnsupportedVariantError("the legacy bound is defined for rate 0 only");
  }
  const double sigma = params.sigma();
  const double root_p = std::sqrt(params.power);
  const double target =
      std::sqrt(params.sigma2 / ((sigma + root_p) * (sigma + root_p) + 1.0));
  return {positive_part_squared(target - root_p), sigma * root_p, std::nullopt,
          BoundVariant::legacy};
}

BoundResult mmse_lower_gamma_one(const ProblemParams& params, const LowerBoundOptions& opts) {
  const Interval range = sigma_xv_interval(params);
  const double root_p = std::sqrt(params.power);
  const double num = params.sigma2 * params.rate_factor();
  auto f = [&](double s) {
    return positive_part_squared(std::sqrt(num / (params.sigma2 + params.power + 2.0 * s + 1.0)) -
                                 root_p);
  };
  const optim::ScalarOptResult best =
      optim::minimize_on_interval(f, range.lo, range.hi, opts.grid_points, opts.tol);
  return {best.value, best.arg, 1.0, BoundVariant::gamma_one};
}

BoundResult mmse_lower(const ProblemParams& params, BoundVariant variant,
                       const LowerBoundOptions& opts) {
  switch (variant) {
    case BoundVariant::full: return mmse_lower_full(params, opts);
    case BoundVariant::loosened: return mmse_lower_loosened(params);
    case BoundVariant::legacy: return mmse_lower_legacy(params);
    case BoundVariant::gamma_one: return mmse_lower_gamma_one(params, opts);
  }
  throw UnsupportedVariantError("unknown bound variant");
}

PowerForMmse power_lower_for_mmse(double sigma2, double rate, double target_mmse,
                                  BoundVariant variant) {
  const ProblemParams base = make_params(sigma2, 0.0, rate);
  if (!std::isfinite(target_mmse) || target_mmse < 0.0) {
    throw ValidationError("target MMSE must be a non-negative finite number");
  }
  const double p_min = base.min_power();
  if (target_mmse > sigma2 / (sigma2 + 1.0)) return {p_min, true};

  // Bound values carry rounding of a few ulps; a target met up to that counts.
  const double goal = target_mmse * (1.0 + kTargetSlack);
  auto bound_at = [&](double power) {
    return mmse_lower(ProblemParams{sigma2, power, rate, 1.0}, variant).value;
  };
  if (bound_at(p_min) <= goal) return {p_min, false};

  double lo = p_min;
  double hi = std::max(1.0, 2.0 * p_min);
  int doublings = 0;
  while (bound_at(hi) > goal) {
    lo = hi;
    hi *= 2.0;
    if (++doublings > 80) throw SearchError("could not bracket the power for the target MMSE");
  }
  while (hi - lo > kPowerBisectionTol) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (bound_at(mid) <= goal) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return {hi, false};
}

}  // namespace hostembed
