#pragma once

#include <cstddef>
#include <optional>

#include "hostembed/model.hpp"
#include "hostembed/optim.hpp"

namespace hostembed {

// The two composite terms of the converse objective at fixed sigma_xv:
// c = sqrt(sigma^2 2^{2R} / (1 + sigma^2 + P + 2 sigma_xv)) and
// b(gamma) = sqrt((1-gamma)^2 sigma^2 + gamma^2 P - 2 gamma (1-gamma) sigma_xv).
struct GammaObjectiveTerms {
  double sigma2 = 1.0;
  double power = 0.0;
  double sigma_xv = 0.0;
  double c = 0.0;

  double b(double gamma) const;
  // (1/gamma^2) ((c - b(gamma))^+)^2; gamma must be non-zero.
  double objective(double gamma) const;
};

GammaObjectiveTerms gamma_terms(const ProblemParams& params, double sigma_xv);

// Exact sup over gamma > 0 of the converse objective at `sigma_xv`.
double gamma_sup(const ProblemParams& params, double sigma_xv);
// Maximizing gamma of `gamma_sup`; nullopt when the sup is only approached as
// gamma -> 0+ (c equals sigma).
std::optional<double> gamma_sup_argmax(const ProblemParams& params, double sigma_xv);

// Grid + golden search of the sup over gamma in [1e-6, 4] plus the gamma*
// candidate. Slower than `gamma_sup`; kept as an independent check.
optim::ScalarOptResult gamma_sup_numeric(const ProblemParams& params, double sigma_xv,
                                         std::size_t grid_points = optim::kDefaultGridPoints,
                                         double tol = optim::kDefaultTol);

// sup over gamma < 0 minus sup over gamma > 0, both exact. Positive values mean
// a negative gamma would tighten the bound at this sigma_xv.
double negative_gamma_gain(const ProblemParams& params, double sigma_xv);

// Objective at gamma* = (sigma^2 + sigma_xv)/(sigma^2 + P + 2 sigma_xv).
// Returns nullopt when the numerator vanishes (gamma* = 0 is not admissible).
std::optional<double> mmse_lower_gamma_star_candidate(const ProblemParams& params,
                                                      double sigma_xv);

struct LowerBoundOptions {
  std::size_t grid_points = optim::kDefaultGridPoints;
  double tol = optim::kDefaultTol;
};

// inf over sigma_xv of sup over gamma of the converse objective.
BoundResult mmse_lower_full(const ProblemParams& params, const LowerBoundOptions& opts = {});

// ((sqrt(sigma^2 2^{2R}/(sigma^2 + P + 2 sigma sqrt(P) + 1)) - sqrt(P))^+)^2
BoundResult mmse_lower_loosened(const ProblemParams& params);

// ((sqrt(sigma^2/((sigma + sqrt(P))^2 + 1)) - sqrt(P))^+)^2; defined for R = 0 only.
BoundResult mmse_lower_legacy(const ProblemParams& params);

// Converse objective at gamma = 1, minimized numerically over sigma_xv.
BoundResult mmse_lower_gamma_one(const ProblemParams& params, const LowerBoundOptions& opts = {});

BoundResult mmse_lower(const ProblemParams& params, BoundVariant variant,
                       const LowerBoundOptions& opts = {});

struct PowerForMmse {
  double power = 0.0;
  // Target at or above sigma^2/(sigma^2+1): the least feasible power is returned.
  bool trivially_satisfied = false;
};

inline constexpr double kPowerBisectionTol = 1e-8;
// Relative slack on MMSE targets in the power inversions.
inline constexpr double kTargetSlack = 1e-12;

// Smallest P >= 2^{2R}-1 with mmse_lower(P) <= target, by bisection.
PowerForMmse power_lower_for_mmse(double sigma2, double rate, double target_mmse,
                                  BoundVariant variant = BoundVariant::full);

}  // namespace hostembed
