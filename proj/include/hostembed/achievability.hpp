#pragma once

#include <array>
#include <cstddef>
#include <string_view>

#include "hostembed/model.hpp"
#include "hostembed/optim.hpp"

namespace hostembed {

// Linear scaling by (1 - beta) followed by dirty-paper coding with parameter
// alpha on the scaled host.
struct StrategyParams {
  double alpha = 0.0;
  double beta = 0.0;
  double sigma2 = 1.0;
  double power = 0.0;

  double p_lin() const { return beta * beta * sigma2; }
  // Clamped at zero to absorb rounding when beta^2 sigma^2 == P.
  double p_dpc() const;
  double sigma_tilde2() const { return sigma2 * (1.0 - beta) * (1.0 - beta); }

  void validate() const;
};

StrategyParams make_strategy(double alpha, double beta, double sigma2, double power);

enum class StrategyVariant { dpc_general, dpc_one, dpc_costa, cancel };

std::string_view to_string(StrategyVariant v);

struct AchievablePoint {
  double rate = 0.0;
  double mmse = 0.0;
  StrategyParams strategy;
  StrategyVariant variant = StrategyVariant::dpc_general;
};

// Rate at which the auxiliary codeword (and its message bin) is decodable:
// 1/2 log2(Pd (Pd + st2 + 1) / (Pd st2 (1-alpha)^2 + Pd + alpha^2 st2)).
// May be negative. Throws NumericDomainError when P_dpc = 0.
double dpc_rate(const StrategyParams& s);

// Distortion of the joint linear estimate of X1 from (Y, T).
double lmmse_joint(const StrategyParams& s);
// Estimate from T alone.
double lmmse_t_only(const StrategyParams& s);
// Estimate from Y alone: Var(X1)/(Var(X1) + 1).
double lmmse_y_only(const StrategyParams& s);

struct UpperBoundOptions {
  std::size_t beta_grid_points = 401;
  double tol = optim::kDefaultTol;
};

// Least distortion over the (alpha, beta) box subject to dpc_rate >= R, with
// the closed-form strategies as extra candidates.
AchievablePoint mmse_upper_numeric(const ProblemParams& params, const UpperBoundOptions& opts = {});

struct AnalyticalCost {
  double value = 0.0;
  StrategyVariant branch = StrategyVariant::dpc_one;
  // dpc_one, dpc_costa, cancel in that order.
  std::array<double, 3> branches{};
};

// min{k^2 2^{2R}, k^2 (2^{2R}-1) + min{1, sigma^2/(2^{4R} + (2^{2R}-1) sigma^2)},
//     k^2 (sigma^2 + 2^{2R} - 1)}
AnalyticalCost cost_upper_analytical(const WeightedCostParams& params);

struct RateWitness {
  double rate = 0.0;
  double witness = 0.0;  // sigma_xv or P_lin, depending on the route
};

// Largest rate with asymptotically perfect recovery of X1, as a sup over
// sigma_xv in [-sigma sqrt(P), 0]. -infinity when P = 0.
RateWitness perfect_rate_r0_detail(double sigma2, double power);
double perfect_rate_r0(double sigma2, double power);

// Same quantity by the achievability route: sup over P_lin in [0, min(P, sigma^2)]
// of dpc_rate(alpha = 1, beta = sqrt(P_lin)/sigma).
RateWitness perfect_rate_via_dpc(double sigma2, double power);

inline constexpr double kPerfectPowerTol = 1e-8;

// Smallest P with perfect_rate_r0(sigma2, P) >= rate.
double min_power_for_perfect(double sigma2, double rate);

// Smallest P whose upper bound reaches the target distortion (bisection).
double power_upper_for_mmse(double sigma2, double rate, double target_mmse);

}  // namespace hostembed
