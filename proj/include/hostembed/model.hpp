#pragma once

#include <optional>
#include <string_view>

namespace hostembed {

// Smallest admissible host variance.
inline constexpr double kMinSigma2 = 1e-12;

// Host variance, power budget and message rate for the Gaussian embedding
// problem. The channel noise variance is fixed at one; callers normalize.
struct ProblemParams {
  double sigma2 = 1.0;
  double power = 0.0;
  double rate = 0.0;  // bits per channel use
  double noise_var = 1.0;

  // Throws ValidationError when any invariant is violated.
  void validate() const;

  double sigma() const;
  // 2^{2R}
  double rate_factor() const;
  // 2^{2R} - 1, the least power that supports rate R.
  double min_power() const;
};

ProblemParams make_params(double sigma2, double power, double rate);

struct WeightedCostParams {
  ProblemParams base;  // power is ignored
  double k2 = 1.0;

  void validate() const;
};

WeightedCostParams make_cost_params(double k2, double sigma2, double rate);

struct Interval {
  double lo = 0.0;
  double hi = 0.0;

  double width() const { return hi - lo; }
  bool contains(double x) const { return x >= lo && x <= hi; }
};

enum class BoundVariant { full, loosened, legacy, gamma_one };

std::string_view to_string(BoundVariant v);
std::optional<BoundVariant> parse_bound_variant(std::string_view name);

struct BoundResult {
  double value = 0.0;
  double witness_sigma_xv = 0.0;
  std::optional<double> witness_gamma;
  BoundVariant variant = BoundVariant::full;
};

// True iff power >= 2^{2R} - 1.
bool feasible(const ProblemParams& params);

// Throws InfeasibleError when !feasible(params).
void require_feasible(const ProblemParams& params);

// Admissible range of the host/input correlation E[X0 V]:
// [max{-sigma sqrt(P), (2^{2R} - 1 - P - sigma^2)/2}, sigma sqrt(P)].
Interval sigma_xv_interval(const ProblemParams& params);

}  // namespace hostembed
