#include "hostembed/model.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "hostembed/errors.hpp"

namespace hostembed {

namespace {

void require_finite(double v, const char* name) {
  if (!std::isfinite(v)) throw ValidationError(std::string(name) + " must be finite");
}

}  // namespace

void ProblemParams::validate() const {
  require_finite(sigma2, "sigma2");
  require_finite(power, "power");
  require_finite(rate, "rate");
  if (sigma2 <= kMinSigma2) throw ValidationError("sigma2 must exceed 1e-12");
  if (power < 0.0) throw ValidationError("power must be non-negative");
  if (rate < 0.0) throw ValidationError("rate must be non-negative");
  if (noise_var != 1.0) throw ValidationError("noise variance is fixed at 1");
}

double ProblemParams::sigma() const { return std::sqrt(sigma2); }

double ProblemParams::rate_factor() const { return std::exp2(2.0 * rate); }

double ProblemParams::min_power() const { return std::exp2(2.0 * rate) - 1.0; }

ProblemParams make_params(double sigma2, double power, double rate) {
  ProblemParams p{sigma2, power, rate, 1.0};
  p.validate();
  return p;
}

void WeightedCostParams::validate() const {
  require_finite(base.sigma2, "sigma2");
  require_finite(base.rate, "rate");
  require_finite(k2, "k2");
  if (base.sigma2 <= kMinSigma2) throw ValidationError("sigma2 must exceed 1e-12");
  if (base.rate < 0.0) throw ValidationError("rate must be non-negative");
  if (k2 <= 0.0) throw ValidationError("k2 must be positive");
}

WeightedCostParams make_cost_params(double k2, double sigma2, double rate) {
  WeightedCostParams p{ProblemParams{sigma2, 0.0, rate, 1.0}, k2};
  p.validate();
  return p;
}

std::string_view to_string(BoundVariant v) {
  switch (v) {
    case BoundVariant::full: return "full";
    case BoundVariant::loosened: return "loosened";
    case BoundVariant::legacy: return "legacy";
    case BoundVariant::gamma_one: return "gamma_one";
  }
  return "unknown";
}

std::optional<BoundVariant> parse_bound_variant(std::string_view name) {
  if (name == "full") return BoundVariant::full;
  if (name == "loosened") return BoundVariant::loosened;
  if (name == "legacy") return BoundVariant::legacy;
  if (name == "gamma_one") return BoundVariant::gamma_one;
  return std::nullopt;
}

bool feasible(const ProblemParams& params) {
  params.validate();
  return params.power >= params.min_power();
}

void require_feasible(const ProblemParams& params) {
  if (!feasible(params)) {
    throw InfeasibleError("power " + std::to_string(params.power) +
                          " is below 2^{2R}-1 = " + std::to_string(params.min_power()));
  }
}

Interval sigma_xv_interval(const ProblemParams& params) {
  require_feasible(params);
  const double edge = params.sigma() * std::sqrt(params.power);
  const double rate_floor = (params.min_power() - params.power - params.sigma2) / 2.0;
  // Feasibility guarantees rate_floor <= edge; the clamp absorbs rounding at P = 2^{2R}-1.
  return {std::min(std::max(-edge, rate_floor), edge), edge};
}

}  // namespace hostembed
