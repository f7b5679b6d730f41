#pragma once

#include <cstddef>
#include <optional>
#include <string_view>

#include "hostembed/model.hpp"
#include "hostembed/optim.hpp"

namespace hostembed {

struct CostOptions {
  std::size_t power_grid_points = 401;
  double tol = optim::kDefaultTol;
};

struct CostResult {
  double value = 0.0;
  double p_star = 0.0;
};

// Upper end of the power search: 64 max(2^{2R}, sigma^2, 1).
double cost_power_cap(const WeightedCostParams& params);

// inf over P >= 2^{2R}-1 of k^2 P + mmse_lower(P) for the given bound variant.
CostResult cost_lower(const WeightedCostParams& params, BoundVariant variant = BoundVariant::full,
                      const CostOptions& opts = {});

// Same envelope with the numeric achievable distortion.
CostResult cost_upper(const WeightedCostParams& params, const CostOptions& opts = {});

enum class Region { case1, case2, case3, case4a, case4b };

std::string_view to_string(Region r);

struct RegionClass {
  Region region = Region::case1;
  // Bound on cost_upper_analytical / cost lower bound proven for this region.
  double certificate = 0.0;
  // sigma^2 2^{2R} / ((sigma + sqrt(P*))^2 + 1)
  double kappa = 0.0;
};

// First matching case in order: R >= 1/4; P* >= 2^{2R}/16; sigma^2 > 1;
// P* >= sigma^2/8; otherwise.
RegionClass classify_region(const WeightedCostParams& params, double p_star);

struct CostSandwich {
  double j_lb = 0.0;
  double j_ub_numeric = 0.0;
  double j_ub_analytical = 0.0;
  double ratio = 0.0;             // j_ub_numeric / j_lb
  double ratio_analytical = 0.0;  // j_ub_analytical / j_lb
  double p_star_lb = 0.0;
  double p_star_ub = 0.0;
  // Classification at the loosened-bound optimizer, for which the
  // certificate is proven.
  RegionClass region;
  double p_star_loosened = 0.0;
  // Classification at the full-bound optimizer when it differs.
  std::optional<RegionClass> region_full;
};

CostSandwich cost_sandwich(const WeightedCostParams& params, const CostOptions& opts = {});

// Constants of the region analysis.
double region_constant_kappa_floor();  // 1/((1 + 2^{1/4}/4)^2 + 1)
double region_constant_case3_gap();    // (sqrt(0.37) - 2^{1/4}/4)^2
double region_constant_case4b_gap();   // (sqrt(1/2.69) - sqrt(1/8))^2

}  // namespace hostembed
