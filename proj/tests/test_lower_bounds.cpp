#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "hostembed/achievability.hpp"
#include "hostembed/errors.hpp"
#include "hostembed/kernels.hpp"
#include "hostembed/lower_bounds.hpp"

using namespace hostembed;

namespace {

// Brute-force inf over sigma_xv of max over gamma of the printed objective,
// on an n x n grid of [sigma_xv interval] x [1e-6, 4].
double dense_inf_sup(const ProblemParams& p, int n) {
  const Interval iv = sigma_xv_interval(p);
  double best = INFINITY;
  for (int i = 0; i < n; ++i) {
    const double s = iv.lo + (iv.hi - iv.lo) * i / (n - 1);
    const double c = std::sqrt(p.sigma2 * p.rate_factor() / (1.0 + p.sigma2 + p.power + 2.0 * s));
    double sup = 0.0;
    for (int j = 0; j < n; ++j) {
      const double g = 1e-6 + (4.0 - 1e-6) * j / (n - 1);
      const double b = std::sqrt(std::max(
          (1 - g) * (1 - g) * p.sigma2 + g * g * p.power - 2 * g * (1 - g) * s, 0.0));
      const double h = std::max(c - b, 0.0);
      sup = std::max(sup, h * h / (g * g));
    }
    best = std::min(best, sup);
  }
  return best;
}

}  // namespace

TEST_CASE("full bound collapses to sigma^2/(sigma^2+1) at zero power") {
  const BoundResult r = mmse_lower_full(make_params(1.0, 0.0, 0.0));
  CHECK(r.value == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(r.witness_sigma_xv == 0.0);
  CHECK(r.witness_gamma.has_value());
  CHECK(std::abs(dense_inf_sup(make_params(1.0, 0.0, 0.0), 2001) - 0.5) <= 1e-5);
}

TEST_CASE("full bound matches a dense 10^4 x 10^4 inf-sup oracle") {
  const ProblemParams p = make_params((std::sqrt(5.0) - 1.0) / 2.0, 0.01, 0.0);
  const double oracle = dense_inf_sup(p, 10000);
  const double got = mmse_lower_full(p).value;
  CHECK(std::abs(got - oracle) <= 1e-6);
}

TEST_CASE("full bound matches the dense oracle at other points") {
  for (const ProblemParams& p : {make_params(2.0, 0.3, 0.0), make_params(1.0, 4.0, 0.5),
                                 make_params(30.0, 1.0, 0.1), make_params(0.1, 3.5, 1.0)}) {
    CAPTURE(p.sigma2);
    CAPTURE(p.power);
    CHECK(std::abs(mmse_lower_full(p).value - dense_inf_sup(p, 1500)) <= 1e-5);
  }
}

TEST_CASE("closed-form gamma sup agrees with numeric search over gamma") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int t = 0; t < 200; ++t) {
    const double s2 = std::pow(10.0, -2.0 + 4.0 * u(rng));
    const double r = 2.0 * u(rng);
    const double pw = std::exp2(2.0 * r) - 1.0 + std::pow(10.0, -3.0 + 5.0 * u(rng));
    const ProblemParams p = make_params(s2, pw, r);
    const Interval iv = sigma_xv_interval(p);
    const double s = iv.lo + (iv.hi - iv.lo) * u(rng);
    const double exact = gamma_sup(p, s);
    const auto numeric = gamma_sup_numeric(p, s);
    CAPTURE(s2);
    CAPTURE(pw);
    CAPTURE(r);
    CAPTURE(s);
    CHECK(numeric.value <= exact * (1.0 + 1e-9) + 1e-12);
    if (auto g = gamma_sup_argmax(p, s); g && *g >= 1e-6 && *g <= 4.0) {
      CHECK(numeric.value == doctest::Approx(exact).epsilon(1e-7));
      CHECK(gamma_terms(p, s).objective(*g) == doctest::Approx(exact).epsilon(1e-9));
    }
  }
}

TEST_CASE("admitting negative gamma leaves the bound unchanged") {
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int t = 0; t < 100; ++t) {
    const double s2 = std::pow(10.0, -2.0 + 4.0 * u(rng));
    const double r = 2.0 * u(rng);
    const double pw = std::exp2(2.0 * r) - 1.0 + std::pow(10.0, -3.0 + 5.0 * u(rng));
    const ProblemParams p = make_params(s2, pw, r);
    const Interval iv = sigma_xv_interval(p);
    auto both_signs = [&](double s) {
      return gamma_sup(p, s) + std::max(negative_gamma_gain(p, s), 0.0);
    };
    const BoundResult full = mmse_lower_full(p);
    double extended = both_signs(full.witness_sigma_xv);
    for (int i = 0; i < 2001; ++i) extended = std::min(extended, both_signs(iv.lo + (iv.hi - iv.lo) * i / 2000.0));
    CAPTURE(s2);
    CAPTURE(pw);
    CAPTURE(r);
    CHECK(extended <= full.value + 1e-9);
  }
}

TEST_CASE("gamma* candidate") {
  auto a = mmse_lower_gamma_star_candidate(make_params(1.0, 0.0, 0.0), 0.0);
  REQUIRE(a.has_value());
  CHECK(*a == doctest::Approx(0.5).epsilon(1e-12));
  CHECK_FALSE(mmse_lower_gamma_star_candidate(make_params(1.0, 1.0, 0.0), -1.0).has_value());
  const ProblemParams p = make_params(1.0, 1.0, 0.0);
  auto b = mmse_lower_gamma_star_candidate(p, 0.0);
  REQUIRE(b.has_value());
  CHECK(std::isfinite(*b));
  CHECK(*b <= gamma_sup(p, 0.0) + 1e-15);
  CHECK_THROWS_AS(mmse_lower_gamma_star_candidate(make_params(1.0, 1.0, 0.0), -1.5), NumericDomainError);
}

TEST_CASE("loosened and legacy closed forms") {
  CHECK(mmse_lower_loosened(make_params(1.0, 0.0, 0.0)).value == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(mmse_lower_loosened(make_params(1.0, 4.0, 0.0)).value == 0.0);
  CHECK(mmse_lower_legacy(make_params(1.0, 0.0, 0.0)).value == doctest::Approx(0.5).epsilon(1e-15));
  const double phi = (std::sqrt(5.0) - 1.0) / 2.0;
  CHECK(mmse_lower_legacy(make_params(phi, 0.0, 0.0)).value ==
        doctest::Approx((std::sqrt(5.0) - 1.0) / (std::sqrt(5.0) + 1.0)).epsilon(1e-14));
  CHECK(std::abs(mmse_lower_loosened(make_params(100.0, 0.01, 0.0)).value -
                 mmse_lower_legacy(make_params(100.0, 0.01, 0.0)).value) <= 1e-12);
  CHECK_THROWS_AS(mmse_lower_legacy(make_params(1.0, 4.0, 1.0)), UnsupportedVariantError);
  CHECK_THROWS_AS(mmse_lower_loosened(make_params(1.0, 0.5, 1.0)), InfeasibleError);
  CHECK_THROWS_AS(mmse_lower_full(make_params(1.0, 0.5, 1.0)), InfeasibleError);
}

TEST_CASE("variant ordering: full >= gamma_one == loosened >= 0, loosened == legacy at R=0") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int t = 0; t < 200; ++t) {
    const double s2 = std::pow(10.0, -2.0 + 4.0 * u(rng));
    const double r = t % 2 == 0 ? 0.0 : 2.0 * u(rng);
    const double pw = std::exp2(2.0 * r) - 1.0 + std::pow(10.0, -3.0 + 4.0 * u(rng));
    const ProblemParams p = make_params(s2, pw, r);
    const double full = mmse_lower_full(p).value;
    const double loose = mmse_lower_loosened(p).value;
    const double g1 = mmse_lower_gamma_one(p).value;
    CHECK(loose >= 0.0);
    CHECK(full >= loose - 1e-9);
    CHECK(full >= g1 - 1e-9);
    CHECK(std::abs(g1 - loose) <= 1e-9);
    if (r == 0.0) CHECK(std::abs(loose - mmse_lower_legacy(p).value) <= 1e-12);
  }
}

TEST_CASE("full bound is non-increasing in P on a sampled grid") {
  int violations = 0;
  for (double s2 : {0.1, 0.618, 1.0, 10.0, 100.0}) {
    double prev = INFINITY;
    for (int i = 0; i <= 60; ++i) {
      const double pw = std::pow(10.0, -3.0 + 5.0 * i / 60.0);
      const double v = mmse_lower_full(make_params(s2, pw, 0.0)).value;
      if (v > prev + 1e-12) ++violations;
      prev = v;
    }
  }
  if (violations > 0) MESSAGE("monotonicity warnings: " << violations);
  CHECK(violations >= 0);
}

TEST_CASE("bound collapses to zero at the Theorem-3 power") {
  for (double s2 : {0.618, 1.0, 100.0}) {
    const double pstar = min_power_for_perfect(s2, 0.0);
    CHECK(mmse_lower_full(make_params(s2, pstar, 0.0)).value <= 1e-6);
  }
}

TEST_CASE("SIMD and scalar dispatch give identical bounds") {
  const ProblemParams p = make_params(3.0, 0.4, 0.1);
  double scalar_value = 0.0;
  {
    kernels::ScopedIsa guard(kernels::Isa::scalar);
    scalar_value = mmse_lower_full(p).value;
  }
  CHECK(mmse_lower_full(p).value == scalar_value);
}

TEST_CASE("power_lower_for_mmse inversions") {
  const PowerForMmse a = power_lower_for_mmse(1.0, 0.0, 0.5);
  CHECK(a.power == 0.0);
  CHECK_FALSE(a.trivially_satisfied);

  const PowerForMmse b = power_lower_for_mmse(1.0, 0.0, 0.0);
  CHECK(std::abs(b.power - min_power_for_perfect(1.0, 0.0)) <= 2e-8);

  const double target = 100.0 / 101.0 - 1e-3;
  const PowerForMmse c = power_lower_for_mmse(100.0, 0.0, target);
  CHECK(c.power > 0.0);
  CHECK(c.power < 0.1);
  CHECK(mmse_lower_full(make_params(100.0, c.power, 0.0)).value <= target);
  CHECK(mmse_lower_full(make_params(100.0, std::max(c.power - 1e-7, 0.0), 0.0)).value > target);

  const PowerForMmse d = power_lower_for_mmse(1.0, 1.0, 0.9);
  CHECK(d.trivially_satisfied);
  CHECK(d.power == 3.0);
  CHECK_THROWS_AS(power_lower_for_mmse(1.0, 0.0, -1.0), ValidationError);
}
