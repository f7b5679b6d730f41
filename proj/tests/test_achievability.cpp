#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "hostembed/achievability.hpp"
#include "hostembed/errors.hpp"
#include "hostembed/lower_bounds.hpp"

using namespace hostembed;

namespace {

// Var(X1) - c^T C^{-1} c with the 2x2 inverse written out.
double covariance_oracle(const StrategyParams& s) {
  const double st2 = s.sigma_tilde2();
  const double pd = s.power - s.p_lin();
  const double vx = st2 + pd;
  const double vy = st2 + pd + 1.0;
  const double vt = s.alpha * s.alpha * st2 + pd;
  const double cxy = st2 + pd;
  const double cxt = s.alpha * st2 + pd;
  const double cyt = s.alpha * st2 + pd;
  const double det = vy * vt - cyt * cyt;
  const double w_y = (vt * cxy - cyt * cxt) / det;
  const double w_t = (vy * cxt - cyt * cxy) / det;
  return vx - (w_y * cxy + w_t * cxt);
}

double dpc_rate_direct(double alpha, double beta, double s2, double pw) {
  const double st2 = s2 * (1 - beta) * (1 - beta);
  const double pd = pw - beta * beta * s2;
  return 0.5 * std::log2(pd * (pd + st2 + 1) / (pd * st2 * (1 - alpha) * (1 - alpha) + pd + alpha * alpha * st2));
}

// Dense (alpha, beta) grid minimum of the joint LMMSE subject to the rate.
double dense_upper(const ProblemParams& p, int na, int nb) {
  double best = p.sigma2 / (p.sigma2 + 1.0);
  const double beta_max = std::min(1.0, std::sqrt(p.power / p.sigma2));
  bool any = p.rate == 0.0;
  for (int j = 0; j < nb; ++j) {
    const double beta = beta_max * j / (nb - 1);
    if (p.power - beta * beta * p.sigma2 <= 0.0) continue;
    for (int i = 0; i < na; ++i) {
      const double alpha = 2.0 * i / (na - 1);
      if (dpc_rate_direct(alpha, beta, p.sigma2, p.power) < p.rate) continue;
      any = true;
      best = std::min(best, covariance_oracle(StrategyParams{alpha, beta, p.sigma2, p.power}));
    }
  }
  return any ? best : INFINITY;
}

}  // namespace

TEST_CASE("dpc_rate closed forms") {
  for (double pw : {0.01, 0.5, 1.0, 7.0, 300.0}) {
    for (double s2 : {0.1, 1.0, 50.0}) {
      const StrategyParams costa = make_strategy(pw / (pw + 1.0), 0.0, s2, pw);
      CHECK(std::abs(dpc_rate(costa) - 0.5 * std::log2(1.0 + pw)) <= 1e-12);
      const StrategyParams naive = make_strategy(0.0, 0.0, s2, pw);
      CHECK(dpc_rate(naive) == doctest::Approx(0.5 * std::log2((pw + s2 + 1.0) / (s2 + 1.0))).epsilon(1e-13));
      if (s2 < pw) {
        const StrategyParams cancel = make_strategy(1.0, 1.0, s2, pw);
        CHECK(dpc_rate(cancel) == doctest::Approx(0.5 * std::log2(1.0 + pw - s2)).epsilon(1e-13));
      }
    }
  }
  CHECK_THROWS_AS(dpc_rate(StrategyParams{0.5, 1.0, 1.0, 1.0}), NumericDomainError);
}

TEST_CASE("strategy validation") {
  CHECK_THROWS_AS(make_strategy(0.5, 1.5, 1.0, 10.0), ValidationError);
  CHECK_THROWS_AS(make_strategy(2.5, 0.0, 1.0, 10.0), ValidationError);
  CHECK_THROWS_AS(make_strategy(0.5, 0.9, 1.0, 0.5), ValidationError);
  const StrategyParams s = make_strategy(0.5, 0.5, 2.0, 1.0);
  CHECK(s.p_lin() + s.p_dpc() == doctest::Approx(1.0));
}

TEST_CASE("joint LMMSE equals the explicit covariance solve") {
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int t = 0; t < 500; ++t) {
    const double s2 = std::pow(10.0, -2.0 + 4.0 * u(rng));
    const double pw = std::pow(10.0, -2.0 + 4.0 * u(rng));
    const double beta = std::min(1.0, std::sqrt(pw / s2)) * u(rng) * 0.999;
    const double alpha = 2.0 * u(rng);
    const StrategyParams s = make_strategy(alpha, beta, s2, pw);
    const double oracle = covariance_oracle(s);
    CHECK(lmmse_joint(s) == doctest::Approx(oracle).epsilon(1e-9).scale(s.sigma_tilde2() + s.p_dpc()));
    CHECK(lmmse_joint(s) >= 0.0);
    CHECK(lmmse_joint(s) <= s.sigma_tilde2() + s.p_dpc());
    CHECK(lmmse_joint(s) <= lmmse_y_only(s) + 1e-12);
    CHECK(lmmse_joint(s) <= lmmse_t_only(s) + 1e-12);
  }
}

TEST_CASE("joint LMMSE special cases") {
  CHECK(lmmse_joint(make_strategy(1.0, 0.3, 2.0, 1.0)) == 0.0);
  const StrategyParams s = make_strategy(0.4, 0.0, 3.0, 2.0);
  CHECK(lmmse_t_only(s) == doctest::Approx(2.0 * 3.0 * 0.36 / (2.0 + 0.16 * 3.0)));
  const StrategyParams cancel = make_strategy(0.5, 1.0, 1.0, 3.0);
  CHECK(lmmse_joint(cancel) == doctest::Approx(2.0 / 3.0 * 0.0 + 0.0).epsilon(1e-12).scale(1.0));
  CHECK(lmmse_y_only(cancel) == doctest::Approx(2.0 / 3.0));
  CHECK(lmmse_joint(StrategyParams{0.0, 0.0, 1.0, 0.0}) == doctest::Approx(0.5));
  CHECK_THROWS_AS(lmmse_joint(StrategyParams{0.5, 1.0, 1.0, 1.0}), NumericDomainError);
}

TEST_CASE("numeric upper bound examples") {
  const double pstar = min_power_for_perfect(1.0, 0.0);
  const AchievablePoint a = mmse_upper_numeric(make_params(1.0, pstar, 0.0));
  CHECK(a.mmse <= 1e-4);
  CHECK(a.strategy.alpha == doctest::Approx(1.0));

  const AchievablePoint b = mmse_upper_numeric(make_params(1.0, 0.0, 0.0));
  CHECK(b.mmse == doctest::Approx(0.5).epsilon(1e-15));

  const ProblemParams c = make_params(100.0, 1.0, 0.0);
  const AchievablePoint up = mmse_upper_numeric(c);
  const double t_only = lmmse_t_only(make_strategy(0.5, 0.0, 100.0, 1.0));
  CHECK(up.mmse <= std::min(1.0, t_only));
  CHECK(up.mmse >= mmse_lower_full(c).value);

  CHECK_THROWS_AS(mmse_upper_numeric(make_params(1.0, 0.9, 0.5)), InfeasibleError);
}

TEST_CASE("numeric upper bound beats a dense alpha-beta grid and meets the rate") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int t = 0; t < 40; ++t) {
    const double s2 = std::pow(10.0, -1.5 + 3.5 * u(rng));
    const double r = t % 2 == 0 ? 0.0 : 1.5 * u(rng);
    const double pw = std::exp2(2.0 * r) - 1.0 + std::pow(10.0, -2.0 + 3.0 * u(rng));
    const ProblemParams p = make_params(s2, pw, r);
    const AchievablePoint up = mmse_upper_numeric(p);
    const double oracle = dense_upper(p, 20001, 101);
    CAPTURE(s2);
    CAPTURE(pw);
    CAPTURE(r);
    CHECK(up.rate >= r - 1e-12);
    CHECK(up.mmse <= oracle + 1e-12);
    CHECK(up.mmse >= oracle - 1e-3);
    if (up.strategy.p_dpc() > 0.0) {
      CHECK(dpc_rate(up.strategy) >= r - 1e-12);
      CHECK(lmmse_joint(up.strategy) == doctest::Approx(up.mmse).epsilon(1e-12).scale(1.0));
    }
  }
}

TEST_CASE("sandwich: upper bound never falls below the converse") {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int t = 0; t < 150; ++t) {
    const double s2 = std::pow(10.0, -2.0 + 4.0 * u(rng));
    const double r = t % 3 == 0 ? 0.0 : 3.0 * u(rng);
    const double pw = std::exp2(2.0 * r) - 1.0 + std::pow(10.0, -3.0 + 5.0 * u(rng));
    const ProblemParams p = make_params(s2, pw, r);
    CHECK(mmse_upper_numeric(p).mmse >= mmse_lower_full(p).value - 1e-7);
  }
}

TEST_CASE("analytical cost branches") {
  const AnalyticalCost a = cost_upper_analytical(make_cost_params(1.0, 1.0, 0.0));
  CHECK(a.value == doctest::Approx(1.0));
  CHECK(a.branches[0] == doctest::Approx(1.0));
  CHECK(a.branches[1] == doctest::Approx(1.0));
  CHECK(a.branches[2] == doctest::Approx(1.0));
  CHECK(a.branch == StrategyVariant::dpc_one);

  const AnalyticalCost b = cost_upper_analytical(make_cost_params(1e-4, 1.0, 1.0));
  CHECK(b.branches[0] == doctest::Approx(4e-4));
  CHECK(b.branches[1] == doctest::Approx(3e-4 + 1.0 / 19.0));
  CHECK(b.branches[2] == doctest::Approx(4e-4));
  CHECK(b.value == doctest::Approx(4e-4));

  const AnalyticalCost c = cost_upper_analytical(make_cost_params(100.0, 0.01, 0.0));
  CHECK(c.branches[0] == doctest::Approx(100.0));
  CHECK(c.branches[2] == doctest::Approx(1.0));
  CHECK(c.branches[1] == doctest::Approx(0.01));
  CHECK(c.value == doctest::Approx(0.01));
  CHECK(c.branch == StrategyVariant::dpc_costa);

  const AnalyticalCost d = cost_upper_analytical(make_cost_params(0.5, 0.5, 0.0));
  CHECK(d.branch == StrategyVariant::cancel);
  CHECK(d.value == doctest::Approx(0.25));
}

TEST_CASE("R0 by the converse and by the achievability route agree") {
  for (int i = 0; i < 20; ++i) {
    for (int j = 0; j < 20; ++j) {
      const double s2 = std::pow(10.0, -1.0 + 3.0 * i / 19.0);
      const double pw = std::pow(10.0, -2.0 + 4.0 * j / 19.0);
      CHECK(std::abs(perfect_rate_r0(s2, pw) - perfect_rate_via_dpc(s2, pw).rate) <= 1e-9);
    }
  }
}

TEST_CASE("R0 examples") {
  const double s2 = 2.0, pw = 0.7;
  const double at_zero = 0.5 * std::log2(pw * (1 + s2 + pw) / (s2 * (s2 + pw)));
  CHECK(perfect_rate_r0(s2, pw) >= at_zero);
  CHECK(perfect_rate_r0(s2, 0.0) == -INFINITY);
}

TEST_CASE("minimum power for perfect recovery") {
  const double p1 = min_power_for_perfect(1.0, 0.0);
  CHECK(perfect_rate_r0(1.0, p1) >= 0.0);
  CHECK(perfect_rate_r0(1.0, p1 - 2e-8) < 0.0);
  CHECK(mmse_lower_full(make_params(1.0, p1, 0.0)).value <= 1e-6);
  CHECK(mmse_upper_numeric(make_params(1.0, p1, 0.0)).mmse <= 1e-4);

  for (double r : {1.0, 2.0, 3.0}) CHECK(min_power_for_perfect(0.5, r) >= std::exp2(2 * r) - 1.0);
  CHECK(min_power_for_perfect(1e-6, 0.0) < 1e-5);
  CHECK(min_power_for_perfect(1e-6, 0.0) < min_power_for_perfect(1e-3, 0.0));
}

TEST_CASE("achievable power inversion") {
  const double pw = power_upper_for_mmse(1.0, 0.0, 0.0);
  CHECK(std::abs(pw - min_power_for_perfect(1.0, 0.0)) <= 1e-6);
  const double target = 0.2;
  const double q = power_upper_for_mmse(1.0, 0.0, target);
  CHECK(mmse_upper_numeric(make_params(1.0, q, 0.0)).mmse <= target);
  CHECK(q >= power_lower_for_mmse(1.0, 0.0, target).power - 1e-8);
  CHECK(power_upper_for_mmse(1.0, 0.0, 0.5) == 0.0);
}
