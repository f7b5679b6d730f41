#include <doctest.h>

#include <cmath>
#include <numbers>

#include "hostembed/errors.hpp"
#include "hostembed/optim.hpp"

using namespace hostembed;
using namespace hostembed::optim;

TEST_CASE("maximize_on_interval finds interior and boundary maxima") {
  auto q = maximize_on_interval([](double x) { return -(x - 0.3) * (x - 0.3); }, 0.0, 1.0, 101, 1e-10);
  CHECK(q.arg == doctest::Approx(0.3).epsilon(1e-6));
  CHECK(q.value == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(q.evaluations > 0);

  auto lin = maximize_on_interval([](double x) { return x; }, 0.0, 1.0, 11, 1e-10);
  CHECK(lin.arg == 1.0);

  auto s = maximize_on_interval([](double x) { return std::sin(x); }, 0.0, std::numbers::pi, 101, 1e-9);
  CHECK(s.arg == doctest::Approx(std::numbers::pi / 2).epsilon(1e-4));
  CHECK(s.value == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("value is the objective at the returned argument") {
  auto f = [](double x) { return std::cos(3.0 * x) + 0.1 * x; };
  auto r = minimize_on_interval(f, -2.0, 2.0, 201, 1e-10);
  CHECK(r.value == f(r.arg));
}

TEST_CASE("refinement never loses to the best grid sample") {
  auto f = [](double x) { return std::sin(5.0 * x) * std::exp(-x); };
  const std::size_t n = 31;
  double best_grid = -INFINITY;
  for (std::size_t i = 0; i < n; ++i) best_grid = std::max(best_grid, f(detail::grid_point(0.0, 3.0, i, n)));
  auto r = maximize_on_interval(f, 0.0, 3.0, n, 1e-10);
  CHECK(r.value >= best_grid);
}

TEST_CASE("halving the tolerance never worsens a maximum") {
  auto f = [](double x) { return -std::pow(x - 0.123456789, 2) + 0.01 * std::cos(40.0 * x); };
  double prev = -INFINITY;
  for (double tol = 1e-2; tol > 1e-12; tol *= 0.5) {
    auto r = maximize_on_interval(f, 0.0, 1.0, 11, tol);
    CHECK(r.value >= prev - 1e-15);
    prev = std::max(prev, r.value);
  }
}

TEST_CASE("NaN objective raises a numeric-domain error with the argument") {
  try {
    maximize_on_interval([](double x) { return x > 0.5 ? NAN : x; }, 0.0, 1.0, 11, 1e-10);
    FAIL("expected NumericDomainError");
  } catch (const NumericDomainError& e) {
    CHECK(e.argument() > 0.5);
  }
}

TEST_CASE("invalid brackets are rejected") {
  auto f = [](double x) { return x; };
  CHECK_THROWS_AS(maximize_on_interval(f, 1.0, 0.0, 11, 1e-10), ValidationError);
  CHECK_THROWS_AS(maximize_on_interval(f, 0.0, 1.0, 2, 1e-10), ValidationError);
  CHECK_THROWS_AS(maximize_on_interval(f, 0.0, 1.0, 11, 0.0), ValidationError);
}

TEST_CASE("inf_sup examples") {
  auto flat = inf_sup(0.0, 1.0, [](double y) {
    return maximize_on_interval([y](double x) { return -(x - y) * (x - y); }, 0.0, 1.0, 101, 1e-10);
  });
  CHECK(flat.inner.value == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(flat.outer_arg == 0.0);

  auto bowl = inf_sup(-1.0, 1.0, [](double y) { return ScalarOptResult{y, y * y, 1}; });
  CHECK(bowl.outer_arg == doctest::Approx(0.0).epsilon(1e-6));

  auto shifted = inf_sup(-1.0, 1.0, [](double y) { return ScalarOptResult{y, (y - 0.5) * (y - 0.5), 1}; });
  CHECK(shifted.outer_arg == doctest::Approx(0.5).epsilon(1e-6));
}
