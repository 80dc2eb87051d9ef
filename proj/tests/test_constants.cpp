#include "doctest.h"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "balaw/quadrature.hpp"
#include "balaw/wallis.hpp"

using namespace balaw;

namespace {

// Oracle: the defining integral, evaluated by adaptive quadrature instead of
// the recurrence.
double cosine_power_by_quadrature(int n) {
  return integrate_or_throw(
      [n](double t) { return std::pow(std::cos(t), n); }, 0.0,
      std::numbers::pi / 2.0, 1e-13, 1e-15);
}

}  // namespace

TEST_CASE("recurrence matches the defining integral") {
  for (int n = 0; n <= 12; ++n) {
    CAPTURE(n);
    CHECK(std::abs(wallis_integral(n) - cosine_power_by_quadrature(n)) <=
          1e-12);
  }
}

TEST_CASE("closed forms at low order") {
  CHECK(std::abs(wallis_integral(0) - std::numbers::pi / 2.0) <= 1e-15);
  CHECK(wallis_integral(1) == 1.0);
  CHECK(std::abs(wallis_integral(2) - std::numbers::pi / 4.0) <= 1e-15);
  CHECK(std::abs(wallis_integral(3) - 2.0 / 3.0) <= 1e-15);
  CHECK(std::abs(wallis_integral(4) - 3.0 * std::numbers::pi / 16.0) <= 1e-15);
}

TEST_CASE("the moments decrease strictly") {
  for (int n = 1; n <= 12; ++n) {
    CAPTURE(n);
    CHECK(wallis_integral(n) < wallis_integral(n - 1));
  }
}

TEST_CASE("ball volumes match the gamma-function formula") {
  for (int n = 0; n <= 12; ++n) {
    const double reference =
        std::pow(std::numbers::pi, n / 2.0) / std::tgamma(n / 2.0 + 1.0);
    CAPTURE(n);
    CHECK(std::abs(unit_ball_volume(n) - reference) <= 1e-12 * reference);
  }
}

TEST_CASE("consecutive volume ratio equals twice the cosine moment") {
  for (int n = 1; n <= 12; ++n) {
    CAPTURE(n);
    CHECK(std::abs(unit_ball_volume(n) / unit_ball_volume(n - 1) -
                   2.0 * wallis_integral(n)) <= 1e-10);
  }
}

TEST_CASE("negative orders are rejected") {
  CHECK_THROWS_AS(wallis_integral(-1), std::invalid_argument);
  CHECK_THROWS_AS(unit_ball_volume(-1), std::invalid_argument);
}

TEST_CASE("adaptive quadrature reproduces smooth references") {
  CHECK(std::abs(integrate_or_throw([](double x) { return x * x; }, 0.0,
                                    1.0) -
                 1.0 / 3.0) <= 1e-13);
  CHECK(std::abs(integrate_or_throw([](double x) { return std::sin(x); }, 0.0,
                                    std::numbers::pi) -
                 2.0) <= 1e-12);
  const QuadratureResult gauss = integrate_adaptive(
      [](double x) { return std::exp(-x * x); }, -6.0, 6.0);
  CHECK(gauss.converged);
  CHECK(std::abs(gauss.value - std::sqrt(std::numbers::pi)) <= 1e-10);
  CHECK(gauss.evaluations > 0);
}

TEST_CASE("quadrature handles reversed and empty intervals") {
  CHECK(integrate_or_throw([](double) { return 1.0; }, 2.0, 2.0) == 0.0);
  const double forward =
      integrate_or_throw([](double x) { return x; }, 0.0, 1.0);
  const double backward =
      integrate_or_throw([](double x) { return x; }, 1.0, 0.0);
  CHECK(std::abs(forward + backward) <= 1e-14);
}
