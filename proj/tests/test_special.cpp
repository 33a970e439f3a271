#include <cmath>
#include <limits>
#include <vector>

#include "doctest.h"
#include "mmvol/constants.hpp"
#include "mmvol/errors.hpp"
#include "mmvol/quadrature.hpp"
#include "mmvol/special_functions.hpp"

using namespace mmvol;

namespace {

// Quadrature oracle for the Dawson integral, independent of the regime
// splits inside the implementation: D(x) = int_0^x exp(t^2 - x^2) dt.
double dawson_quad(double x) {
  if (x == 0.0) return 0.0;
  const double ax = std::abs(x);
  const auto est = nested_quad(
      [&](const std::vector<double>& t) {
        return std::exp(t[0] * t[0] - ax * ax);
      },
      {{0.0, ax}}, 1e-14);
  return x < 0.0 ? -est.value : est.value;
}

}  // namespace

TEST_CASE("dawson matches its defining integral across all regimes") {
  double worst = 0.0;
  for (double x = 0.25; x <= 14.0; x += 0.25) {
    const double d = dawson(x);
    const double o = dawson_quad(x);
    worst = std::max(worst, std::abs(d - o) / std::abs(o));
  }
  CHECK(worst < 1e-12);
}

TEST_CASE("dawson is odd and satisfies D'(x) = 1 - 2 x D(x)") {
  for (double x : {0.1, 0.7, 1.3, 2.9, 6.0, 11.0}) {
    CHECK(dawson(-x) == doctest::Approx(-dawson(x)).epsilon(1e-15));
    const double h = 1e-5;
    const double fd = (dawson(x + h) - dawson(x - h)) / (2.0 * h);
    CHECK(fd == doctest::Approx(1.0 - 2.0 * x * dawson(x)).epsilon(1e-8));
  }
}

TEST_CASE("dawson regime seams are continuous") {
  for (double seam : {1.0, 10.0}) {
    const double lo = dawson(std::nextafter(seam, 0.0));
    const double hi = dawson(std::nextafter(seam, 20.0));
    CHECK(std::abs(lo - hi) < 1e-13);
  }
}

TEST_CASE("erfi agrees with the Dawson oracle and overflows cleanly") {
  double worst = 0.0;
  for (double x = 0.5; x <= 6.0; x += 0.5) {
    const double want = 2.0 / kSqrtPi * std::exp(x * x) * dawson_quad(x);
    worst = std::max(worst, std::abs(erfi(x) - want) / want);
    CHECK(erfi(-x) == doctest::Approx(-erfi(x)).epsilon(1e-15));
  }
  CHECK(worst < 1e-12);

  CHECK(std::isinf(erfi(30.0)));
  CHECK(erfi(30.0) > 0.0);
}

TEST_CASE("modified Bessel recurrence holds across orders and arguments") {
  double worst = 0.0;
  for (double nu : {1.0, 1.5, 2.0, 2.5, 7.0}) {
    for (double x : {0.1, 1.0, 5.0, 20.0, 80.0, 150.0}) {
      const double lhs =
          bessel_i_scaled(nu - 1.0, x) - bessel_i_scaled(nu + 1.0, x);
      const double rhs = (2.0 * nu / x) * bessel_i_scaled(nu, x);
      worst = std::max(worst, std::abs(lhs - rhs) / std::abs(lhs));
    }
  }
  CHECK(worst < 1e-11);
}

TEST_CASE("half-integer Bessel closed forms") {
  for (double x : {0.3, 2.0, 10.0, 40.0}) {
    const double pref = std::sqrt(2.0 / (kPi * x));
    CHECK(bessel_i(0.5, x) ==
          doctest::Approx(pref * std::sinh(x)).epsilon(1e-12));
    CHECK(bessel_i(-0.5, x) ==
          doctest::Approx(pref * std::cosh(x)).epsilon(1e-12));
    CHECK(bessel_i(1.5, x) ==
          doctest::Approx(pref * (std::cosh(x) - std::sinh(x) / x))
              .epsilon(1e-12));
  }
}

TEST_CASE("scaled Bessel stays finite deep in the asymptotic regime") {
  const double i0 = bessel_i_scaled(0.0, 700.0);
  const double i1 = bessel_i_scaled(1.0, 700.0);
  CHECK(std::isfinite(i0));
  CHECK(i0 > 0.0);
  CHECK(i1 / i0 > 0.999);
  CHECK(i1 / i0 < 1.0);

  // consistency between scaled and unscaled where both are representable
  for (double x : {0.5, 5.0, 50.0}) {
    CHECK(bessel_i(1.0, x) ==
          doctest::Approx(bessel_i_scaled(1.0, x) * std::exp(x))
              .epsilon(1e-13));
  }
}

TEST_CASE("bessel domain errors") {
  CHECK_THROWS_AS(bessel_i(0.0, -1.0), DomainError);
  CHECK_THROWS_AS(bessel_i(-1.0, 1.0), DomainError);
  CHECK(bessel_i(0.0, 0.0) == 1.0);
  CHECK(bessel_i(2.0, 0.0) == 0.0);
}

TEST_CASE("negative Langevin function") {
  CHECK(langevin_neg(0.0) == 0.0);
  for (double b : {0.3, 1.0, 2.5}) {
    CHECK(langevin_neg(-b) == doctest::Approx(-langevin_neg(b)).epsilon(1e-14));
    CHECK(langevin_neg(b) ==
          doctest::Approx(1.0 / b - 1.0 / std::tanh(b)).epsilon(1e-13));
  }
  // small-argument series -b/3 + b^3/45
  const double b = 1e-3;
  CHECK(langevin_neg(b) ==
        doctest::Approx(-b / 3.0 + b * b * b / 45.0).epsilon(1e-10));
  // asymptote
  CHECK(langevin_neg(60.0) == doctest::Approx(1.0 / 60.0 - 1.0).epsilon(1e-12));
}

TEST_CASE("Brillouin curves") {
  for (double b : {0.0, 0.4, 1.0, 3.0}) {
    CHECK(brillouin(0.5, b) == doctest::Approx(std::tanh(b)).epsilon(1e-15));
    CHECK(brillouin(1.0, b) ==
          doctest::Approx(2.0 * std::sinh(b) / (1.0 + 2.0 * std::cosh(b)))
              .epsilon(1e-15));
    CHECK(brillouin(1.0, -b) == doctest::Approx(-brillouin(1.0, b)).epsilon(1e-15));
  }
  CHECK(brillouin(1.0, 40.0) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("D-vector correlation ratios reduce to the classical curves") {
  for (double j : {0.2, 1.0, 4.0}) {
    CHECK(dvector_ratio(1, j) == doctest::Approx(std::tanh(j)).epsilon(1e-12));
    CHECK(dvector_ratio(3, j) ==
          doctest::Approx(1.0 / std::tanh(j) - 1.0 / j).epsilon(1e-12));
    CHECK(dvector_ratio(2, j) ==
          doctest::Approx(bessel_i(1.0, j) / bessel_i(0.0, j)).epsilon(1e-12));
  }
  CHECK(dvector_ratio(3, 0.0) == 0.0);
  // ratios are increasing in J and bounded by 1
  double prev = 0.0;
  for (double j = 0.5; j <= 8.0; j += 0.5) {
    const double v = dvector_ratio(4, j);
    CHECK(v > prev);
    CHECK(v < 1.0);
    prev = v;
  }
}
