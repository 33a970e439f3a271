#include <cmath>
#include <vector>

#include "doctest.h"
#include "mmvol/complex_matrix.hpp"
#include "mmvol/constants.hpp"
#include "mmvol/errors.hpp"
#include "mmvol/metrics.hpp"
#include "mmvol/rng.hpp"
#include "mmvol/states.hpp"

using namespace mmvol;

namespace {

// Random point strictly inside the probability simplex, all entries >= floor.
std::vector<double> random_spectrum(SplitRng& rng, int n, double floor = 0.02) {
  std::vector<double> p(n);
  double sum = 0.0;
  for (double& x : p) {
    x = -std::log(rng.next_u01());
    sum += x;
  }
  for (double& x : p) x = floor + (1.0 - n * floor) * (x / sum);
  return p;
}

CMatrix diag_state(const std::vector<double>& p) {
  CMatrix m(static_cast<int>(p.size()));
  for (std::size_t i = 0; i < p.size(); ++i)
    m(static_cast<int>(i), static_cast<int>(i)) = p[i];
  return m;
}

CoordinatePoint3 random_point3(SplitRng& rng) {
  CoordinatePoint3 q;
  q.a = 0.1 + 0.4 * rng.next_u01();
  q.b = 0.1 + (0.8 - q.a) * rng.next_u01();
  q.s = 0.1 + 0.7 * rng.next_u01();
  q.nu = 2.0 * kPi * rng.next_u01();
  q.r = 0.1 + 0.7 * rng.next_u01();
  q.theta1 = 0.3 + 2.5 * rng.next_u01();
  q.theta2 = 0.3 + 2.5 * rng.next_u01();
  q.theta3 = 2.0 * kPi * rng.next_u01();
  return q;
}

}  // namespace

TEST_CASE("minor sums equal the elementary symmetric functions") {
  SplitRng rng(201);
  for (int i = 0; i < 200; ++i) {
    const CMatrix rho = build_rho3(point3_to_bloore(random_point3(rng)));
    const MinorSums ms = minor_sums(rho);
    const auto p = hermitian_eigenvalues(rho);
    const double e1 = p[0] + p[1] + p[2];
    const double e2 = p[0] * p[1] + p[0] * p[2] + p[1] * p[2];
    const double e3 = p[0] * p[1] * p[2];
    CHECK(ms.n == 3);
    CHECK(ms.w1 == doctest::Approx(e1).epsilon(1e-12));
    CHECK(ms.w2 == doctest::Approx(e2).epsilon(1e-10));
    CHECK(ms.w3 == doctest::Approx(e3).epsilon(1e-10));
    CHECK(ms.det == doctest::Approx(e3).epsilon(1e-10));
  }
}

TEST_CASE("pair-sum factor equals the product over eigenvalue pairs") {
  SplitRng rng(202);
  for (int n : {2, 3, 4}) {
    double worst = 0.0;
    for (int i = 0; i < 500; ++i) {
      const auto p = random_spectrum(rng, n);
      const MinorSums ms = minor_sums(diag_state(p));
      const double lhs = pair_sum_factor(ms);
      const double rhs = pair_sum_product(p);
      worst = std::max(worst, std::abs(lhs - rhs) / std::abs(rhs));
    }
    CHECK(worst < 1e-12);
  }
}

TEST_CASE("pair-sum factor for n = 2 is one") {
  MinorSums ms = minor_sums(diag_state({0.7, 0.3}));
  CHECK(pair_sum_factor(ms) == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("closed-form and eigenvalue routes differ by the documented constant") {
  SplitRng rng(203);
  for (int n : {2, 3, 4}) {
    const double expect_min = std::pow(2.0, 0.5 * n);
    const double expect_max = std::pow(2.0, 0.5 * (n * n - n));
    for (int i = 0; i < 300; ++i) {
      const auto p = random_spectrum(rng, n);
      const MinorSums ms = minor_sums(diag_state(p));
      const double rmin = volume_weight_from_minors(ms, MetricFamily::minimal) /
                          volume_weight_from_eigenvalues(p, MetricFamily::minimal);
      const double rmax = volume_weight_from_minors(ms, MetricFamily::maximal) /
                          volume_weight_from_eigenvalues(p, MetricFamily::maximal);
      CHECK(rmin == doctest::Approx(expect_min).epsilon(1e-10));
      CHECK(rmax == doctest::Approx(expect_max).epsilon(1e-10));
    }
  }
}

TEST_CASE("volume_weight dispatches to the matching route") {
  SplitRng rng(204);
  for (int i = 0; i < 50; ++i) {
    const CMatrix m = build_rho3(point3_to_bloore(random_point3(rng)));
    const DensityMatrix rho = DensityMatrix::checked(m);

    for (MetricFamily fam : {MetricFamily::minimal, MetricFamily::maximal}) {
      const double closed = volume_weight(rho, {fam, WeightRoute::closed_form});
      CHECK(closed ==
            doctest::Approx(volume_weight_from_minors(minor_sums(m), fam))
                .epsilon(1e-14));
      const double eig = volume_weight(rho, {fam, WeightRoute::eigenvalue});
      CHECK(eig == doctest::Approx(volume_weight_from_eigenvalues(
                                       hermitian_eigenvalues(m), fam))
                       .epsilon(1e-12));
    }
  }
}

TEST_CASE("near-singular states raise SingularStateError") {
  CHECK_THROWS_AS(
      volume_weight_from_eigenvalues({1e-14, 0.5, 0.5 - 1e-14},
                                     MetricFamily::maximal),
      SingularStateError);

  MinorSums ms = minor_sums(diag_state({1e-14, 0.5, 0.5 - 1e-14}));
  CHECK_THROWS_AS(volume_weight_from_minors(ms, MetricFamily::minimal),
                  SingularStateError);
}

TEST_CASE("maximal weight shrinks and minimal weight grows with purity") {
  // Along a mixing path from the maximally mixed state toward purity, the
  // maximal-metric weight (density of states) increases while the minimal
  // one increases too but they scale with different powers of det; check
  // the documented det exponents instead of a sign claim.
  const std::vector<double> mixed = {1.0 / 3, 1.0 / 3, 1.0 / 3};
  const std::vector<double> tight = {0.02, 0.18, 0.80};
  const MinorSums ms_mixed = minor_sums(diag_state(mixed));
  const MinorSums ms_tight = minor_sums(diag_state(tight));

  // Closed forms: minimal = det^(-1/2)/psf, maximal = det^(-5/2) psf at n=3.
  auto psf = [](const MinorSums& ms) { return ms.w2 - ms.det; };
  CHECK(volume_weight_from_minors(ms_mixed, MetricFamily::minimal) ==
        doctest::Approx(1.0 / std::sqrt(ms_mixed.det) / psf(ms_mixed))
            .epsilon(1e-13));
  CHECK(volume_weight_from_minors(ms_tight, MetricFamily::maximal) ==
        doctest::Approx(std::pow(ms_tight.det, -2.5) * psf(ms_tight))
            .epsilon(1e-13));
}
