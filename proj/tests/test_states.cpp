#include <array>
#include <cmath>
#include <complex>
#include <vector>

#include "doctest.h"
#include "mmvol/complex_matrix.hpp"
#include "mmvol/constants.hpp"
#include "mmvol/errors.hpp"
#include "mmvol/rng.hpp"
#include "mmvol/states.hpp"

using namespace mmvol;

namespace {

// Interior coordinate points with margins so finite differences and
// eigen-solves stay away from the simplex and box boundaries.
CoordinatePoint3 random_point3(SplitRng& rng) {
  CoordinatePoint3 q;
  q.a = 0.08 + 0.5 * rng.next_u01();
  q.b = 0.08 + (0.84 - q.a) * rng.next_u01();
  q.s = 0.1 + 0.8 * rng.next_u01();
  q.nu = 2.0 * kPi * rng.next_u01();
  q.r = 0.1 + 0.8 * rng.next_u01();
  q.theta1 = 0.2 + (kPi - 0.4) * rng.next_u01();
  q.theta2 = 0.2 + (kPi - 0.4) * rng.next_u01();
  q.theta3 = 2.0 * kPi * rng.next_u01();
  return q;
}

CoordinatePoint4 random_point4(SplitRng& rng) {
  CoordinatePoint4 q;
  q.a = 0.06 + 0.4 * rng.next_u01();
  q.b = 0.06 + 0.5 * (0.88 - q.a) * rng.next_u01();
  q.c = 0.06 + (0.94 - q.a - q.b - 0.06) * rng.next_u01();
  q.s = 0.1 + 0.8 * rng.next_u01();
  q.nu = 2.0 * kPi * rng.next_u01();
  q.v = 0.1 + 0.8 * rng.next_u01();
  q.xi1 = 0.2 + (kPi - 0.4) * rng.next_u01();
  q.xi2 = 0.2 + (kPi - 0.4) * rng.next_u01();
  q.xi3 = 0.2 + (kPi - 0.4) * rng.next_u01();
  q.xi4 = 0.2 + (kPi - 0.4) * rng.next_u01();
  q.xi5 = 2.0 * kPi * rng.next_u01();
  return q;
}

// Determinant of a small real matrix by Gaussian elimination with partial
// pivoting; used on the finite-difference Jacobian matrices.
double det_real(std::vector<double> m, int n) {
  double det = 1.0;
  for (int k = 0; k < n; ++k) {
    int piv = k;
    for (int i = k + 1; i < n; ++i)
      if (std::abs(m[i * n + k]) > std::abs(m[piv * n + k])) piv = i;
    if (piv != k) {
      for (int j = 0; j < n; ++j) std::swap(m[k * n + j], m[piv * n + j]);
      det = -det;
    }
    const double d = m[k * n + k];
    if (d == 0.0) return 0.0;
    det *= d;
    for (int i = k + 1; i < n; ++i) {
      const double f = m[i * n + k] / d;
      for (int j = k; j < n; ++j) m[i * n + j] -= f * m[k * n + j];
    }
  }
  return det;
}

// Independent entries of the n = 3 state as a real 8-vector:
// the first two diagonal entries and the real/imaginary parts of the
// upper off-diagonal entries.
std::array<double, 8> entries3(const CoordinatePoint3& q) {
  const CMatrix rho = build_rho3(point3_to_bloore(q));
  return {rho(0, 0).real(),       rho(1, 1).real(),
          rho(0, 1).real(),       rho(0, 1).imag(),
          rho(0, 2).real(),       rho(0, 2).imag(),
          rho(1, 2).real(),       rho(1, 2).imag()};
}

// Same for the n = 4 slice: three diagonal entries and the four nonzero
// upper off-diagonal entries.
std::array<double, 11> entries4(const CoordinatePoint4& q) {
  const CMatrix rho = build_rho4(q);
  return {rho(0, 0).real(),       rho(1, 1).real(), rho(2, 2).real(),
          rho(1, 2).real(),       rho(1, 2).imag(),
          rho(0, 3).real(),       rho(0, 3).imag(),
          rho(1, 3).real(),       rho(1, 3).imag(),
          rho(2, 3).real(),       rho(2, 3).imag()};
}

double fd_jacobian3(const CoordinatePoint3& q, double h) {
  std::array<double*, 8> coords{};
  CoordinatePoint3 w = q;
  coords = {&w.a, &w.b, &w.s, &w.nu, &w.r, &w.theta1, &w.theta2, &w.theta3};
  std::vector<double> m(64);
  for (int j = 0; j < 8; ++j) {
    const double x0 = *coords[j];
    *coords[j] = x0 + h;
    const auto up = entries3(w);
    *coords[j] = x0 - h;
    const auto dn = entries3(w);
    *coords[j] = x0;
    for (int i = 0; i < 8; ++i) m[i * 8 + j] = (up[i] - dn[i]) / (2.0 * h);
  }
  return std::abs(det_real(std::move(m), 8));
}

double fd_jacobian4(const CoordinatePoint4& q, double h) {
  std::array<double*, 11> coords{};
  CoordinatePoint4 w = q;
  coords = {&w.a,   &w.b,   &w.c,   &w.s,   &w.nu,  &w.v,
            &w.xi1, &w.xi2, &w.xi3, &w.xi4, &w.xi5};
  std::vector<double> m(121);
  for (int j = 0; j < 11; ++j) {
    const double x0 = *coords[j];
    *coords[j] = x0 + h;
    const auto up = entries4(w);
    *coords[j] = x0 - h;
    const auto dn = entries4(w);
    *coords[j] = x0;
    for (int i = 0; i < 11; ++i) m[i * 11 + j] = (up[i] - dn[i]) / (2.0 * h);
  }
  return std::abs(det_real(std::move(m), 11));
}

// Unit-diagonal scaled state: the spectrum depends only on (s, nu, r,
// theta1..theta3) and its pair products obey the characteristic cubic.
CMatrix scaled_matrix3(const CoordinatePoint3& q) {
  CoordinatePoint3 w = q;
  w.a = w.b = 1.0 / 3.0;
  const BlooreParams3 p = point3_to_bloore(w);
  CMatrix m(3);
  m(0, 0) = m(1, 1) = m(2, 2) = 1.0;
  m(0, 1) = std::conj(p.H);
  m(1, 0) = p.H;
  m(0, 2) = p.G;
  m(2, 0) = std::conj(p.G);
  m(1, 2) = std::conj(p.F);
  m(2, 1) = p.F;
  return m;
}

double cubic_value(double r, double s, double t, double x) {
  const double c2 = 3.0 - r * r - r * r * s - s * s + 2.0 * r * r * s * t;
  const double c1 = 3.0 * (1.0 - r * r) * (1.0 - s * s);
  const double c0 = (1.0 - r * r) * (1.0 - r * r) * (1.0 - s * s) * (1.0 - s * s);
  return ((x + c2) * x + c1) * x + c0;
}

}  // namespace

TEST_CASE("n = 3 closed-form determinant matches the direct determinant") {
  SplitRng rng(2024);
  double worst = 0.0;
  for (int i = 0; i < 2000; ++i) {
    const CoordinatePoint3 q = random_point3(rng);
    const CMatrix rho = build_rho3(point3_to_bloore(q));
    const double closed = det3_closed(q);
    const double direct = rho.det().real();
    worst = std::max(worst, std::abs(closed - direct) / std::abs(closed));
    CHECK(std::abs(rho.det().imag()) < 1e-15);
  }
  CHECK(worst < 1e-12);
}

TEST_CASE("n = 4 closed-form determinant matches the direct determinant") {
  SplitRng rng(2025);
  double worst = 0.0;
  for (int i = 0; i < 2000; ++i) {
    const CoordinatePoint4 q = random_point4(rng);
    const CMatrix rho = build_rho4(q);
    const double closed = det4_closed(q);
    const double direct = rho.det().real();
    worst = std::max(worst, std::abs(closed - direct) / std::abs(closed));
  }
  CHECK(worst < 1e-12);
}

TEST_CASE("built states are Hermitian with unit trace and the right diagonal") {
  SplitRng rng(7);
  for (int i = 0; i < 100; ++i) {
    const CoordinatePoint3 q3 = random_point3(rng);
    const CMatrix r3 = build_rho3(point3_to_bloore(q3));
    CHECK(r3.hermiticity_defect() < 1e-15);
    CHECK(r3.trace_real() == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(r3(0, 0).real() == doctest::Approx(q3.a).epsilon(1e-15));
    CHECK(r3(1, 1).real() == doctest::Approx(q3.b).epsilon(1e-15));

    const CoordinatePoint4 q4 = random_point4(rng);
    const CMatrix r4 = build_rho4(q4);
    CHECK(r4.hermiticity_defect() < 1e-15);
    CHECK(r4.trace_real() == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(std::abs(r4(0, 1)) < 1e-16);  // the studied slice zeroes this pair
    CHECK(std::abs(r4(0, 2)) < 1e-16);
  }
}

TEST_CASE("coordinate states are positive semidefinite") {
  SplitRng rng(11);
  for (int i = 0; i < 200; ++i) {
    const CoordinatePoint3 q = random_point3(rng);
    const BlooreParams3 p = point3_to_bloore(q);
    CHECK(positivity3(p.F, p.G, p.H));
    const auto evs = hermitian_eigenvalues(build_rho3(p));
    CHECK(evs.front() > -1e-13);

    const auto evs4 = hermitian_eigenvalues(build_rho4(random_point4(rng)));
    CHECK(evs4.front() > -1e-13);
  }
}

TEST_CASE("positivity test agrees with the eigenvalue sign") {
  // Scan scaled off-diagonal magnitudes straddling the positivity surface.
  SplitRng rng(13);
  int disagreements = 0;
  for (int i = 0; i < 500; ++i) {
    const double fr = 2.0 * rng.next_u01() - 1.0;
    const double gr = 2.0 * rng.next_u01() - 1.0;
    const double hr = 2.0 * rng.next_u01() - 1.0;
    const Cmplx F(fr, 0.3 * rng.next_u01());
    const Cmplx G(gr, -0.4 * rng.next_u01());
    const Cmplx H(hr, 0.2 * rng.next_u01());
    BlooreParams3 p{1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0, F, G, H};
    const auto evs = hermitian_eigenvalues(build_rho3(p));
    const bool eig_ok = evs.front() >= -1e-12;
    if (positivity3(F, G, H) != eig_ok && std::abs(evs.front()) > 1e-10)
      ++disagreements;
  }
  CHECK(disagreements == 0);
}

TEST_CASE("n = 3 Jacobian closed form matches finite differences") {
  SplitRng rng(31);
  double worst = 0.0;
  for (int i = 0; i < 25; ++i) {
    const CoordinatePoint3 q = random_point3(rng);
    const double fd = fd_jacobian3(q, 1e-5);
    const double closed = jacobian3(q);
    worst = std::max(worst, std::abs(fd - closed) / closed);
  }
  CHECK(worst < 1e-6);
}

TEST_CASE("n = 4 Jacobian closed form matches finite differences") {
  SplitRng rng(32);
  double worst = 0.0;
  for (int i = 0; i < 25; ++i) {
    const CoordinatePoint4 q = random_point4(rng);
    const double fd = fd_jacobian4(q, 1e-5);
    const double closed = jacobian4(q);
    worst = std::max(worst, std::abs(fd - closed) / closed);
  }
  CHECK(worst < 1e-6);
}

TEST_CASE("pair-product cubic: roots solve the cubic and match eigenvalues") {
  SplitRng rng(41);
  for (int i = 0; i < 300; ++i) {
    CoordinatePoint3 q = random_point3(rng);
    const double t = std::pow(std::sin(q.theta1) * std::sin(q.theta2), 2);
    const auto roots = pair_eigenvalues_cubic(q.r, q.s, q.theta1, q.theta2);
    CHECK(roots[0] <= roots[1]);
    CHECK(roots[1] <= roots[2]);
    for (double x : roots) CHECK(std::abs(cubic_value(q.r, q.s, t, x)) < 1e-12);

    const auto p = hermitian_eigenvalues(scaled_matrix3(q));
    std::array<double, 3> prods = {-p[0] * p[1], -p[0] * p[2], -p[1] * p[2]};
    std::sort(prods.begin(), prods.end());
    for (int k = 0; k < 3; ++k)
      CHECK(roots[k] == doctest::Approx(prods[k]).epsilon(1e-9));
  }
}

TEST_CASE("pair-product cubic: special families") {
  SplitRng rng(43);
  for (int i = 0; i < 50; ++i) {
    const double r = 0.05 + 0.9 * rng.next_u01();
    const double s = 0.05 + 0.9 * rng.next_u01();
    const double th1 = 0.2 + (kPi - 0.4) * rng.next_u01();
    const double th2 = 0.2 + (kPi - 0.4) * rng.next_u01();
    const double t = std::pow(std::sin(th1) * std::sin(th2), 2);

    // theta1 = 0 family: spectrum {1-s, 1+s/2 +- sqrt(s^2/4 + r^2(1+s))}.
    {
      const auto roots = pair_eigenvalues_cubic(r, s, 0.0, th2);
      const double root_disc = std::sqrt(s * s / 4.0 + r * r * (1.0 + s));
      std::array<double, 3> p = {1.0 - s, 1.0 + s / 2.0 - root_disc,
                                 1.0 + s / 2.0 + root_disc};
      std::array<double, 3> expect = {-p[0] * p[1], -p[0] * p[2], -p[1] * p[2]};
      std::sort(expect.begin(), expect.end());
      for (int k = 0; k < 3; ++k) {
        CHECK(roots[k] == doctest::Approx(expect[k]).epsilon(1e-12));
        CHECK(std::abs(cubic_value(r, s, 0.0, roots[k])) < 1e-12);
      }
    }

    // theta1 = theta2 = pi/2 family: the same spectrum with s -> -s.
    {
      const auto roots = pair_eigenvalues_cubic(r, s, kPi / 2.0, kPi / 2.0);
      const double root_disc = std::sqrt(s * s / 4.0 + r * r * (1.0 - s));
      std::array<double, 3> p = {1.0 + s, 1.0 - s / 2.0 - root_disc,
                                 1.0 - s / 2.0 + root_disc};
      std::array<double, 3> expect = {-p[0] * p[1], -p[0] * p[2], -p[1] * p[2]};
      std::sort(expect.begin(), expect.end());
      for (int k = 0; k < 3; ++k) {
        CHECK(roots[k] == doctest::Approx(expect[k]).epsilon(1e-12));
        CHECK(std::abs(cubic_value(r, s, 1.0, roots[k])) < 1e-12);
      }
    }

    // r = 0: roots {-(1+s), -(1-s^2), -(1-s)} after sorting.
    {
      const auto roots = pair_eigenvalues_cubic(0.0, s, th1, th2);
      CHECK(roots[0] == doctest::Approx(-(1.0 + s)).epsilon(1e-13));
      CHECK(roots[1] == doctest::Approx(-(1.0 - s * s)).epsilon(1e-13));
      CHECK(roots[2] == doctest::Approx(-(1.0 - s)).epsilon(1e-13));
    }

    // s = 0: the same family driven by r.
    {
      const auto roots = pair_eigenvalues_cubic(r, 0.0, th1, th2);
      CHECK(roots[0] == doctest::Approx(-(1.0 + r)).epsilon(1e-13));
      CHECK(roots[1] == doctest::Approx(-(1.0 - r * r)).epsilon(1e-13));
      CHECK(roots[2] == doctest::Approx(-(1.0 - r)).epsilon(1e-13));
    }

    // r = 1 and s = 1: two roots collapse to zero, the third to -c2.
    {
      const auto roots = pair_eigenvalues_cubic(1.0, s, th1, th2);
      const double c2 = 2.0 - s - s * s + 2.0 * s * t;
      CHECK(roots[0] == doctest::Approx(-c2).epsilon(1e-12));
      CHECK(std::abs(roots[1]) < 1e-12);
      CHECK(std::abs(roots[2]) < 1e-12);
    }
    {
      const auto roots = pair_eigenvalues_cubic(r, 1.0, th1, th2);
      const double c2 = 2.0 - 2.0 * r * r + 2.0 * r * r * t;
      CHECK(roots[0] == doctest::Approx(-c2).epsilon(1e-12));
      CHECK(std::abs(roots[1]) < 1e-12);
      CHECK(std::abs(roots[2]) < 1e-12);
    }
  }
}

TEST_CASE("DensityMatrix validates its input") {
  CMatrix good(3);
  good(0, 0) = good(1, 1) = good(2, 2) = 1.0 / 3.0;
  CHECK_NOTHROW(DensityMatrix::checked(good));

  CMatrix trace_off = good;
  trace_off(0, 0) = 0.5;
  CHECK_THROWS_AS(DensityMatrix::checked(trace_off), DomainError);

  CMatrix not_hermitian = good;
  not_hermitian(0, 1) = Cmplx(0.1, 0.2);
  not_hermitian(1, 0) = Cmplx(0.1, 0.2);  // equal, not conjugate
  CHECK_THROWS_AS(DensityMatrix::checked(not_hermitian), DomainError);

  CMatrix negative(3);
  negative(0, 0) = 0.6;
  negative(1, 1) = 0.6;
  negative(2, 2) = -0.2;
  CHECK_THROWS_AS(DensityMatrix::checked(negative), DomainError);
}

TEST_CASE("eigen-solver sanity on known spectra") {
  CMatrix diag(4);
  diag(0, 0) = 0.4;
  diag(1, 1) = 0.3;
  diag(2, 2) = 0.2;
  diag(3, 3) = 0.1;
  const auto evs = hermitian_eigenvalues(diag);
  CHECK(evs[0] == doctest::Approx(0.1).epsilon(1e-15));
  CHECK(evs[3] == doctest::Approx(0.4).epsilon(1e-15));

  // 2x2 with a complex coupling: eigenvalues 1/2 +- |z|.
  CMatrix two(2);
  two(0, 0) = two(1, 1) = 0.5;
  two(0, 1) = Cmplx(0.3, -0.2);
  two(1, 0) = Cmplx(0.3, 0.2);
  const double z = std::sqrt(0.3 * 0.3 + 0.2 * 0.2);
  const auto e2 = hermitian_eigenvalues(two);
  CHECK(e2[0] == doctest::Approx(0.5 - z).epsilon(1e-14));
  CHECK(e2[1] == doctest::Approx(0.5 + z).epsilon(1e-14));
}
