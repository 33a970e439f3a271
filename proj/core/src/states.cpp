#include "mmvol/states.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "mmvol/constants.hpp"

namespace mmvol {

namespace {

void require(bool ok, const char* what) {
  if (!ok) throw DomainError(std::string("coordinate out of range: ") + what);
}

void check_ranges3(const CoordinatePoint3& q) {
  require(q.a > 0.0 && q.b > 0.0 && q.a + q.b < 1.0, "diagonal (a, b)");
  require(q.s >= 0.0 && q.s <= 1.0, "s");
  require(q.r >= 0.0 && q.r <= 1.0, "r");
  require(q.theta1 >= 0.0 && q.theta1 <= kPi, "theta1");
  require(q.theta2 >= 0.0 && q.theta2 <= kPi, "theta2");
  require(q.theta3 >= 0.0 && q.theta3 <= kTwoPi, "theta3");
  require(q.nu >= 0.0 && q.nu <= kTwoPi, "nu");
}

void check_ranges4(const CoordinatePoint4& q) {
  require(q.a > 0.0 && q.b > 0.0 && q.c > 0.0 && q.a + q.b + q.c < 1.0,
          "diagonal (a, b, c)");
  require(q.s >= 0.0 && q.s <= 1.0, "s");
  require(q.v >= 0.0 && q.v <= 1.0, "v");
  require(q.xi1 >= 0.0 && q.xi1 <= kPi, "xi1");
  require(q.xi2 >= 0.0 && q.xi2 <= kPi, "xi2");
  require(q.xi3 >= 0.0 && q.xi3 <= kPi, "xi3");
  require(q.xi4 >= 0.0 && q.xi4 <= kPi, "xi4");
  require(q.xi5 >= 0.0 && q.xi5 <= kTwoPi, "xi5");
  require(q.nu >= 0.0 && q.nu <= kTwoPi, "nu");
}

}  // namespace

BlooreParams3 point3_to_bloore(const CoordinatePoint3& q) {
  check_ranges3(q);
  detail::Bloore3OffDiag o =
      detail::bloore3_offdiag(q.s, q.nu, q.r, q.theta1, q.theta2, q.theta3);
  BlooreParams3 p;
  p.a = q.a;
  p.b = q.b;
  p.c = 1.0 - q.a - q.b;
  p.F = Cmplx(q.s * std::sin(q.nu), q.s * std::cos(q.nu));
  p.G = Cmplx(o.GR, o.GI);
  p.H = Cmplx(o.HR, o.HI);
  return p;
}

CMatrix build_rho3(const BlooreParams3& p) {
  const double sab = std::sqrt(p.a * p.b);
  const double sac = std::sqrt(p.a * p.c);
  const double sbc = std::sqrt(p.b * p.c);
  CMatrix m(3);
  m(0, 0) = p.a;
  m(1, 1) = p.b;
  m(2, 2) = p.c;
  m(0, 1) = sab * std::conj(p.H);
  m(1, 0) = sab * p.H;
  m(0, 2) = sac * p.G;
  m(2, 0) = sac * std::conj(p.G);
  m(1, 2) = sbc * std::conj(p.F);
  m(2, 1) = sbc * p.F;
  return m;
}

bool positivity3(Cmplx F, Cmplx G, Cmplx H, double slack) {
  const double f2 = std::norm(F);
  const double g2 = std::norm(G);
  const double h2 = std::norm(H);
  if (f2 > 1.0 + slack || g2 > 1.0 + slack || h2 > 1.0 + slack) return false;
  const double cross = 2.0 * std::real(F * G * H);
  return f2 + g2 + h2 - cross <= 1.0 + slack;
}

double det3_closed(const CoordinatePoint3& q) {
  check_ranges3(q);
  const double c = 1.0 - q.a - q.b;
  return q.a * q.b * c * (1.0 - q.r * q.r) * (1.0 - q.s * q.s);
}

double jacobian3(const CoordinatePoint3& q) {
  check_ranges3(q);
  const double c = 1.0 - q.a - q.b;
  const double abc = q.a * q.b * c;
  const double s1 = std::sin(q.theta1);
  return abc * abc * std::pow(q.r, 3) * q.s * (1.0 - q.s * q.s) * s1 * s1 *
         std::sin(q.theta2);
}

OffDiag4 point4_to_offdiag(const CoordinatePoint4& q) {
  check_ranges4(q);
  detail::OffDiag4Parts o = detail::offdiag4_parts(q.s, q.nu, q.v, q.xi1,
                                                   q.xi2, q.xi3, q.xi4, q.xi5);
  OffDiag4 r;
  r.F = Cmplx(q.s * std::sin(q.nu), q.s * std::cos(q.nu));
  r.O = Cmplx(o.OR, o.OI);
  r.P = Cmplx(o.PR, o.PI);
  r.Q = Cmplx(o.QR, o.QI);
  return r;
}

CMatrix build_rho4(const CoordinatePoint4& q) {
  OffDiag4 od = point4_to_offdiag(q);
  const double d = 1.0 - q.a - q.b - q.c;
  CMatrix m(4);
  m(0, 0) = q.a;
  m(1, 1) = q.b;
  m(2, 2) = q.c;
  m(3, 3) = d;
  const double sad = std::sqrt(q.a * d);
  const double sbc = std::sqrt(q.b * q.c);
  const double sbd = std::sqrt(q.b * d);
  const double scd = std::sqrt(q.c * d);
  m(0, 3) = sad * std::conj(od.O);
  m(3, 0) = sad * od.O;
  m(1, 2) = sbc * std::conj(od.F);
  m(2, 1) = sbc * od.F;
  m(1, 3) = sbd * od.P;
  m(3, 1) = sbd * std::conj(od.P);
  m(2, 3) = scd * std::conj(od.Q);
  m(3, 2) = scd * od.Q;
  return m;
}

double det4_closed(const CoordinatePoint4& q) {
  check_ranges4(q);
  const double d = 1.0 - q.a - q.b - q.c;
  return q.a * q.b * q.c * d * (1.0 - q.s * q.s) * (1.0 - q.v * q.v);
}

double jacobian4(const CoordinatePoint4& q) {
  check_ranges4(q);
  const double d = 1.0 - q.a - q.b - q.c;
  const double s1 = std::sin(q.xi1);
  const double s2 = std::sin(q.xi2);
  const double s3 = std::sin(q.xi3);
  return q.a * q.b * q.b * q.c * q.c * d * d * d * q.s *
         (1.0 - q.s * q.s) * std::pow(q.v, 5) * std::pow(s1, 4) *
         std::pow(s2, 3) * s3 * s3 * std::sin(q.xi4);
}

std::array<double, 3> pair_eigenvalues_cubic(double r, double s, double theta1,
                                             double theta2) {
  require(r >= 0.0 && r <= 1.0, "r");
  require(s >= 0.0 && s <= 1.0, "s");
  const double st = std::sin(theta1) * std::sin(theta2);
  const double t = st * st;
  const double r2 = r * r, s2 = s * s;
  const double c2 = 3.0 - r2 - r2 * s - s2 + 2.0 * r2 * s * t;
  const double c1 = 3.0 * (1.0 - r2) * (1.0 - s2);
  const double c0 = (1.0 - r2) * (1.0 - r2) * (1.0 - s2) * (1.0 - s2);

  // At r = 1 or s = 1 the constant term vanishes and zero is a known root
  // (a double root on the boundary). Factor it out; the trigonometric
  // branch below would smear a double root by sqrt(machine epsilon).
  if (c0 == 0.0) {
    std::array<double, 3> x{0.0, 0.0, 0.0};
    if (c1 == 0.0) {
      x[0] = -c2;
    } else {
      const double disc2 = c2 * c2 - 4.0 * c1;
      if (disc2 < -1e-14 * c2 * c2)
        throw NumericalError(
            "pair_eigenvalues_cubic: discriminant signals a complex root "
            "pair");
      const double root = std::sqrt(std::max(0.0, disc2));
      const double big = -0.5 * (c2 + (c2 >= 0.0 ? root : -root));
      x[0] = big;
      x[1] = big == 0.0 ? 0.0 : c1 / big;
    }
    std::sort(x.begin(), x.end());
    return x;
  }

  // Depress x = z - c2/3: z^3 + p z + q.
  const double p = c1 - c2 * c2 / 3.0;
  const double q = 2.0 * c2 * c2 * c2 / 27.0 - c2 * c1 / 3.0 + c0;
  const double disc = -4.0 * p * p * p - 27.0 * q * q;
  const double scale =
      4.0 * std::abs(p * p * p) + 27.0 * q * q + 1e-300;
  if (disc < -1e-14 * scale)
    throw NumericalError(
        "pair_eigenvalues_cubic: discriminant signals a complex root pair");

  std::array<double, 3> z;
  if (p >= 0.0) {
    // Only reachable in the triple-root limit (p -> 0 from below).
    const double zr = std::cbrt(-q);
    z = {zr, zr, zr};
  } else {
    const double m = 2.0 * std::sqrt(-p / 3.0);
    const double arg = std::clamp(3.0 * q / (p * m), -1.0, 1.0);
    const double phi = std::acos(arg);
    z = {m * std::cos(phi / 3.0), m * std::cos((phi - kTwoPi) / 3.0),
         m * std::cos((phi + kTwoPi) / 3.0)};
  }
  std::array<double, 3> x{z[0] - c2 / 3.0, z[1] - c2 / 3.0, z[2] - c2 / 3.0};
  std::sort(x.begin(), x.end());
  return x;
}

DensityMatrix DensityMatrix::checked(const CMatrix& m) {
  if (m.hermiticity_defect() > 1e-14)
    throw DomainError("density matrix is not hermitian");
  if (std::abs(m.trace_real() - 1.0) > 1e-14)
    throw DomainError("density matrix trace differs from 1");
  const std::vector<double> eig = hermitian_eigenvalues(m);
  if (eig.front() < -1e-12)
    throw DomainError("density matrix has a negative eigenvalue");
  return DensityMatrix(m);
}

}  // namespace mmvol
