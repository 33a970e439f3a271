#ifndef MMVOL_STATES_HPP
#define MMVOL_STATES_HPP

#include <array>
#include <cmath>

#include "mmvol/complex_matrix.hpp"
#include "mmvol/errors.hpp"

namespace mmvol {

// Scaled off-diagonal parametrization of a 3x3 density matrix. The matrix is
//   [ a          sqrt(ab) H*   sqrt(ac) G ]
//   [ sqrt(ab) H  b            sqrt(bc) F* ]
//   [ sqrt(ac) G* sqrt(bc) F   c          ]
// so that
//   det rho = abc (1 - |F|^2 - |G|^2 - |H|^2 + 2 Re(F G H)).
struct BlooreParams3 {
  double a, b, c;
  Cmplx F, G, H;
};

// Polar coordinates on the scaled off-diagonal region, chosen so positivity
// becomes the box r, s in [0,1]:
//
//   F = s (sin nu + i cos nu),
//   (G, H) built from a radius-r point on the 4-sphere laid along the
//   eigenvectors of the quadratic form |G|^2 + |H|^2 - 2 Re(F G H), with
//   axis scalings sqrt(1 +- s) that cancel the form eigenvalues: the form
//   evaluates to r^2 (1 - s^2) identically, hence
//   det rho = abc (1 - r^2)(1 - s^2).
//
// Diagonal is (a, b, c = 1 - a - b). Ranges: 0 < a, 0 < b, a + b < 1,
// r, s in [0, 1], theta1, theta2 in [0, pi], theta3, nu in [0, 2 pi).
struct CoordinatePoint3 {
  double a, b;
  double s, nu;
  double r, theta1, theta2, theta3;
};

// Same construction one size up, on the slice where the g, h entries vanish.
// Diagonal (a, b, c, d = 1 - a - b - c); the nonzero scaled entries are
// rho_14 = sqrt(ad) O*, rho_23 = sqrt(bc) F*, rho_24 = sqrt(bd) P,
// rho_34 = sqrt(cd) Q* (conjugates transposed), giving
//
//   det rho = abcd [ (1 - |F|^2)(1 - |O|^2) - |P|^2 - |Q|^2 + 2 Re(F P Q) ].
//
// With F = s (sin nu + i cos nu) and (O, P, Q) from a radius-v point on the
// 5-sphere laid along the eigenvectors of the bracketed form,
//   det rho = abcd (1 - s^2)(1 - v^2).
// Ranges: diagonal entries positive and summing below 1, s, v in [0, 1],
// xi1..xi4 in [0, pi], xi5, nu in [0, 2 pi).
struct CoordinatePoint4 {
  double a, b, c;
  double s, nu;
  double v, xi1, xi2, xi3, xi4, xi5;
};

struct OffDiag4 {
  Cmplx F, O, P, Q;
};

namespace detail {

// Core of the n = 3 map. Over (G_R, G_I, H_R, H_I) the quadratic form
// |G|^2 + |H|^2 - 2 s Re(w G H), w = sin nu + i cos nu, has orthonormal
// eigenvectors (Sn = sin nu, Cn = cos nu)
//   value 1 - s:  f1 = (Sn, -Cn, 1, 0)/sqrt2,  f2 = (-Cn, -Sn, 0, 1)/sqrt2
//   value 1 + s:  f3 = (-Sn, Cn, 1, 0)/sqrt2,  f4 = ( Cn,  Sn, 0, 1)/sqrt2.
// A 4-sphere point with radii r sqrt(1+s) on (f1, f2) and r sqrt(1-s) on
// (f3, f4) then gives form value r^2 (1 - s^2) exactly.
struct Bloore3OffDiag {
  double GR, GI, HR, HI;
};

inline Bloore3OffDiag bloore3_offdiag(double s, double nu, double r,
                                      double theta1, double theta2,
                                      double theta3) {
  const double c1 = std::cos(theta1), s1 = std::sin(theta1);
  const double c2 = std::cos(theta2), s2 = std::sin(theta2);
  const double c3 = std::cos(theta3), s3 = std::sin(theta3);
  const double rp = r * std::sqrt(1.0 + s);
  const double rm = r * std::sqrt(1.0 - s);

  const double J1 = rp * c1;
  const double J2 = rp * c2 * s1;
  const double J3 = rm * c3 * s2 * s1;
  const double J4 = rm * s3 * s2 * s1;

  const double Cn = std::cos(nu), Sn = std::sin(nu);
  const double inv_sqrt2 = 0.70710678118654752440;

  Bloore3OffDiag o;
  o.GR = (J1 * Sn - J2 * Cn - J3 * Sn + J4 * Cn) * inv_sqrt2;
  o.GI = (-J1 * Cn - J2 * Sn + J3 * Cn + J4 * Sn) * inv_sqrt2;
  o.HR = (J1 + J3) * inv_sqrt2;
  o.HI = (J2 + J4) * inv_sqrt2;
  return o;
}

// |G|^2 and |H|^2 only; the Monte Carlo integrands need nothing else from
// the angular sector (|F|^2 = s^2 and the cross term is already absorbed
// into det = abc (1 - r^2)(1 - s^2)).
struct GhSquares {
  double g2, h2;
};

inline GhSquares gh_squares3(double s, double nu, double r, double theta1,
                             double theta2, double theta3) {
  Bloore3OffDiag o = bloore3_offdiag(s, nu, r, theta1, theta2, theta3);
  return {o.GR * o.GR + o.GI * o.GI, o.HR * o.HR + o.HI * o.HI};
}

// Core of the n = 4 map. Over (P_R, P_I, Q_R, Q_I) the form
// |P|^2 + |Q|^2 - 2 s Re(w P Q) has the same eigenvector family as the
// n = 3 case; the O components carry form weight (1 - s^2) directly. The
// 5-sphere radii are v sqrt(1+s) on the (1-s) axes, v sqrt(1-s) on the
// (1+s) axes and plain v on the O axes, which makes the total form value
// v^2 (1 - s^2).
struct OffDiag4Parts {
  double OR, OI, PR, PI, QR, QI;
};

inline OffDiag4Parts offdiag4_parts(double s, double nu, double v, double xi1,
                                    double xi2, double xi3, double xi4,
                                    double xi5) {
  const double c1 = std::cos(xi1), s1 = std::sin(xi1);
  const double c2 = std::cos(xi2), s2 = std::sin(xi2);
  const double c3 = std::cos(xi3), s3 = std::sin(xi3);
  const double c4 = std::cos(xi4), s4 = std::sin(xi4);
  const double c5 = std::cos(xi5), s5 = std::sin(xi5);

  const double vp = v * std::sqrt(1.0 + s);
  const double vm = v * std::sqrt(1.0 - s);

  const double K1 = vp * c1;
  const double K2 = vp * c2 * s1;
  const double K3 = vm * c3 * s2 * s1;
  const double K4 = vm * c4 * s3 * s2 * s1;
  const double K5 = v * c5 * s4 * s3 * s2 * s1;
  const double K6 = v * s5 * s4 * s3 * s2 * s1;

  const double Cn = std::cos(nu), Sn = std::sin(nu);
  const double inv_sqrt2 = 0.70710678118654752440;

  OffDiag4Parts o;
  o.OR = K5;
  o.OI = K6;
  o.PR = (K1 * Sn - K2 * Cn - K3 * Sn + K4 * Cn) * inv_sqrt2;
  o.PI = (-K1 * Cn - K2 * Sn + K3 * Cn + K4 * Sn) * inv_sqrt2;
  o.QR = (K1 + K3) * inv_sqrt2;
  o.QI = (K2 + K4) * inv_sqrt2;
  return o;
}

}  // namespace detail

// --- n = 3 -----------------------------------------------------------------

BlooreParams3 point3_to_bloore(const CoordinatePoint3& q);

// rho from scaled parameters, conjugation placement as documented on
// BlooreParams3.
CMatrix build_rho3(const BlooreParams3& p);

// Positivity of rho in terms of the scaled variables alone:
// |F|, |G|, |H| <= 1 and |F|^2 + |G|^2 + |H|^2 - 2 Re(F G H) <= 1. A small
// slack absorbs rounding on the boundary.
bool positivity3(Cmplx F, Cmplx G, Cmplx H, double slack = 1e-12);

// det rho in closed form for a coordinate point: abc (1 - r^2)(1 - s^2).
double det3_closed(const CoordinatePoint3& q);

// Volume factor of the coordinate map, d(entries)/d(coordinates):
// a^2 b^2 c^2 r^3 s (1 - s^2) sin^2(theta1) sin(theta2).
double jacobian3(const CoordinatePoint3& q);

// --- n = 4 -----------------------------------------------------------------

OffDiag4 point4_to_offdiag(const CoordinatePoint4& q);

CMatrix build_rho4(const CoordinatePoint4& q);

// det rho = abcd (1 - s^2)(1 - v^2).
double det4_closed(const CoordinatePoint4& q);

// a b^2 c^2 d^3 s (1 - s^2) v^5 sin^4(xi1) sin^3(xi2) sin^2(xi3) sin(xi4).
double jacobian4(const CoordinatePoint4& q);

// --- eigenvalue pair products ----------------------------------------------

// The three real roots of
//   x^3 + c2 x^2 + c1 x + c0 = 0,
//   c2 = 3 - r^2 - r^2 s - s^2 + 2 r^2 s t,   t = sin^2(theta1) sin^2(theta2)
//   c1 = 3 (1 - r^2)(1 - s^2),
//   c0 = (1 - r^2)^2 (1 - s^2)^2,
// returned ascending. Each root is the negative of a pairwise product
// p_i p_j of eigenvalues of the scaled unit-diagonal 3x3 matrix at
// (r, s, theta1, theta2); the angles enter only through t. All roots are
// real for parameters in range; a complex pair beyond the discriminant
// tolerance raises NumericalError.
std::array<double, 3> pair_eigenvalues_cubic(double r, double s, double theta1,
                                             double theta2);

// --- checked density matrices ----------------------------------------------

// A density matrix that has been validated: hermitian to 1e-14, unit trace
// to 1e-14, eigenvalues >= -1e-12. Construction throws DomainError on
// violation.
class DensityMatrix {
 public:
  static DensityMatrix checked(const CMatrix& m);

  const CMatrix& matrix() const { return m_; }
  int dim() const { return m_.dim(); }

 private:
  explicit DensityMatrix(const CMatrix& m) : m_(m) {}
  CMatrix m_;
};

}  // namespace mmvol

#endif  // MMVOL_STATES_HPP
