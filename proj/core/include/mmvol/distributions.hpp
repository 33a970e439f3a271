#ifndef MMVOL_DISTRIBUTIONS_HPP
#define MMVOL_DISTRIBUTIONS_HPP

#include <cstdint>
#include <vector>

#include "mmvol/rng.hpp"

namespace mmvol {

// Point of the 2-simplex of diagonal entries; c is stored for convenience
// but is always the dependent coordinate 1 - a - b.
struct SimplexPoint3 {
  double a = 0.0, b = 0.0, c = 0.0;

  SimplexPoint3() = default;
  SimplexPoint3(double a_, double b_) : a(a_), b(b_), c(1.0 - a_ - b_) {}
  SimplexPoint3(double a_, double b_, double c_) : a(a_), b(b_), c(c_) {}
};

// Joint density of the two independent diagonal entries (a, b) of a 3x3
// state under the maximal-metric volume element, with c = 1 - a - b:
//   15 (1 - a) sqrt(a) / (4 pi sqrt(b c)).
// The density is singular on the edges b = 0 and c = 0; evaluation within
// 1e-12 of those edges raises SingularStateError, and points outside the
// simplex raise DomainError.
double pdf_bivariate(const SimplexPoint3& p);
double pdf_bivariate(double a, double b);

// Joint density over (a, b, theta1, theta2) once the radial limits are
// taken; constant in nu and theta3:
//   15 (1 - a) sqrt(a) sin^4(theta1) sin^3(theta2) / (8 pi^4 sqrt(b c)).
double pdf_six(double a, double b, double theta1, double theta2);

// Single-entry marginals: the largest diagonal position integrates to
//   pdf_a(a) = (15/4) (1 - a) sqrt(a)        on [0, 1],
//   pdf_b(b) = 15 (1 - b)(1 + 3 b) / (32 sqrt(b))   on (0, 1].
double pdf_a(double a);
double pdf_b(double b);

// CDF of pdf_a in closed form: a^(3/2) (5 - 3 a) / 2.
double cdf_a(double a);

// Low moments of (a, b, c) under pdf_bivariate, exact rationals.
struct MomentTable {
  double mean_a, mean_b, mean_c;
  double mean_ab;
  double mean_a2, mean_b2, mean_c2;
};
MomentTable moments();

// Draws from pdf_bivariate: a by CDF inversion, then b = (1 - a) times an
// arcsine variate, (1 - cos(pi u)) / 2. Two uniforms per sample, one
// counter-based stream per index, so the output is reproducible for a given
// seed regardless of call order.
SimplexPoint3 sample_bivariate_one(SplitRng& rng);
std::vector<SimplexPoint3> sample_bivariate(std::size_t count, uint64_t seed);

}  // namespace mmvol

#endif  // MMVOL_DISTRIBUTIONS_HPP
