#include "mmvol/distributions.hpp"

#include <cmath>

#include "mmvol/constants.hpp"
#include "mmvol/errors.hpp"

namespace mmvol {

namespace {

constexpr double kEdgeTol = 1e-12;

void check_simplex(double a, double b) {
  if (!(a > 0.0) || a >= 1.0) throw DomainError("pdf: a outside (0, 1)");
  const double c = 1.0 - a - b;
  if (b < 0.0 || c < 0.0) throw DomainError("pdf: point outside the simplex");
  if (b < kEdgeTol || c < kEdgeTol)
    throw SingularStateError("pdf: within 1e-12 of a singular simplex edge");
}

}  // namespace

double pdf_bivariate(const SimplexPoint3& p) { return pdf_bivariate(p.a, p.b); }

double pdf_bivariate(double a, double b) {
  check_simplex(a, b);
  const double c = 1.0 - a - b;
  return 15.0 * (1.0 - a) * std::sqrt(a) / (4.0 * kPi * std::sqrt(b * c));
}

double pdf_six(double a, double b, double theta1, double theta2) {
  check_simplex(a, b);
  if (theta1 < 0.0 || theta1 > kPi || theta2 < 0.0 || theta2 > kPi)
    throw DomainError("pdf_six: angles must lie in [0, pi]");
  const double c = 1.0 - a - b;
  const double s1 = std::sin(theta1), s2 = std::sin(theta2);
  const double ang = s1 * s1 * s1 * s1 * s2 * s2 * s2;
  return 15.0 * (1.0 - a) * std::sqrt(a) * ang /
         (8.0 * std::pow(kPi, 4) * std::sqrt(b * c));
}

double pdf_a(double a) {
  if (a < 0.0 || a > 1.0) throw DomainError("pdf_a: a outside [0, 1]");
  return 3.75 * (1.0 - a) * std::sqrt(a);
}

double pdf_b(double b) {
  if (b < 0.0 || b > 1.0) throw DomainError("pdf_b: b outside [0, 1]");
  if (b < kEdgeTol)
    throw SingularStateError("pdf_b: within 1e-12 of the singular edge b = 0");
  return 15.0 * (1.0 - b) * (1.0 + 3.0 * b) / (32.0 * std::sqrt(b));
}

double cdf_a(double a) {
  if (a < 0.0 || a > 1.0) throw DomainError("cdf_a: a outside [0, 1]");
  return 0.5 * a * std::sqrt(a) * (5.0 - 3.0 * a);
}

MomentTable moments() {
  MomentTable t;
  t.mean_a = 3.0 / 7.0;
  t.mean_b = 2.0 / 7.0;
  t.mean_c = 2.0 / 7.0;
  t.mean_ab = 2.0 / 21.0;
  t.mean_a2 = 5.0 / 21.0;
  t.mean_b2 = 1.0 / 7.0;
  t.mean_c2 = 1.0 / 7.0;
  return t;
}

namespace {

// Invert cdf_a by bisection-safeguarded Newton. The density vanishes at
// both ends, so pure Newton can escape; the bracket keeps it honest.
double invert_cdf_a(double u) {
  double lo = 0.0, hi = 1.0;
  double a = std::cbrt(u * u);  // exact for the leading a^(3/2) behaviour
  for (int it = 0; it < 200; ++it) {
    const double f = cdf_a(a) - u;
    if (f > 0.0)
      hi = a;
    else
      lo = a;
    const double d = pdf_a(a);
    double step = d > 1e-12 ? f / d : 0.0;
    double next = a - step;
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    if (std::abs(next - a) < 1e-16 && std::abs(f) < 1e-14) return next;
    a = next;
  }
  return a;
}

}  // namespace

SimplexPoint3 sample_bivariate_one(SplitRng& rng) {
  const double a = invert_cdf_a(rng.next_u01());
  const double y = 0.5 * (1.0 - std::cos(kPi * rng.next_u01()));
  const double b = (1.0 - a) * y;
  return {a, b, 1.0 - a - b};
}

std::vector<SimplexPoint3> sample_bivariate(std::size_t count, uint64_t seed) {
  std::vector<SimplexPoint3> out(count);
  for (std::size_t i = 0; i < count; ++i) {
    SplitRng rng = SplitRng::for_sample(seed, i);
    out[i] = sample_bivariate_one(rng);
  }
  return out;
}

}  // namespace mmvol
