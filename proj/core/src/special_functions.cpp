#include "mmvol/special_functions.hpp"

#include <cmath>
#include <string>

#include "mmvol/constants.hpp"
#include "mmvol/errors.hpp"

namespace mmvol {

namespace {

double dawson_series(double x) {
  // D(x) = sum_k (-2)^k x^(2k+1) / (2k+1)!!
  double term = x;
  double sum = x;
  const double m2x2 = -2.0 * x * x;
  for (int k = 0; k < 60; ++k) {
    term *= m2x2 / (2.0 * k + 3.0);
    sum += term;
    if (std::abs(term) < 1e-18 * std::abs(sum)) break;
  }
  return sum;
}

double dawson_midrange(double x) {
  // Sampling form D(x) = (1/sqrt(pi)) sum_{n odd} exp(-(x - n h)^2) / n,
  // accurate to ~exp(-(pi/(2h))^2). Only terms with |x - n h| <= 6.5
  // contribute above 1e-17.
  const double h = 0.2;
  const int n_lo = static_cast<int>(std::floor((x - 6.5) / h));
  const int n_hi = static_cast<int>(std::ceil((x + 6.5) / h));
  double sum = 0.0;
  for (int n = n_lo | 1; n <= n_hi; n += 2) {
    if (n == 0) continue;
    const double d = x - n * h;
    sum += std::exp(-d * d) / n;
  }
  return sum / kSqrtPi;
}

double dawson_asymptotic(double x) {
  // D(x) = 1/(2x) sum_k (2k-1)!! / (2 x^2)^k, truncated at the smallest
  // term.
  const double inv2x2 = 1.0 / (2.0 * x * x);
  double term = 1.0;
  double sum = 1.0;
  for (int k = 1; k < 40; ++k) {
    const double next = term * (2.0 * k - 1.0) * inv2x2;
    if (std::abs(next) >= std::abs(term)) break;
    term = next;
    sum += term;
    if (std::abs(term) < 1e-18 * std::abs(sum)) break;
  }
  return sum / (2.0 * x);
}

double bessel_i_series_scaled(double nu, double x) {
  // exp(-x) (x/2)^nu sum_k (x^2/4)^k / (k! Gamma(nu + k + 1)). All terms
  // positive; safe up to x ~ 100 where exp(-x)(x/2)^nu still normalizes.
  const double q = 0.25 * x * x;
  double term = 1.0 / std::tgamma(nu + 1.0);
  double sum = term;
  for (int k = 1; k < 400; ++k) {
    term *= q / (k * (nu + k));
    sum += term;
    if (term < 1e-18 * sum) break;
  }
  // exp(-x) (x/2)^nu without intermediate overflow/underflow.
  double lf = -x;
  if (nu != 0.0) lf += nu * std::log(0.5 * x);
  return sum * std::exp(lf);
}

double bessel_i_asymptotic_scaled(double nu, double x) {
  // exp(-x) I_nu(x) ~ (2 pi x)^(-1/2) sum_k (-)^k a_k(nu) / x^k with
  // a_k = prod_{j=1..k} (4 nu^2 - (2j-1)^2) / (8^k k!). The exp(-2x) tail
  // is far below double precision for x > 100.
  const double mu = 4.0 * nu * nu;
  double term = 1.0;
  double sum = 1.0;
  for (int k = 1; k < 30; ++k) {
    const double f = (2.0 * k - 1.0);
    term *= -(mu - f * f) / (8.0 * k * x);
    sum += term;
    if (std::abs(term) < 1e-18 * std::abs(sum)) break;
  }
  return sum / std::sqrt(kTwoPi * x);
}

}  // namespace

double dawson(double x) {
  const double ax = std::abs(x);
  double d;
  if (ax <= 1.0)
    d = dawson_series(ax);
  else if (ax < 10.0)
    d = dawson_midrange(ax);
  else
    d = dawson_asymptotic(ax);
  return x < 0.0 ? -d : d;
}

double erfi(double x) {
  return 2.0 / kSqrtPi * std::exp(x * x) * dawson(x);
}

double bessel_i_scaled(double nu, double x) {
  if (x < 0.0 || nu < -0.5)
    throw DomainError("bessel_i: requires x >= 0 and nu >= -1/2");
  if (x == 0.0) return nu == 0.0 ? 1.0 : 0.0;
  if (x <= 100.0) return bessel_i_series_scaled(nu, x);
  return bessel_i_asymptotic_scaled(nu, x);
}

double bessel_i(double nu, double x) {
  if (x < 0.0 || nu < -0.5)
    throw DomainError("bessel_i: requires x >= 0 and nu >= -1/2");
  if (x == 0.0) return nu == 0.0 ? 1.0 : 0.0;
  return bessel_i_scaled(nu, x) * std::exp(x);
}

double langevin_neg(double beta) {
  const double ab = std::abs(beta);
  if (ab < 0.5) {
    const double b2 = beta * beta;
    // -(beta/3 - beta^3/45 + 2 beta^5/945 - beta^7/4725 + 2 beta^9/93555
    //   - 1382 beta^11/638512875)
    return -beta *
           (1.0 / 3.0 +
            b2 * (-1.0 / 45.0 +
                  b2 * (2.0 / 945.0 +
                        b2 * (-1.0 / 4725.0 +
                              b2 * (2.0 / 93555.0 -
                                    b2 * 1382.0 / 638512875.0)))));
  }
  return 1.0 / beta - 1.0 / std::tanh(beta);
}

double brillouin(double j, double beta) {
  const double two_j = 2.0 * j;
  const long twoj = std::lround(two_j);
  if (j < 0.0 || twoj < 0 || std::abs(two_j - twoj) > 1e-9)
    throw DomainError("brillouin: j must be a nonnegative multiple of 1/2");
  if (twoj == 0) return 0.0;
  // Levels are normalized to x = m/j in [-1, 1], so spin-1/2 gives tanh
  // and spin-1 gives 2 sinh / (1 + 2 cosh). Weights e^{beta(x - 1)} <= 1
  // for beta >= 0 keep the sums stable; beta < 0 mirrors by oddness.
  const double sign = beta < 0.0 ? -1.0 : 1.0;
  const double ab = std::abs(beta);
  double zs = 0.0, ms = 0.0;
  for (long k = 0; k <= twoj; ++k) {
    const double x = (-j + k) / j;
    const double w = std::exp(ab * (x - 1.0));
    zs += w;
    ms += x * w;
  }
  return sign * ms / zs;
}

double dvector_ratio(int d, double j) {
  if (d < 1) throw DomainError("dvector_ratio: d must be >= 1");
  if (j < 0.0) throw DomainError("dvector_ratio: j must be >= 0");
  if (j == 0.0) return 0.0;
  const double half_d = 0.5 * d;
  return bessel_i_scaled(half_d, j) / bessel_i_scaled(half_d - 1.0, j);
}

}  // namespace mmvol
