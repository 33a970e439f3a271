#ifndef MMVOL_SPECIAL_FUNCTIONS_HPP
#define MMVOL_SPECIAL_FUNCTIONS_HPP

namespace mmvol {

// Dawson integral D(x) = exp(-x^2) int_0^x exp(t^2) dt. Maclaurin series for
// |x| <= 1, a sampling-theorem sum (step 0.2) for the midrange, and the
// divergent asymptotic series truncated at its smallest term for |x| >= 10.
// The three regions agree well below 1e-12 at the seams.
double dawson(double x);

// Imaginary error function, 2/sqrt(pi) int_0^x exp(t^2) dt. Overflows to
// +inf for x beyond about 26.6.
double erfi(double x);

// Modified Bessel function I_nu(x) for x >= 0, nu >= -0.5. Ascending series
// (all terms positive, no cancellation) up to x = 100, Hankel asymptotic
// beyond.
double bessel_i(double nu, double x);

// exp(-x) I_nu(x); safe for arbitrarily large x.
double bessel_i_scaled(double nu, double x);

// 1/beta - coth(beta), the negative of the classical Langevin function.
// Series near zero, direct evaluation elsewhere; odd in beta.
double langevin_neg(double beta);

// Mean normalized level x = m/j of a (2j+1)-level system with Gibbs
// weights e^{beta x}: sum_m (m/j) e^{beta m/j} / sum_m e^{beta m/j}.
// j must be a nonnegative multiple of 1/2. brillouin(1/2, beta) = tanh(beta)
// and brillouin(1, beta) = 2 sinh(beta) / (1 + 2 cosh(beta)).
double brillouin(double j, double beta);

// I_{d/2}(j) / I_{d/2 - 1}(j), the saturation curve of a classical
// d-component spin; d >= 1, j >= 0.
double dvector_ratio(int d, double j);

}  // namespace mmvol

#endif  // MMVOL_SPECIAL_FUNCTIONS_HPP
