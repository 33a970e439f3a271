#ifndef MMVOL_THERMO_HPP
#define MMVOL_THERMO_HPP

#include <array>
#include <vector>

#include "mmvol/metrics.hpp"

namespace mmvol {

// Which equilibrium ensemble a curve describes. The lambda* observables act
// on 3x3 density matrices drawn from the maximal-metric prior (weak
// equilibrium for the diagonal generators, the commuting slice for
// lambda1). four_by_four_strong is the commuting slice of the 4x4 chain
// observable; the spin_half entries are the 2x2 closed forms under the two
// metric families.
enum class ThermoObservable {
  lambda8,
  lambda3,
  lambda1_strong,
  four_by_four_strong,
  spin_half_maximal,
  spin_half_minimal,
};

enum class ThermoMethod { closed_form, quadrature, mc };

struct ThermoCurve {
  std::vector<double> beta_grid;
  std::vector<double> q_values;
  std::vector<double> expected_values;
  ThermoMethod method = ThermoMethod::closed_form;
  ThermoObservable observable_id = ThermoObservable::lambda8;
};

// Partition function Q(beta) = <exp(-beta E)> for the diagonal su(3)
// generator diag(1, 1, -2)/sqrt(3), averaged over the univariate marginal
// density of the large diagonal entry: E = (1 - 3a)/sqrt(3).
//
// closed_form evaluates the erf/erfi antiderivatives of
// int (1-a) sqrt(a) e^{k a} da (k = sqrt(3) beta), switching to the
// ascending series for |k| <= 1 where the antiderivative combination loses
// digits to cancellation. quadrature integrates the defining integral
// directly and is the slower reference path.
double q_lambda8(double beta, ThermoMethod method = ThermoMethod::closed_form);

// Expected value -d log Q/d beta, evaluated as the analytic ratio of the
// two moment integrals rather than by differencing Q.
double ev_lambda8(double beta);

// Same construction for the traceless diagonal generator diag(1, -1, 0):
// E = b - c, averaged over the bivariate marginal density. Both integrals
// run over the open simplex by nested quadrature; the square-root endpoint
// factors are absorbed by the quadrature substitution.
double q_lambda3(double beta);
double ev_lambda3(double beta);

// Commuting slice of the off-diagonal generator with eigenvalues
// {-1, 0, 1}: mixtures of its eigenprojectors carry the classical
// (lambda1 lambda2 lambda3)^(-1/2) volume element, and
// Q(beta) = pi int_0^1 I_0(beta (1 - x^2)) dx after the inner integral is
// done in closed form. Q(0) = pi.
double q_lambda1_strong(double beta);
double ev_lambda1(double beta);

// langevin_neg(beta) - ev_lambda1(beta); the two curves nearly coincide,
// and this exposes the small gap directly.
double diff_vs_langevin(double beta);

// Commuting slice of the 4x4 chain observable (ones on the super- and
// subdiagonal). Its eigenvalues are 2 cos(k pi / 5), k = 1..4; mixtures of
// the eigenprojectors carry the (prod lambda_k)^(-1/2) element, Q(0) = pi^2.
double q_strong4(double beta);
double ev_strong4(double beta);

// Ascending: {-(1+sqrt(5))/2, -(sqrt(5)-1)/2, (sqrt(5)-1)/2, (1+sqrt(5))/2}.
std::array<double, 4> four4_observable_eigenvalues();

// 2x2 closed forms under the two metric families, observable diag(1, -1):
// maximal has Q = sinh(beta)/beta and ev = 1/beta - coth(beta); minimal has
// Q = 2 I_1(beta)/beta and ev = -I_2(beta)/I_1(beta). Both evaluated by
// series near beta = 0.
struct SpinHalfReference {
  double q = 1.0;
  double ev = 0.0;
};
SpinHalfReference spin_half_reference(double beta, MetricFamily metric);

// Evaluates Q and the expected value over the grid. Grid points are
// independent and may be computed in parallel; the curve is assembled in
// grid order, so the result does not depend on the worker count. Throws
// DomainError when the method is not available for the observable
// (closed_form: lambda8 and the spin_half pair; quadrature: everything but
// the spin_half pair; mc: four_by_four_strong only).
ThermoCurve thermo_curve(ThermoObservable observable,
                         const std::vector<double>& beta_grid,
                         ThermoMethod method);

}  // namespace mmvol

#endif  // MMVOL_THERMO_HPP
