#ifndef MMVOL_METRICS_HPP
#define MMVOL_METRICS_HPP

#include <vector>

#include "mmvol/complex_matrix.hpp"
#include "mmvol/states.hpp"

namespace mmvol {

// Which member of the monotone-metric family the volume element comes from.
enum class MetricFamily { minimal, maximal };

// Two independent ways to evaluate the same weight; they agree up to the
// documented constant factor, which makes the pair a useful cross-check.
enum class WeightRoute { closed_form, eigenvalue };

// A volume element is picked by metric family plus evaluation route.
struct VolumeElementKind {
  MetricFamily metric = MetricFamily::maximal;
  WeightRoute route = WeightRoute::closed_form;
};

// Sums of principal minors of a hermitian matrix: w1 = trace, w2 over 2x2,
// w3 over 3x3, plus the determinant.
struct MinorSums {
  int n = 0;
  double w1 = 0.0, w2 = 0.0, w3 = 0.0, det = 0.0;
};

MinorSums minor_sums(const DensityMatrix& rho);
MinorSums minor_sums(const CMatrix& m);

// Off-diagonal pair factor entering the closed forms:
//   n = 2:  1
//   n = 3:  w2 - det          ( = prod_{i<j} (p_i + p_j) )
//   n = 4:  w2 w3 - w3^2 - det
double pair_sum_factor(const MinorSums& ms);

// prod_{i<j} (p_i + p_j) straight from an eigenvalue list; equals
// pair_sum_factor of the same matrix and is used to validate that identity.
double pair_sum_product(const std::vector<double>& eigenvalues);

// Density of the volume element with respect to Lebesgue measure on the
// matrix entries, up to family-dependent normalization.
//
// closed_form route (minor sums, no diagonalization):
//   minimal:  det^(-1/2) / pair_sum_factor
//   maximal:  det^(1/2 - n) * pair_sum_factor   (n = 2: det^(-3/2))
//
// eigenvalue route: ( prod over ordered pairs (i,j) of c(p_i, p_j) )^(-1/2)
// with c(x, y) = x + y for minimal and the harmonic mean 2xy/(x+y) for
// maximal. The routes differ by the constant factor
//   closed / eigenvalue = 2^(n/2)            (minimal)
//                         2^((n^2 - n)/2)    (maximal).
//
// Eigenvalues below 1e-12 (or a determinant below 1e-12 on the closed
// route, which implies such an eigenvalue) raise SingularStateError.
double volume_weight(const DensityMatrix& rho, VolumeElementKind kind);

double volume_weight_from_minors(const MinorSums& ms, MetricFamily metric);
double volume_weight_from_eigenvalues(const std::vector<double>& eigenvalues,
                                      MetricFamily metric);

}  // namespace mmvol

#endif  // MMVOL_METRICS_HPP
