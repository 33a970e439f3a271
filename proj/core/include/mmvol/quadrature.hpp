#ifndef MMVOL_QUADRATURE_HPP
#define MMVOL_QUADRATURE_HPP

#include <cstdint>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "mmvol/metrics.hpp"

namespace mmvol {

enum class IntegralMethod { mc, quad };

struct IntegralEstimate {
  double value = 0.0;
  double std_error = 0.0;  // always 0 for method == quad
  std::uint64_t n_samples = 0;
  std::uint64_t seed = 0;
  IntegralMethod method = IntegralMethod::mc;
};

// Boundary cutoffs for the radial coordinates, interpreted as R = 1 - eps,
// S = 1 - eps (and V = 1 - eps in the 4x4 scenario). Strictly decreasing.
struct CutoffSchedule {
  std::vector<double> epsilons;

  static CutoffSchedule standard();  // {0.2, 0.1, 0.05, 0.025}
  void validate(std::size_t min_length = 1) const;
};

using NdFn = std::function<double(const std::vector<double>&)>;

// Bounds of one nesting level as a function of the outer coordinates
// (empty vector for the outermost level). Lets triangular domains such as
// 0 < h < 1 - g be expressed directly.
using BoundsFn =
    std::function<std::pair<double, double>(const std::vector<double>&)>;

// Plain Monte Carlo over an axis-aligned box. Deterministic for a fixed
// seed regardless of worker count: each sample index owns a counter-based
// stream and blocks are reduced in index order.
IntegralEstimate mc_integrate(const NdFn& f,
                              const std::vector<std::pair<double, double>>& box,
                              std::uint64_t n, std::uint64_t seed);

// Nested adaptive Gauss-Kronrod integration, up to three levels. Every
// level runs through the substitution x = lo + (hi-lo) sin^2(pi t/2), which
// flattens inverse-square-root endpoint singularities, then adapts by
// bisecting the segment with the largest error estimate. tol is absolute.
// Throws AccuracyError (carrying the best estimate) if the refinement
// budget runs out.
IntegralEstimate nested_quad(const NdFn& f, const std::vector<BoundsFn>& bounds,
                             double tol);
IntegralEstimate nested_quad(const NdFn& f,
                             const std::vector<std::pair<double, double>>& box,
                             double tol);

// How truncated integrals draw their points. importance matches the radial
// factors with inverse-CDF samplers on (0, 1-eps) and keeps the weighed
// integrand bounded; plain samples the coordinate box uniformly and is kept
// as a cross-check.
enum class SamplingMode { importance, plain };

// MC estimate of the full volume-element integral in hyperspheroidal
// coordinates with the radial coordinates truncated to r, s <= 1 - eps
// (n = 3) or v, s <= 1 - eps (n = 4 with the first row of off-diagonal
// couplings switched off). The integrand is weight(rho) * jacobian, so the
// estimates grow without bound as eps -> 0 for the maximal family.
//
// The n = 4 integral additionally diverges at the corners of the diagonal
// simplex no matter the cutoff; estimates there are reported as-is and
// carry no convergence claim.
IntegralEstimate truncated_full_integral(VolumeElementKind metric, int n,
                                         double epsilon, std::uint64_t samples,
                                         std::uint64_t seed,
                                         SamplingMode mode =
                                             SamplingMode::importance);

// Same integral with the two radial cutoffs controlled separately
// (n = 3 only); used to study the order of the two limits.
IntegralEstimate truncated_full_integral_rs(VolumeElementKind metric,
                                            double eps_r, double eps_s,
                                            std::uint64_t samples,
                                            std::uint64_t seed);

// Which marginal the limiting-ratio construction targets: the joint density
// of the two free diagonal entries, or the six-variable density over
// (a, b, nu, theta1, theta2, theta3).
enum class MarginalTarget { bivariate_ab, six_dim };

// How the double limit r, s -> 1 is approached: both cutoffs following the
// schedule together, or one cutoff pushed ahead of the other to emulate
// taking that limit first.
enum class LimitOrder { simultaneous, r_first, s_first };

struct MarginalEvalPoint {
  double a = 0.0, b = 0.0;
  // Only read for the six_dim target. The limit does not depend on nu or
  // theta3 (the closed form is flat in both); they are kept so finite-eps
  // behaviour can be probed.
  double theta1 = 1.5707963267948966, theta2 = 1.5707963267948966;
  double nu = 0.0, theta3 = 0.0;
};

struct LimitingRatioEstimate {
  MarginalEvalPoint point;
  double density = 0.0;    // extrapolated eps -> 0 value
  double std_error = 0.0;  // propagated through the extrapolation
  std::vector<double> epsilons;
  std::vector<double> ratios;
  std::vector<double> ratio_errors;
  bool monotone = true;
  std::string warning;  // empty when the ratio sequence behaves
};

// Ratio of the partial integral (all coordinates but the ones fixed at the
// eval point, truncated at each schedule eps) to the full truncated
// integral, extrapolated to eps = 0 by a quadratic in sqrt(2 eps - eps^2)
// through the last three schedule points; the truncation boundary layer
// enters the ratio through sqrt(1 - S^2), so that is the fit variable.
// Targets the maximal-metric 3x3 volume element.
std::vector<LimitingRatioEstimate> limiting_ratio_marginal(
    MarginalTarget target, const std::vector<MarginalEvalPoint>& eval_points,
    const CutoffSchedule& schedule, std::uint64_t samples, std::uint64_t seed,
    LimitOrder order = LimitOrder::simultaneous);

// What divergence_probe integrates:
//   full            the truncated full integral itself
//   bounded_control the same integrand cut off at r, s <= min(1-eps, 1/2),
//                   which stops growing once 1-eps passes 1/2
//   simplex_factor  the diagonal-simplex factor
//                   a^(-5/2) b^(-3/2) c^(-3/2) d^(-1/2) over the simplex
//                   shrunk by eps away from its corners (n = 4 only)
enum class ProbeVariant { full, bounded_control, simplex_factor };

struct DivergenceReport {
  std::vector<double> epsilons;
  std::vector<IntegralEstimate> estimates;
  double growth_exponent = 0.0;  // slope of log(value) vs log(1/eps)
  double exponent_std_error = 0.0;
  bool divergent = false;  // exponent > 2 * exponent_std_error
};

DivergenceReport divergence_probe(VolumeElementKind metric, int n,
                                  const CutoffSchedule& schedule,
                                  std::uint64_t samples, std::uint64_t seed,
                                  ProbeVariant variant = ProbeVariant::full);

}  // namespace mmvol

#endif  // MMVOL_QUADRATURE_HPP
