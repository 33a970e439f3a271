#include "mmvol/thermo.hpp"

#include <cmath>
#include <cstdint>
#include <utility>

#include "mmvol/constants.hpp"
#include "mmvol/errors.hpp"
#include "mmvol/parallel.hpp"
#include "mmvol/quadrature.hpp"
#include "mmvol/special_functions.hpp"

namespace mmvol {

namespace {

constexpr double kSqrt3 = 1.7320508075688772935;

// ---------------------------------------------------------------------------
// diag(1, 1, -2)/sqrt(3) under the univariate marginal. Everything reduces
// to I(k) = int_0^1 (1-a) sqrt(a) e^{k a} da with k = sqrt(3) beta and its
// k-derivative (shift = 1 below): Q = (15/4) e^{-k/3} I(k) and the Gibbs
// mean of a is I'(k)/I(k).

double su3_moment_series(double k, int shift) {
  const double off = 2.0 * shift;
  double pw = 1.0;  // k^m / m!
  double sum = 4.0 / ((3.0 + off) * (5.0 + off));
  for (int m = 1; m < 80; ++m) {
    pw *= k / m;
    const double term = pw * 4.0 / ((2.0 * m + 3.0 + off) * (2.0 * m + 5.0 + off));
    sum += term;
    if (std::abs(term) < 1e-18 * std::abs(sum)) break;
  }
  return sum;
}

struct SU3Moments {
  double I, Iprime;
};

// J_n = int_0^1 a^{n-1/2} e^{k a} da obeys J_n = (2 e^k - (2n-1) J_{n-1})
// / (2k), seeded by the error-function value of J_0. I = J_1 - J_2 and
// I' = J_2 - J_3. The recurrence loses about one digit per step at |k| ~ 1,
// so the series takes over there.
SU3Moments su3_moments(double k) {
  if (std::abs(k) <= 1.0)
    return {su3_moment_series(k, 0), su3_moment_series(k, 1)};
  const double rt = std::sqrt(std::abs(k));
  const double j0 = k > 0.0 ? kSqrtPi * erfi(rt) / rt
                            : kSqrtPi * std::erf(rt) / rt;
  const double ek = std::exp(k);
  const double j1 = (2.0 * ek - j0) / (2.0 * k);
  const double j2 = (2.0 * ek - 3.0 * j1) / (2.0 * k);
  const double j3 = (2.0 * ek - 5.0 * j2) / (2.0 * k);
  return {j1 - j2, j2 - j3};
}

// ---------------------------------------------------------------------------

std::vector<std::pair<double, double>> unit_box1() { return {{0.0, 1.0}}; }

// diag(1, -1, 0) under the bivariate marginal: shared integral for Q and
// the Gibbs numerator. The e^{-|beta|} shift keeps the integrand <= the
// density itself, so one absolute tolerance serves every beta.
double lambda3_integral(double beta, bool weighted) {
  const double shift = std::abs(beta);
  NdFn f = [beta, shift, weighted](const std::vector<double>& x) {
    const double a = x[0], b = x[1];
    const double c = 1.0 - a - b;
    const double dens =
        15.0 * (1.0 - a) * std::sqrt(a) / (4.0 * kPi * std::sqrt(b * c));
    const double e = b - c;
    const double w = std::exp(-beta * e - shift);
    return weighted ? dens * e * w : dens * w;
  };
  std::vector<BoundsFn> bounds;
  bounds.emplace_back([](const std::vector<double>&) {
    return std::pair<double, double>(0.0, 1.0);
  });
  bounds.emplace_back([](const std::vector<double>& xs) {
    return std::pair<double, double>(0.0, 1.0 - xs[0]);
  });
  return nested_quad(f, bounds, 1e-10).value;
}

// Commuting slice of the {-1, 0, 1} generator. After the inner eigenvalue
// integral is done in closed form the exponential prefactors cancel and
// Q(beta) = pi int_0^1 I_0(beta (1 - x^2)) dx; the scaled Bessel form below
// stays O(1) for every beta. weighted = true integrates the extra
// (1 - x^2) I_1 factor of the Gibbs numerator.
double lambda1_integral(double beta_abs, bool weighted) {
  NdFn f = [beta_abs, weighted](const std::vector<double>& x) {
    const double u = (1.0 - x[0]) * (1.0 + x[0]);
    const double damp = std::exp(-beta_abs * x[0] * x[0]);
    if (weighted) return damp * u * bessel_i_scaled(1.0, beta_abs * u);
    return damp * bessel_i_scaled(0.0, beta_abs * u);
  };
  return nested_quad(f, unit_box1(), 1e-11).value;
}

// ---------------------------------------------------------------------------
// Commuting slice of the 4x4 chain observable. Mixing weights are
// parameterized as nested squared sines on [0, pi/2]^3, under which the
// (prod lambda_k)^(-1/2) element becomes 8 sin^2(t1) sin(t2) dt. The energy
// is shifted by its extremum so the exponential never exceeds 1.

struct Strong4Integrand {
  double beta, e0;
  double phi, phihat;

  double operator()(const std::vector<double>& t, bool weighted) const {
    const double c1 = std::cos(t[0]), s1 = std::sin(t[0]);
    const double c2 = std::cos(t[1]), s2 = std::sin(t[1]);
    const double c3 = std::cos(t[2]), s3 = std::sin(t[2]);
    const double tail = -phihat * c3 * c3 - phi * s3 * s3;
    const double energy =
        phi * c1 * c1 + s1 * s1 * (phihat * c2 * c2 + s2 * s2 * tail);
    const double g = 8.0 * s1 * s1 * s2 * std::exp(-beta * (energy - e0));
    return weighted ? g * (energy - e0) : g;
  }
};

Strong4Integrand strong4_integrand(double beta) {
  const double rt5 = std::sqrt(5.0);
  Strong4Integrand s;
  s.beta = beta;
  s.phi = 0.5 * (1.0 + rt5);
  s.phihat = 0.5 * (rt5 - 1.0);
  s.e0 = beta > 0.0 ? -s.phi : (beta < 0.0 ? s.phi : 0.0);
  return s;
}

std::vector<std::pair<double, double>> strong4_box() {
  return {{0.0, 0.5 * kPi}, {0.0, 0.5 * kPi}, {0.0, 0.5 * kPi}};
}

double strong4_integral(double beta, bool weighted) {
  const Strong4Integrand s = strong4_integrand(beta);
  NdFn f = [s, weighted](const std::vector<double>& t) {
    return s(t, weighted);
  };
  return nested_quad(f, strong4_box(), 1e-9).value;
}

void strong4_mc(double beta, double& q, double& ev) {
  const Strong4Integrand s = strong4_integrand(beta);
  NdFn fq = [s](const std::vector<double>& t) { return s(t, false); };
  NdFn fe = [s](const std::vector<double>& t) { return s(t, true); };
  const std::uint64_t n = std::uint64_t{1} << 21;
  const std::uint64_t seed = 4;  // shared stream correlates the two integrals
  const IntegralEstimate den = mc_integrate(fq, strong4_box(), n, seed);
  const IntegralEstimate num = mc_integrate(fe, strong4_box(), n, seed);
  q = std::exp(-beta * s.e0) * den.value;
  ev = s.e0 + num.value / den.value;
}

}  // namespace

// ---------------------------------------------------------------------------

double q_lambda8(double beta, ThermoMethod method) {
  const double k = kSqrt3 * beta;
  switch (method) {
    case ThermoMethod::closed_form:
      return 3.75 * std::exp(-k / 3.0) * su3_moments(k).I;
    case ThermoMethod::quadrature: {
      // Factor out the peak of e^{-beta E} so a fixed absolute tolerance
      // gives uniform relative accuracy across beta.
      const double log_scale = (beta > 0.0 ? 2.0 * beta : -beta) / kSqrt3;
      NdFn f = [beta, log_scale](const std::vector<double>& x) {
        const double a = x[0];
        const double e = (1.0 - 3.0 * a) / kSqrt3;
        return 3.75 * (1.0 - a) * std::sqrt(a) *
               std::exp(-beta * e - log_scale);
      };
      return std::exp(log_scale) * nested_quad(f, unit_box1(), 1e-12).value;
    }
    case ThermoMethod::mc:
      break;
  }
  throw DomainError("q_lambda8: method must be closed_form or quadrature");
}

double ev_lambda8(double beta) {
  const SU3Moments m = su3_moments(kSqrt3 * beta);
  return (1.0 - 3.0 * m.Iprime / m.I) / kSqrt3;
}

double q_lambda3(double beta) {
  return std::exp(std::abs(beta)) * lambda3_integral(beta, false);
}

double ev_lambda3(double beta) {
  return lambda3_integral(beta, true) / lambda3_integral(beta, false);
}

double q_lambda1_strong(double beta) {
  const double ab = std::abs(beta);
  return kPi * std::exp(ab) * lambda1_integral(ab, false);
}

double ev_lambda1(double beta) {
  const double ab = std::abs(beta);
  const double r = -lambda1_integral(ab, true) / lambda1_integral(ab, false);
  return beta >= 0.0 ? r : -r;
}

double diff_vs_langevin(double beta) {
  return langevin_neg(beta) - ev_lambda1(beta);
}

double q_strong4(double beta) {
  const double e0 = strong4_integrand(beta).e0;
  return std::exp(-beta * e0) * strong4_integral(beta, false);
}

double ev_strong4(double beta) {
  const double e0 = strong4_integrand(beta).e0;
  return e0 + strong4_integral(beta, true) / strong4_integral(beta, false);
}

std::array<double, 4> four4_observable_eigenvalues() {
  const double rt5 = std::sqrt(5.0);
  const double phi = 0.5 * (1.0 + rt5);
  const double phihat = 0.5 * (rt5 - 1.0);
  return {-phi, -phihat, phihat, phi};
}

SpinHalfReference spin_half_reference(double beta, MetricFamily metric) {
  SpinHalfReference out;
  const double ab = std::abs(beta);
  const double b2 = beta * beta;
  if (metric == MetricFamily::maximal) {
    out.q = ab < 1e-4 ? 1.0 + b2 / 6.0 + b2 * b2 / 120.0
                      : std::sinh(beta) / beta;
    out.ev = langevin_neg(beta);
  } else {
    if (ab < 1e-4) {
      out.q = 1.0 + b2 / 8.0 + b2 * b2 / 192.0;
      out.ev = -beta / 4.0 + beta * b2 / 96.0;
    } else {
      out.q = 2.0 * bessel_i(1.0, ab) / ab;
      const double r = bessel_i_scaled(2.0, ab) / bessel_i_scaled(1.0, ab);
      out.ev = beta > 0.0 ? -r : r;
    }
  }
  return out;
}

ThermoCurve thermo_curve(ThermoObservable observable,
                         const std::vector<double>& beta_grid,
                         ThermoMethod method) {
  if (beta_grid.empty()) throw DomainError("thermo_curve: empty beta grid");
  for (std::size_t i = 0; i + 1 < beta_grid.size(); ++i)
    if (!(beta_grid[i] < beta_grid[i + 1]))
      throw DomainError("thermo_curve: beta grid must be strictly increasing");

  using TO = ThermoObservable;
  using TM = ThermoMethod;
  const bool supported =
      (observable == TO::lambda8 &&
       (method == TM::closed_form || method == TM::quadrature)) ||
      ((observable == TO::lambda3 || observable == TO::lambda1_strong) &&
       method == TM::quadrature) ||
      (observable == TO::four_by_four_strong &&
       (method == TM::quadrature || method == TM::mc)) ||
      ((observable == TO::spin_half_maximal ||
        observable == TO::spin_half_minimal) &&
       method == TM::closed_form);
  if (!supported)
    throw DomainError("thermo_curve: method not available for this observable");

  ThermoCurve curve;
  curve.beta_grid = beta_grid;
  curve.method = method;
  curve.observable_id = observable;
  curve.q_values.resize(beta_grid.size());
  curve.expected_values.resize(beta_grid.size());

  auto eval_point = [&](std::size_t i) {
    const double b = beta_grid[i];
    double q = 0.0, ev = 0.0;
    switch (observable) {
      case TO::lambda8:
        q = q_lambda8(b, method);
        ev = ev_lambda8(b);
        break;
      case TO::lambda3:
        q = q_lambda3(b);
        ev = ev_lambda3(b);
        break;
      case TO::lambda1_strong:
        q = q_lambda1_strong(b);
        ev = ev_lambda1(b);
        break;
      case TO::four_by_four_strong:
        if (method == TM::quadrature) {
          q = q_strong4(b);
          ev = ev_strong4(b);
        } else {
          strong4_mc(b, q, ev);
        }
        break;
      case TO::spin_half_maximal: {
        const SpinHalfReference r = spin_half_reference(b, MetricFamily::maximal);
        q = r.q;
        ev = r.ev;
        break;
      }
      case TO::spin_half_minimal: {
        const SpinHalfReference r = spin_half_reference(b, MetricFamily::minimal);
        q = r.q;
        ev = r.ev;
        break;
      }
    }
    curve.q_values[i] = q;
    curve.expected_values[i] = ev;
  };

  if (method == TM::mc) {
    // mc parallelizes inside each estimate; keep the grid loop serial.
    for (std::size_t i = 0; i < beta_grid.size(); ++i) eval_point(i);
  } else {
    parallel_for_blocks(beta_grid.size(),
                        [&](std::uint64_t i) { eval_point(static_cast<std::size_t>(i)); });
  }
  return curve;
}

}  // namespace mmvol
