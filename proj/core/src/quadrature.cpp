#include "mmvol/quadrature.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>

#include "mmvol/constants.hpp"
#include "mmvol/errors.hpp"
#include "mmvol/parallel.hpp"
#include "mmvol/rng.hpp"
#include "mmvol/states.hpp"

namespace mmvol {

namespace {

constexpr double kPi2 = kPi * kPi;
constexpr double kPi4 = kPi2 * kPi2;
constexpr double kPi5 = kPi4 * kPi;
constexpr double kPi8 = kPi4 * kPi4;

inline void neumaier_add(double& sum, double& comp, double v) {
  const double t = sum + v;
  if (std::abs(sum) >= std::abs(v))
    comp += (sum - t) + v;
  else
    comp += (v - t) + sum;
  sum = t;
}

// Blocked, worker-count-independent MC mean of draw(rng) over n sample
// streams. Per-block partial sums are written into slots indexed by block
// number and reduced sequentially, so the reduction order never depends on
// scheduling.
template <class DrawFn>
IntegralEstimate run_mc(std::uint64_t n, std::uint64_t seed, DrawFn&& draw) {
  constexpr std::uint64_t kBlock = 65536;
  const std::uint64_t n_blocks = (n + kBlock - 1) / kBlock;
  std::vector<double> sums(n_blocks), sq_sums(n_blocks);

  parallel_for_blocks(n_blocks, [&](std::uint64_t blk) {
    const std::uint64_t lo = blk * kBlock;
    const std::uint64_t hi = std::min(n, lo + kBlock);
    double s = 0.0, sc = 0.0, q = 0.0, qc = 0.0;
    for (std::uint64_t i = lo; i < hi; ++i) {
      SplitRng rng = SplitRng::for_sample(seed, i);
      const double v = draw(rng);
      neumaier_add(s, sc, v);
      neumaier_add(q, qc, v * v);
    }
    sums[blk] = s + sc;
    sq_sums[blk] = q + qc;
  });

  double s = 0.0, sc = 0.0, q = 0.0, qc = 0.0;
  for (std::uint64_t blk = 0; blk < n_blocks; ++blk) {
    neumaier_add(s, sc, sums[blk]);
    neumaier_add(q, qc, sq_sums[blk]);
  }
  const double total = s + sc;
  const double total_sq = q + qc;
  const double nf = static_cast<double>(n);
  const double mean = total / nf;
  double var = (total_sq - nf * mean * mean) / (nf - 1.0);
  if (var < 0.0) var = 0.0;

  IntegralEstimate est;
  est.value = mean;
  est.std_error = std::sqrt(var / nf);
  est.n_samples = n;
  est.seed = seed;
  est.method = IntegralMethod::mc;
  return est;
}

// ---------------------------------------------------------------------------
// Gauss-Kronrod 15 with a global worst-segment refinement loop.

// Nodes and weights of the 7-15 pair; odd indices and the centre are the
// embedded Gauss-7 nodes.
constexpr double kXgk[7] = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144838258730, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245};
constexpr double kWgk[8] = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr double kWg[4] = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Segment {
  double lo, hi;
  double val, err;
};

template <class H>
Segment gk15(const H& h, double lo, double hi) {
  const double mid = 0.5 * (lo + hi);
  const double half = 0.5 * (hi - lo);
  const double fc = h(mid);
  double kron = kWgk[7] * fc;
  double gauss = kWg[3] * fc;
  for (int j = 0; j < 7; ++j) {
    const double dx = half * kXgk[j];
    const double f1 = h(mid - dx);
    const double f2 = h(mid + dx);
    kron += kWgk[j] * (f1 + f2);
    if (j % 2 == 1) gauss += kWg[j / 2] * (f1 + f2);
  }
  Segment seg;
  seg.lo = lo;
  seg.hi = hi;
  seg.val = half * kron;
  seg.err = std::abs(half * (kron - gauss));
  return seg;
}

template <class H>
double adaptive_unit(const H& h, double tol, const char* label) {
  constexpr std::size_t kMaxSegments = 2000;
  std::vector<Segment> segs;
  segs.reserve(64);
  segs.push_back(gk15(h, 0.0, 1.0));

  auto total = [&segs] {
    double v = 0.0, vc = 0.0, e = 0.0, ec = 0.0;
    for (const Segment& s : segs) {
      neumaier_add(v, vc, s.val);
      neumaier_add(e, ec, s.err);
    }
    return std::pair<double, double>(v + vc, e + ec);
  };

  for (;;) {
    auto [val, err] = total();
    if (err <= tol) return val;
    if (segs.size() >= kMaxSegments)
      throw AccuracyError(std::string(label) +
                              ": refinement budget exhausted before reaching "
                              "the requested tolerance",
                          val, err);
    std::size_t worst = 0;
    for (std::size_t i = 1; i < segs.size(); ++i)
      if (segs[i].err > segs[worst].err) worst = i;
    const Segment seg = segs[worst];
    if (seg.hi - seg.lo < 1e-14)
      throw AccuracyError(std::string(label) +
                              ": segment underflow while refining a "
                              "non-integrable feature",
                          val, err);
    const double mid = 0.5 * (seg.lo + seg.hi);
    segs[worst] = gk15(h, seg.lo, mid);
    segs.push_back(gk15(h, mid, seg.hi));
  }
}

// One level of nesting: integrate F over (lo, hi) through the substitution
// x = lo + (hi-lo) sin^2(pi t/2), which is smooth, fixes the endpoints and
// turns x^(-1/2)-type endpoint behaviour into a bounded integrand.
template <class F>
double integrate_mapped(const F& f, double lo, double hi, double tol,
                        const char* label) {
  if (hi == lo) return 0.0;
  const double span = hi - lo;
  const double x_min = std::nextafter(lo, hi);
  const double x_max = std::nextafter(hi, lo);
  auto h = [&](double t) {
    const double sn = std::sin(0.5 * kPi * t);
    double x = lo + span * sn * sn;
    x = std::min(std::max(x, x_min), x_max);
    const double w = span * 0.5 * kPi * std::sin(kPi * t);
    return f(x) * w;
  };
  return adaptive_unit(h, tol, label);
}

// ---------------------------------------------------------------------------
// Samplers for the truncated integrals.

// Inverse-CDF sampler for density proportional to x (1-x^2)^(-k/2) on
// (0, X) with X = 1 - eps. Returns both x and 1-x^2; the latter comes
// straight from the inverse formula, so it stays accurate when x is close
// to 1.
struct EdgeSampler {
  double norm = 0.0;  // normalizing integral N
  double pw = 0.0;    // k - 2

  static EdgeSampler make(double eps, int k) {
    EdgeSampler e;
    e.pw = static_cast<double>(k - 2);
    const double one_m = eps * (2.0 - eps);  // 1 - (1-eps)^2
    e.norm = (std::pow(one_m, -0.5 * e.pw) - 1.0) / e.pw;
    return e;
  }

  struct Draw {
    double x, one_minus_x2;
  };

  Draw draw(double u) const {
    const double y = 1.0 + pw * norm * u;
    const double t = std::pow(y, -2.0 / pw);
    return {std::sqrt(1.0 - t), t};
  }
};

// (a, b, c) with joint density (abc)^(-1/2) / (2 pi) on the open simplex.
inline void dirichlet3_half(SplitRng& rng, double& a, double& b, double& c) {
  const double u = rng.next_u01();
  a = u * u;
  const double sn = std::sin(0.5 * kPi * rng.next_u01());
  b = (1.0 - a) * sn * sn;
  c = 1.0 - a - b;
}

// (a, b, c, d) with joint density (abcd)^(-1/2) / pi^2: four squared
// standard normals, normalized.
inline void dirichlet4_half(SplitRng& rng, double& a, double& b, double& c,
                            double& d) {
  const double u1 = rng.next_u01();
  const double u2 = rng.next_u01();
  const double u3 = rng.next_u01();
  const double u4 = rng.next_u01();
  const double r1 = std::sqrt(-2.0 * std::log(u1));
  const double r2 = std::sqrt(-2.0 * std::log(u3));
  const double z1 = r1 * std::cos(kTwoPi * u2);
  const double z2 = r1 * std::sin(kTwoPi * u2);
  const double z3 = r2 * std::cos(kTwoPi * u4);
  const double z4 = r2 * std::sin(kTwoPi * u4);
  const double q1 = z1 * z1, q2 = z2 * z2, q3 = z3 * z3, q4 = z4 * z4;
  const double tot = q1 + q2 + q3 + q4;
  a = q1 / tot;
  b = q2 / tot;
  c = q3 / tot;
  d = q4 / tot;
}

[[noreturn]] void throw_nonfinite(const char* what,
                                  std::vector<double> point) {
  throw IntegrandError(std::string(what) +
                           ": integrand evaluated to a non-finite value",
                       std::move(point));
}

// ---------------------------------------------------------------------------
// n = 3 pipelines. Shorthand used throughout:
//   pf  = w2 - det  (pair-sum factor)
//   w2  = ab (1-|H|^2) + ac (1-|G|^2) + bc (1-s^2)
//   det = abc (1-r^2)(1-s^2)
// Full maximal integrand (weight times jacobian):
//   (abc)^(-1/2) pf r^3 s (1-r^2)^(-5/2) (1-s^2)^(-3/2) sin^2 t1 sin t2
// Full minimal integrand:
//   (abc)^(3/2) pf^(-1) r^3 s (1-r^2)^(-1/2) (1-s^2)^(1/2) sin^2 t1 sin t2

struct N3Parts {
  double pf;        // w2 - det
  double abc;
  double ang;       // sin^2(theta1) sin(theta2)
};

inline N3Parts n3_parts(double a, double b, double c, double s2m, double s,
                        double nu, double r, double r2m, double th1,
                        double th2, double th3) {
  const auto gh = detail::gh_squares3(s, nu, r, th1, th2, th3);
  const double w2 =
      a * b * (1.0 - gh.h2) + a * c * (1.0 - gh.g2) + b * c * s2m;
  const double det = a * b * c * r2m * s2m;
  const double s1 = std::sin(th1), st2 = std::sin(th2);
  return {w2 - det, a * b * c, s1 * s1 * st2};
}

// Importance draw of the full n = 3 integral, both cutoffs explicit.
// The samplers absorb the radial singular factors, so the returned weight
// is bounded on the truncated box.
struct N3FullImportance {
  MetricFamily metric;
  EdgeSampler er;  // r on (0, 1-eps_r), density r (1-r^2)^(-5/2)
  EdgeSampler es;  // s on (0, 1-eps_s), density s (1-s^2)^(-3/2)

  double operator()(SplitRng& rng) const {
    double a, b, c;
    dirichlet3_half(rng, a, b, c);
    const auto s = es.draw(rng.next_u01());
    const double nu = kTwoPi * rng.next_u01();
    const auto r = er.draw(rng.next_u01());
    const double th1 = kPi * rng.next_u01();
    const double th2 = kPi * rng.next_u01();
    const double th3 = kTwoPi * rng.next_u01();
    const N3Parts p = n3_parts(a, b, c, s.one_minus_x2, s.x, nu, r.x,
                               r.one_minus_x2, th1, th2, th3);
    const double scale = 8.0 * kPi5 * er.norm * es.norm;
    double v;
    if (metric == MetricFamily::maximal) {
      v = scale * p.pf * r.x * r.x * p.ang;
    } else {
      v = scale * p.abc * p.abc / p.pf * r.x * r.x * r.one_minus_x2 *
          r.one_minus_x2 * s.one_minus_x2 * s.one_minus_x2 * p.ang;
    }
    if (!std::isfinite(v))
      throw_nonfinite("truncated_full_integral",
                      {a, b, s.x, nu, r.x, th1, th2, th3});
    return v;
  }
};

// Plain draw over the uniform coordinate box, kept as an importance-free
// cross-check. b is drawn as u (1-a), which contributes a (1-a) factor.
struct N3FullPlain {
  MetricFamily metric;
  double R, S;

  double operator()(SplitRng& rng) const {
    const double a = rng.next_u01();
    const double b = (1.0 - a) * rng.next_u01();
    const double c = 1.0 - a - b;
    const double s = S * rng.next_u01();
    const double nu = kTwoPi * rng.next_u01();
    const double r = R * rng.next_u01();
    const double th1 = kPi * rng.next_u01();
    const double th2 = kPi * rng.next_u01();
    const double th3 = kTwoPi * rng.next_u01();
    const double s2m = (1.0 - s) * (1.0 + s);
    const double r2m = (1.0 - r) * (1.0 + r);
    const N3Parts p = n3_parts(a, b, c, s2m, s, nu, r, r2m, th1, th2, th3);
    const double box = 4.0 * kPi4 * S * R * (1.0 - a);
    double v;
    if (metric == MetricFamily::maximal) {
      v = box * p.pf * r * r * r * s * p.ang /
          (std::sqrt(p.abc) * r2m * r2m * std::sqrt(r2m) * s2m *
           std::sqrt(s2m));
    } else {
      v = box * p.abc * std::sqrt(p.abc) / p.pf * r * r * r * s *
          std::sqrt(s2m / r2m) * p.ang;
    }
    if (!std::isfinite(v))
      throw_nonfinite("truncated_full_integral",
                      {a, b, s, nu, r, th1, th2, th3});
    return v;
  }
};

// Numerator draws for the limiting ratio: the eval point stays fixed and
// only the coordinates being integrated out are drawn.

struct N3NumSixDim {  // integrates over (r, s) at a fixed 6-dim point
  MarginalEvalPoint pt;
  double inv_sqrt_abc, ang;
  EdgeSampler er, es;

  double operator()(SplitRng& rng) const {
    const auto s = es.draw(rng.next_u01());
    const auto r = er.draw(rng.next_u01());
    const double c = 1.0 - pt.a - pt.b;
    const N3Parts p =
        n3_parts(pt.a, pt.b, c, s.one_minus_x2, s.x, pt.nu, r.x,
                 r.one_minus_x2, pt.theta1, pt.theta2, pt.theta3);
    const double v =
        inv_sqrt_abc * p.pf * r.x * r.x * er.norm * es.norm * ang;
    if (!std::isfinite(v))
      throw_nonfinite("limiting_ratio_marginal", {s.x, r.x});
    return v;
  }
};

struct N3NumBivariate {  // integrates over (s, nu, r, t1, t2, t3)
  double a, b;
  double inv_sqrt_abc;
  EdgeSampler er, es;

  double operator()(SplitRng& rng) const {
    const auto s = es.draw(rng.next_u01());
    const double nu = kTwoPi * rng.next_u01();
    const auto r = er.draw(rng.next_u01());
    const double th1 = kPi * rng.next_u01();
    const double th2 = kPi * rng.next_u01();
    const double th3 = kTwoPi * rng.next_u01();
    const double c = 1.0 - a - b;
    const N3Parts p = n3_parts(a, b, c, s.one_minus_x2, s.x, nu, r.x,
                               r.one_minus_x2, th1, th2, th3);
    const double v = 4.0 * kPi4 * inv_sqrt_abc * p.pf * r.x * r.x * er.norm *
                     es.norm * p.ang;
    if (!std::isfinite(v))
      throw_nonfinite("limiting_ratio_marginal",
                      {s.x, nu, r.x, th1, th2, th3});
    return v;
  }
};

// ---------------------------------------------------------------------------
// n = 4 pipeline (g = h = 0 slice). Shorthand:
//   w2 = ab + ac + ad (1-|O|^2) + bc (1-s^2) + bd (1-|P|^2) + cd (1-|Q|^2)
//   w3 = abc (1-s^2) + abd (1-|O|^2-|P|^2) + acd (1-|O|^2-|Q|^2)
//        + bcd (1-s^2-|P|^2-|Q|^2+2 Re(F P Q))
//   det = abcd (1-s^2)(1-v^2)
//   W4  = w2 w3 - w3^2 - det
// Full maximal integrand:
//   a^(-5/2) b^(-3/2) c^(-3/2) d^(-1/2) W4 s (1-s^2)^(-5/2) v^5
//   (1-v^2)^(-7/2) sin^4 x1 sin^3 x2 sin^2 x3 sin x4
// Full minimal integrand:
//   a^(1/2) b^(3/2) c^(3/2) d^(5/2) W4^(-1) s (1-s^2)^(1/2) v^5
//   (1-v^2)^(-1/2) (same angular factor)

struct N4Parts {
  double W4, ang;
};

inline N4Parts n4_parts(double a, double b, double c, double d, double s2m,
                        double v2m, double s, double nu, double v, double x1,
                        double x2, double x3, double x4, double x5) {
  const auto o = detail::offdiag4_parts(s, nu, v, x1, x2, x3, x4, x5);
  const double o2 = o.OR * o.OR + o.OI * o.OI;
  const double p2 = o.PR * o.PR + o.PI * o.PI;
  const double q2 = o.QR * o.QR + o.QI * o.QI;
  const double fr = s * std::sin(nu), fi = s * std::cos(nu);
  const double re_pq = o.PR * o.QR - o.PI * o.QI;
  const double im_pq = o.PR * o.QI + o.PI * o.QR;
  const double re_fpq = fr * re_pq - fi * im_pq;

  const double w2 = a * b + a * c + a * d * (1.0 - o2) + b * c * s2m +
                    b * d * (1.0 - p2) + c * d * (1.0 - q2);
  const double w3 = a * b * c * s2m + a * b * d * (1.0 - o2 - p2) +
                    a * c * d * (1.0 - o2 - q2) +
                    b * c * d * (s2m - p2 - q2 + 2.0 * re_fpq);
  const double det = a * b * c * d * s2m * v2m;
  const double W4 = w2 * w3 - w3 * w3 - det;

  const double s1 = std::sin(x1), s2 = std::sin(x2), s3 = std::sin(x3),
               s4 = std::sin(x4);
  const double s1sq = s1 * s1, s2sq = s2 * s2;
  return {W4, s1sq * s1sq * s2sq * s2 * s3 * s3 * s4};
}

struct N4FullImportance {
  MetricFamily metric;
  EdgeSampler es;  // s, density s (1-s^2)^(-5/2)
  EdgeSampler ev;  // v, density v (1-v^2)^(-7/2)

  double operator()(SplitRng& rng) const {
    double a, b, c, d;
    dirichlet4_half(rng, a, b, c, d);
    const auto s = es.draw(rng.next_u01());
    const double nu = kTwoPi * rng.next_u01();
    const auto v = ev.draw(rng.next_u01());
    const double x1 = kPi * rng.next_u01();
    const double x2 = kPi * rng.next_u01();
    const double x3 = kPi * rng.next_u01();
    const double x4 = kPi * rng.next_u01();
    const double x5 = kTwoPi * rng.next_u01();
    const N4Parts p = n4_parts(a, b, c, d, s.one_minus_x2, v.one_minus_x2,
                               s.x, nu, v.x, x1, x2, x3, x4, x5);
    const double v4 = v.x * v.x * v.x * v.x;
    const double scale = 4.0 * kPi8 * es.norm * ev.norm;
    double val;
    if (metric == MetricFamily::maximal) {
      val = scale * p.W4 * v4 * p.ang / (a * a * b * c);
    } else {
      const double s2m = s.one_minus_x2, v2m = v.one_minus_x2;
      val = scale * a * b * b * c * c * d * d * d / p.W4 * s2m * s2m * s2m *
            v4 * v2m * v2m * v2m * p.ang;
    }
    if (!std::isfinite(val))
      throw_nonfinite("truncated_full_integral",
                      {a, b, c, s.x, nu, v.x, x1, x2, x3, x4, x5});
    return val;
  }
};

struct N4FullPlain {
  MetricFamily metric;
  double S, V;

  double operator()(SplitRng& rng) const {
    const double a = rng.next_u01();
    const double b = (1.0 - a) * rng.next_u01();
    const double c = (1.0 - a - b) * rng.next_u01();
    const double d = 1.0 - a - b - c;
    const double s = S * rng.next_u01();
    const double nu = kTwoPi * rng.next_u01();
    const double v = V * rng.next_u01();
    const double x1 = kPi * rng.next_u01();
    const double x2 = kPi * rng.next_u01();
    const double x3 = kPi * rng.next_u01();
    const double x4 = kPi * rng.next_u01();
    const double x5 = kTwoPi * rng.next_u01();
    const double s2m = (1.0 - s) * (1.0 + s);
    const double v2m = (1.0 - v) * (1.0 + v);
    const N4Parts p =
        n4_parts(a, b, c, d, s2m, v2m, s, nu, v, x1, x2, x3, x4, x5);
    const double box =
        4.0 * kPi2 * kPi4 * S * V * (1.0 - a) * (1.0 - a - b);
    const double v5 = v * v * v * v * v;
    double val;
    if (metric == MetricFamily::maximal) {
      val = box * p.W4 * s * v5 * p.ang /
            (std::pow(a, 2.5) * std::pow(b, 1.5) * std::pow(c, 1.5) *
             std::sqrt(d) * std::pow(s2m, 2.5) * std::pow(v2m, 3.5));
    } else {
      val = box * std::sqrt(a) * std::pow(b, 1.5) * std::pow(c, 1.5) *
            std::pow(d, 2.5) / p.W4 * s * std::sqrt(s2m) * v5 /
            std::sqrt(v2m) * p.ang;
    }
    if (!std::isfinite(val))
      throw_nonfinite("truncated_full_integral",
                      {a, b, c, s, nu, v, x1, x2, x3, x4, x5});
    return val;
  }
};

// ---------------------------------------------------------------------------
// Fits.

struct LineFit {
  double intercept, intercept_se;
  double slope, slope_se;
};

// Unweighted least squares, with the parameter variances propagated from
// the per-point standard errors.
LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y,
                 const std::vector<double>& sigma) {
  const std::size_t n = x.size();
  double sx = 0.0, sy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sx += x[i];
    sy += y[i];
  }
  const double mx = sx / static_cast<double>(n);
  const double my = sy / static_cast<double>(n);
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  LineFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  double var_b = 0.0, var_a = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double cb = (x[i] - mx) / sxx;
    const double ca = 1.0 / static_cast<double>(n) - mx * cb;
    var_b += cb * cb * sigma[i] * sigma[i];
    var_a += ca * ca * sigma[i] * sigma[i];
  }
  fit.slope_se = std::sqrt(var_b);
  fit.intercept_se = std::sqrt(var_a);
  return fit;
}

// Weighted least squares for the log-log growth fit.
LineFit fit_line_weighted(const std::vector<double>& x,
                          const std::vector<double>& y,
                          const std::vector<double>& sigma) {
  const std::size_t n = x.size();
  double sw = 0.0, swx = 0.0, swy = 0.0;
  std::vector<double> w(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double s = std::max(sigma[i], 1e-12);
    w[i] = 1.0 / (s * s);
    sw += w[i];
    swx += w[i] * x[i];
    swy += w[i] * y[i];
  }
  const double mx = swx / sw, my = swy / sw;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += w[i] * (x[i] - mx) * (x[i] - mx);
    sxy += w[i] * (x[i] - mx) * (y[i] - my);
  }
  LineFit fit;
  fit.slope = sxy / sxx;
  fit.slope_se = std::sqrt(1.0 / sxx);
  fit.intercept = my - fit.slope * mx;
  fit.intercept_se = std::sqrt(1.0 / sw + mx * mx / sxx);
  return fit;
}

void require(bool ok, const char* what) {
  if (!ok) throw DomainError(what);
}

}  // namespace

// ---------------------------------------------------------------------------

CutoffSchedule CutoffSchedule::standard() {
  return CutoffSchedule{{0.2, 0.1, 0.05, 0.025}};
}

void CutoffSchedule::validate(std::size_t min_length) const {
  if (epsilons.size() < min_length)
    throw DomainError("cutoff schedule: too few epsilons for this operation");
  double prev = 1.0;
  for (double e : epsilons) {
    if (!(e > 0.0 && e < 1.0))
      throw DomainError("cutoff schedule: epsilons must lie in (0, 1)");
    if (!(e < prev))
      throw DomainError("cutoff schedule: epsilons must strictly decrease");
    prev = e;
  }
}

IntegralEstimate mc_integrate(const NdFn& f,
                              const std::vector<std::pair<double, double>>& box,
                              std::uint64_t n, std::uint64_t seed) {
  require(!box.empty(), "mc_integrate: box must have at least one dimension");
  require(n >= 2, "mc_integrate: need at least two samples");
  double volume = 1.0;
  for (const auto& [lo, hi] : box) {
    require(hi > lo, "mc_integrate: box sides must have positive length");
    volume *= hi - lo;
  }
  const std::size_t dims = box.size();
  return run_mc(n, seed, [&](SplitRng& rng) {
    std::vector<double> x(dims);
    for (std::size_t k = 0; k < dims; ++k)
      x[k] = box[k].first + (box[k].second - box[k].first) * rng.next_u01();
    const double v = f(x);
    if (!std::isfinite(v)) throw_nonfinite("mc_integrate", std::move(x));
    return v * volume;
  });
}

IntegralEstimate nested_quad(const NdFn& f, const std::vector<BoundsFn>& bounds,
                             double tol) {
  const std::size_t dims = bounds.size();
  require(dims >= 1 && dims <= 3, "nested_quad: dims must be 1, 2 or 3");
  require(tol > 0.0, "nested_quad: tolerance must be positive");

  // Inner levels run much tighter than the outer one so their errors stay
  // negligible after being swept through the outer rule.
  static constexpr double kShare[3][3] = {
      {1.0, 0.0, 0.0}, {0.5, 0.02, 0.0}, {0.4, 0.02, 8e-4}};

  std::uint64_t evals = 0;
  std::vector<double> xs;
  xs.reserve(3);

  std::function<double(std::size_t)> level = [&](std::size_t k) -> double {
    const auto [lo, hi] = bounds[k](xs);
    require(hi >= lo, "nested_quad: bounds must satisfy hi >= lo");
    const double tol_k = tol * kShare[dims - 1][k];
    auto g = [&](double x) -> double {
      xs.push_back(x);
      double v;
      if (k + 1 == dims) {
        v = f(xs);
        ++evals;
        if (!std::isfinite(v)) throw_nonfinite("nested_quad", xs);
      } else {
        v = level(k + 1);
      }
      xs.pop_back();
      return v;
    };
    return integrate_mapped(g, lo, hi, tol_k, "nested_quad");
  };

  IntegralEstimate est;
  est.value = level(0);
  est.std_error = 0.0;
  est.n_samples = evals;
  est.seed = 0;
  est.method = IntegralMethod::quad;
  return est;
}

IntegralEstimate nested_quad(const NdFn& f,
                             const std::vector<std::pair<double, double>>& box,
                             double tol) {
  std::vector<BoundsFn> bounds;
  bounds.reserve(box.size());
  for (const auto& side : box)
    bounds.push_back(
        [side](const std::vector<double>&) { return side; });
  return nested_quad(f, bounds, tol);
}

IntegralEstimate truncated_full_integral_rs(VolumeElementKind metric,
                                            double eps_r, double eps_s,
                                            std::uint64_t samples,
                                            std::uint64_t seed) {
  require(eps_r > 0.0 && eps_r < 1.0 && eps_s > 0.0 && eps_s < 1.0,
          "truncated_full_integral: cutoffs must lie in (0, 1)");
  require(samples >= 2, "truncated_full_integral: need at least two samples");
  N3FullImportance draw{metric.metric, EdgeSampler::make(eps_r, 5),
                        EdgeSampler::make(eps_s, 3)};
  IntegralEstimate est = run_mc(samples, seed, draw);
  if (metric.route == WeightRoute::eigenvalue) {
    // The two routes differ by an exact constant; rescale rather than
    // diagonalizing per sample.
    const double ratio = metric.metric == MetricFamily::minimal
                             ? std::pow(2.0, 1.5)
                             : 8.0;
    est.value /= ratio;
    est.std_error /= ratio;
  }
  return est;
}

IntegralEstimate truncated_full_integral(VolumeElementKind metric, int n,
                                         double epsilon, std::uint64_t samples,
                                         std::uint64_t seed,
                                         SamplingMode mode) {
  require(n == 3 || n == 4, "truncated_full_integral: n must be 3 or 4");
  require(epsilon > 0.0 && epsilon < 1.0,
          "truncated_full_integral: epsilon must lie in (0, 1)");
  require(samples >= 2, "truncated_full_integral: need at least two samples");

  IntegralEstimate est;
  if (n == 3) {
    if (mode == SamplingMode::importance)
      return truncated_full_integral_rs(metric, epsilon, epsilon, samples,
                                        seed);
    N3FullPlain draw{metric.metric, 1.0 - epsilon, 1.0 - epsilon};
    est = run_mc(samples, seed, draw);
  } else {
    if (mode == SamplingMode::importance) {
      N4FullImportance draw{metric.metric, EdgeSampler::make(epsilon, 5),
                            EdgeSampler::make(epsilon, 7)};
      est = run_mc(samples, seed, draw);
    } else {
      N4FullPlain draw{metric.metric, 1.0 - epsilon, 1.0 - epsilon};
      est = run_mc(samples, seed, draw);
    }
  }
  if (metric.route == WeightRoute::eigenvalue) {
    const double ratio =
        metric.metric == MetricFamily::minimal
            ? std::pow(2.0, 0.5 * n)
            : std::pow(2.0, 0.5 * (n * n - n));
    est.value /= ratio;
    est.std_error /= ratio;
  }
  return est;
}

std::vector<LimitingRatioEstimate> limiting_ratio_marginal(
    MarginalTarget target, const std::vector<MarginalEvalPoint>& eval_points,
    const CutoffSchedule& schedule, std::uint64_t samples, std::uint64_t seed,
    LimitOrder order) {
  schedule.validate(3);
  require(!eval_points.empty(),
          "limiting_ratio_marginal: need at least one eval point");
  require(samples >= 2, "limiting_ratio_marginal: need at least two samples");
  for (const auto& pt : eval_points) {
    require(pt.a > 0.0 && pt.b > 0.0 && pt.a + pt.b < 1.0,
            "limiting_ratio_marginal: eval point outside the open simplex");
    if (target == MarginalTarget::six_dim)
      require(pt.theta1 >= 0.0 && pt.theta1 <= kPi && pt.theta2 >= 0.0 &&
                  pt.theta2 <= kPi,
              "limiting_ratio_marginal: angles outside [0, pi]");
  }

  const std::size_t n_eps = schedule.epsilons.size();
  const std::uint64_t order_tag =
      order == LimitOrder::simultaneous ? 0 : (order == LimitOrder::r_first ? 1 : 2);

  // When one limit is taken first, its cutoff is pushed well past the end
  // of the schedule and held there while the other follows the schedule.
  // The boundary layer of the held variable contributes O(sqrt(eps)) to the
  // ratio, so the push must be deep for the held edge to stop mattering.
  const double pushed = schedule.epsilons.back() / 64.0;

  auto cutoffs_for = [&](double eps) {
    double er = eps, es = eps;
    if (order == LimitOrder::r_first) er = pushed;
    if (order == LimitOrder::s_first) es = pushed;
    return std::pair<double, double>(er, es);
  };

  // Shared denominators, one per schedule point.
  std::vector<IntegralEstimate> dens(n_eps);
  for (std::size_t i = 0; i < n_eps; ++i) {
    const auto [er, es] = cutoffs_for(schedule.epsilons[i]);
    dens[i] = truncated_full_integral_rs(
        {MetricFamily::maximal, WeightRoute::closed_form}, er, es, samples,
        SplitRng::derive(seed, 100 + 200 * order_tag + i));
  }

  std::vector<LimitingRatioEstimate> out;
  out.reserve(eval_points.size());
  for (std::size_t p = 0; p < eval_points.size(); ++p) {
    const MarginalEvalPoint& pt = eval_points[p];
    LimitingRatioEstimate res;
    res.point = pt;
    res.epsilons = schedule.epsilons;
    res.ratios.resize(n_eps);
    res.ratio_errors.resize(n_eps);

    const double c = 1.0 - pt.a - pt.b;
    const double inv_sqrt_abc = 1.0 / std::sqrt(pt.a * pt.b * c);

    for (std::size_t i = 0; i < n_eps; ++i) {
      const auto [er, es] = cutoffs_for(schedule.epsilons[i]);
      const std::uint64_t sub_seed =
          SplitRng::derive(seed, 1000 + 1000 * order_tag + 64 * p + i);
      IntegralEstimate num;
      if (target == MarginalTarget::six_dim) {
        const double s1 = std::sin(pt.theta1), s2 = std::sin(pt.theta2);
        N3NumSixDim draw{pt, inv_sqrt_abc, s1 * s1 * s2,
                         EdgeSampler::make(er, 5), EdgeSampler::make(es, 3)};
        num = run_mc(samples, sub_seed, draw);
      } else {
        N3NumBivariate draw{pt.a, pt.b, inv_sqrt_abc,
                            EdgeSampler::make(er, 5), EdgeSampler::make(es, 3)};
        num = run_mc(samples, sub_seed, draw);
      }
      const double ratio = num.value / dens[i].value;
      const double rel = std::hypot(num.std_error / num.value,
                                    dens[i].std_error / dens[i].value);
      res.ratios[i] = ratio;
      res.ratio_errors[i] = std::abs(ratio) * rel;
    }

    // Monotonicity check across the whole schedule: flag any reversal of
    // the overall trend larger than twice its combined error.
    const double trend =
        res.ratios.back() >= res.ratios.front() ? 1.0 : -1.0;
    for (std::size_t i = 0; i + 1 < n_eps; ++i) {
      const double step = (res.ratios[i + 1] - res.ratios[i]) * trend;
      const double tol =
          2.0 * std::hypot(res.ratio_errors[i], res.ratio_errors[i + 1]);
      if (step < -tol) {
        res.monotone = false;
        res.warning =
            "ratio sequence is non-monotone beyond Monte Carlo noise; the "
            "extrapolation may not have reached its asymptotic regime";
        break;
      }
    }

    // Extrapolate to eps = 0 through the last three schedule points.
    //
    // The cutoff enters the truncated integrals through the edge moments of
    // 1 - s^2 and 1 - r^2.  With R = S = 1 - eps the shallowest of these is
    // the ratio of the two s-moments, which equals sqrt(w) exactly for
    // w = 1 - S^2 = 2 eps - eps^2, so the ratio sequence approaches its
    // limit along a series in sqrt(w).  A quadratic in sqrt(w) interpolated
    // through the last three points captures the sqrt(w) and w terms and
    // leaves an O(w^{3/2}) residual; a fit that is linear in eps instead
    // stalls on the sqrt term and lands visibly short of the closed form.
    const std::size_t k = n_eps - 3;
    std::array<double, 3> xs, ys, ss;
    for (std::size_t i = 0; i < 3; ++i) {
      const double e = res.epsilons[k + i];
      xs[i] = std::sqrt(e * (2.0 - e));
      ys[i] = res.ratios[k + i];
      ss[i] = res.ratio_errors[k + i];
    }
    double value = 0.0, var = 0.0;
    for (std::size_t i = 0; i < 3; ++i) {
      double w = 1.0;
      for (std::size_t j = 0; j < 3; ++j)
        if (j != i) w *= -xs[j] / (xs[i] - xs[j]);
      value += w * ys[i];
      var += w * w * ss[i] * ss[i];
    }
    res.density = value;
    res.std_error = std::sqrt(var);
    out.push_back(std::move(res));
  }
  return out;
}

DivergenceReport divergence_probe(VolumeElementKind metric, int n,
                                  const CutoffSchedule& schedule,
                                  std::uint64_t samples, std::uint64_t seed,
                                  ProbeVariant variant) {
  schedule.validate(4);
  require(n == 3 || n == 4, "divergence_probe: n must be 3 or 4");
  if (variant == ProbeVariant::bounded_control)
    require(n == 3, "divergence_probe: the bounded control probe is the "
                    "n = 3 integrand");
  if (variant == ProbeVariant::simplex_factor)
    require(n == 4, "divergence_probe: the simplex-factor probe is the "
                    "n = 4 diagonal factor");

  DivergenceReport report;
  report.epsilons = schedule.epsilons;
  report.estimates.resize(schedule.epsilons.size());

  for (std::size_t i = 0; i < schedule.epsilons.size(); ++i) {
    const double eps = schedule.epsilons[i];
    const std::uint64_t sub_seed = SplitRng::derive(seed, 7000 + i);
    switch (variant) {
      case ProbeVariant::full:
        report.estimates[i] =
            truncated_full_integral(metric, n, eps, samples, sub_seed);
        break;
      case ProbeVariant::bounded_control: {
        // Same integrand, but the radial cutoffs saturate at 1/2, so past
        // eps = 1/2 every schedule point integrates the same bounded region.
        const double eps_eff = std::max(eps, 0.5);
        report.estimates[i] = truncated_full_integral_rs(
            metric, eps_eff, eps_eff, samples, sub_seed);
        break;
      }
      case ProbeVariant::simplex_factor: {
        require(eps < 0.25,
                "divergence_probe: simplex-factor cutoff must stay below 1/4");
        const double shrink = 1.0 - 4.0 * eps;
        report.estimates[i] = run_mc(samples, sub_seed, [&](SplitRng& rng) {
          // Uniform point of the 3-simplex by stick breaking.
          const double x1 = 1.0 - std::cbrt(1.0 - rng.next_u01());
          const double x2 = (1.0 - x1) * (1.0 - std::sqrt(1.0 - rng.next_u01()));
          const double x3 = (1.0 - x1 - x2) * rng.next_u01();
          const double a = eps + shrink * x1;
          const double b = eps + shrink * x2;
          const double c = eps + shrink * x3;
          const double d = 1.0 - a - b - c;
          const double f = 1.0 / (a * a * std::sqrt(a) * b * std::sqrt(b) *
                                  c * std::sqrt(c) * std::sqrt(d));
          const double v = f * shrink * shrink * shrink / 6.0;
          if (!std::isfinite(v)) throw_nonfinite("divergence_probe", {a, b, c});
          return v;
        });
        break;
      }
    }
  }

  std::vector<double> x, y, sigma;
  for (std::size_t i = 0; i < report.estimates.size(); ++i) {
    const IntegralEstimate& est = report.estimates[i];
    require(est.value > 0.0,
            "divergence_probe: nonpositive estimate cannot enter the log fit");
    x.push_back(std::log(1.0 / report.epsilons[i]));
    y.push_back(std::log(est.value));
    sigma.push_back(est.std_error / est.value);
  }
  const LineFit fit = fit_line_weighted(x, y, sigma);
  report.growth_exponent = fit.slope;
  report.exponent_std_error = fit.slope_se;
  report.divergent = fit.slope > 2.0 * fit.slope_se;
  return report;
}

}  // namespace mmvol
