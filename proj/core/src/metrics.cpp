#include "mmvol/metrics.hpp"

#include <cmath>

#include "mmvol/errors.hpp"

namespace mmvol {

namespace {

double det3x3(const CMatrix& m, int i, int j, int k) {
  const Cmplx d = m(i, i) * (m(j, j) * m(k, k) - m(j, k) * m(k, j)) -
                  m(i, j) * (m(j, i) * m(k, k) - m(j, k) * m(k, i)) +
                  m(i, k) * (m(j, i) * m(k, j) - m(j, j) * m(k, i));
  return d.real();
}

}  // namespace

MinorSums minor_sums(const DensityMatrix& rho) { return minor_sums(rho.matrix()); }

MinorSums minor_sums(const CMatrix& m) {
  const int n = m.dim();
  MinorSums ms;
  ms.n = n;
  for (int i = 0; i < n; ++i) ms.w1 += m(i, i).real();
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      ms.w2 += m(i, i).real() * m(j, j).real() - std::norm(m(i, j));
  if (n >= 3) {
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j)
        for (int k = j + 1; k < n; ++k) ms.w3 += det3x3(m, i, j, k);
  }
  ms.det = m.det().real();
  return ms;
}

double pair_sum_factor(const MinorSums& ms) {
  switch (ms.n) {
    case 2:
      return 1.0;
    case 3:
      return ms.w2 - ms.det;
    case 4:
      return ms.w2 * ms.w3 - ms.w3 * ms.w3 - ms.det;
    default:
      throw DomainError("pair_sum_factor: dimension must be 2, 3 or 4");
  }
}

double pair_sum_product(const std::vector<double>& eigenvalues) {
  const size_t n = eigenvalues.size();
  double prod = 1.0;
  for (size_t i = 0; i < n; ++i)
    for (size_t j = i + 1; j < n; ++j)
      prod *= eigenvalues[i] + eigenvalues[j];
  return prod;
}

double volume_weight_from_minors(const MinorSums& ms, MetricFamily metric) {
  // det < 1e-12 implies an eigenvalue below the 1e-12 boundary floor (the
  // remaining eigenvalues multiply to less than one), so this route refuses
  // the same states the eigenvalue route does instead of returning huge
  // weights silently.
  if (ms.det < 1e-12)
    throw SingularStateError(
        "volume weight: determinant below the 1e-12 boundary floor");
  const double pf = pair_sum_factor(ms);
  if (metric == MetricFamily::minimal) {
    if (pf <= 0.0)
      throw SingularStateError("volume weight: pair sum factor vanishes");
    return 1.0 / (std::sqrt(ms.det) * pf);
  }
  return pf * std::pow(ms.det, 0.5 - ms.n);
}

double volume_weight_from_eigenvalues(const std::vector<double>& eigenvalues,
                                      MetricFamily metric) {
  const size_t n = eigenvalues.size();
  if (n < 2 || n > 4)
    throw DomainError("volume weight: dimension must be 2, 3 or 4");
  for (double p : eigenvalues)
    if (p < 1e-12)
      throw SingularStateError(
          "volume weight: eigenvalue below the 1e-12 floor");
  double prod = 1.0;
  for (size_t i = 0; i < n; ++i) {
    for (size_t j = 0; j < n; ++j) {
      const double sum = eigenvalues[i] + eigenvalues[j];
      if (metric == MetricFamily::minimal)
        prod *= sum;
      else
        prod *= 2.0 * eigenvalues[i] * eigenvalues[j] / sum;
    }
  }
  return 1.0 / std::sqrt(prod);
}

double volume_weight(const DensityMatrix& rho, VolumeElementKind kind) {
  if (kind.route == WeightRoute::closed_form)
    return volume_weight_from_minors(minor_sums(rho.matrix()), kind.metric);
  return volume_weight_from_eigenvalues(hermitian_eigenvalues(rho.matrix()),
                                        kind.metric);
}

}  // namespace mmvol
