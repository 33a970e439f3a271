#include "mmvol/complex_matrix.hpp"

#include <algorithm>
#include <cmath>

#include "mmvol/errors.hpp"

namespace mmvol {

Cmplx CMatrix::det() const {
  // LU with partial pivoting on a local copy.
  std::array<Cmplx, 16> a = e_;
  const int n = n_;
  auto at = [&a](int i, int j) -> Cmplx& {
    return a[static_cast<size_t>(i) * 4 + j];
  };
  Cmplx d(1.0, 0.0);
  for (int k = 0; k < n; ++k) {
    int piv = k;
    double best = std::abs(at(k, k));
    for (int i = k + 1; i < n; ++i) {
      double m = std::abs(at(i, k));
      if (m > best) {
        best = m;
        piv = i;
      }
    }
    if (best == 0.0) return Cmplx(0.0, 0.0);
    if (piv != k) {
      for (int j = 0; j < n; ++j) std::swap(at(piv, j), at(k, j));
      d = -d;
    }
    d *= at(k, k);
    for (int i = k + 1; i < n; ++i) {
      Cmplx f = at(i, k) / at(k, k);
      for (int j = k + 1; j < n; ++j) at(i, j) -= f * at(k, j);
    }
  }
  return d;
}

double CMatrix::trace_real() const {
  double t = 0.0;
  for (int i = 0; i < n_; ++i) t += (*this)(i, i).real();
  return t;
}

double CMatrix::hermiticity_defect() const {
  double worst = 0.0;
  for (int i = 0; i < n_; ++i)
    for (int j = 0; j < n_; ++j)
      worst = std::max(worst,
                       std::abs((*this)(i, j) - std::conj((*this)(j, i))));
  return worst;
}

double CMatrix::offdiag_norm() const {
  double s = 0.0;
  for (int i = 0; i < n_; ++i)
    for (int j = 0; j < n_; ++j)
      if (i != j) s += std::norm((*this)(i, j));
  return std::sqrt(s);
}

std::vector<double> hermitian_eigenvalues(const CMatrix& input) {
  const int n = input.dim();
  CMatrix a = input;

  double scale = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) scale = std::max(scale, std::abs(a(i, j)));
  if (scale == 0.0) return std::vector<double>(static_cast<size_t>(n), 0.0);

  const double tol = 1e-15 * scale;
  const int max_sweeps = 60;

  for (int sweep = 0; sweep < max_sweeps; ++sweep) {
    double off = a.offdiag_norm();
    if (off <= tol) break;
    for (int p = 0; p < n - 1; ++p) {
      for (int q = p + 1; q < n; ++q) {
        Cmplx apq = a(p, q);
        double m = std::abs(apq);
        if (m <= tol * 1e-2) continue;
        // Phase that makes the pivot real, then a standard symmetric
        // rotation angle.
        Cmplx phase = apq / m;
        double app = a(p, p).real();
        double aqq = a(q, q).real();
        double tau = (aqq - app) / (2.0 * m);
        double t = (tau >= 0.0 ? 1.0 : -1.0) /
                   (std::abs(tau) + std::sqrt(1.0 + tau * tau));
        double c = 1.0 / std::sqrt(1.0 + t * t);
        double s = t * c;
        Cmplx sp = s * phase;  // complex sine carrying the pivot phase

        // A <- R^H A R with R acting on rows/cols p,q:
        //   R(p,p)=c, R(p,q)=sp, R(q,p)=-conj(sp), R(q,q)=c
        for (int k = 0; k < n; ++k) {
          Cmplx akp = a(k, p);
          Cmplx akq = a(k, q);
          a(k, p) = c * akp - std::conj(sp) * akq;
          a(k, q) = sp * akp + c * akq;
        }
        for (int k = 0; k < n; ++k) {
          Cmplx apk = a(p, k);
          Cmplx aqk = a(q, k);
          a(p, k) = c * apk - sp * aqk;
          a(q, k) = std::conj(sp) * apk + c * aqk;
        }
        a(p, q) = Cmplx(0.0, 0.0);
        a(q, p) = Cmplx(0.0, 0.0);
        a(p, p) = Cmplx(a(p, p).real(), 0.0);
        a(q, q) = Cmplx(a(q, q).real(), 0.0);
      }
    }
  }

  if (a.offdiag_norm() > 1e-14 * std::max(1.0, scale))
    throw NumericalError("hermitian_eigenvalues: Jacobi sweeps did not converge");

  std::vector<double> ev(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i) ev[static_cast<size_t>(i)] = a(i, i).real();
  std::sort(ev.begin(), ev.end());
  return ev;
}

}  // namespace mmvol
