#ifndef MMVOL_COMPLEX_MATRIX_HPP
#define MMVOL_COMPLEX_MATRIX_HPP

#include <array>
#include <complex>
#include <vector>

namespace mmvol {

using Cmplx = std::complex<double>;

// Dense complex matrix of dimension n <= 4, stored row major in a fixed
// array. Everything in this library is 2x2, 3x3 or 4x4, so a heap-free
// type keeps the Monte Carlo paths cheap.
class CMatrix {
 public:
  CMatrix() : n_(0) { e_.fill(Cmplx(0.0, 0.0)); }
  explicit CMatrix(int n) : n_(n) { e_.fill(Cmplx(0.0, 0.0)); }

  int dim() const { return n_; }

  Cmplx& operator()(int i, int j) { return e_[static_cast<size_t>(i) * 4 + j]; }
  const Cmplx& operator()(int i, int j) const {
    return e_[static_cast<size_t>(i) * 4 + j];
  }

  // Determinant by LU with partial pivoting; exact cofactor expansion is not
  // worth the code for n <= 4.
  Cmplx det() const;

  double trace_real() const;

  // Largest |a_ij - conj(a_ji)| over all pairs.
  double hermiticity_defect() const;

  // Frobenius norm of the strict off-diagonal part.
  double offdiag_norm() const;

 private:
  int n_;
  std::array<Cmplx, 16> e_;
};

// Eigenvalues of a Hermitian matrix by cyclic Jacobi sweeps with complex
// rotations, ascending order. Robust and branch-predictable for n <= 4.
std::vector<double> hermitian_eigenvalues(const CMatrix& a);

}  // namespace mmvol

#endif  // MMVOL_COMPLEX_MATRIX_HPP
