#pragma once

#include <Eigen/Dense>
#include <complex>

namespace hyrad {

using cdouble = std::complex<double>;
using Vec = Eigen::VectorXcd;
using Mat = Eigen::MatrixXcd;
using RealVec = Eigen::VectorXd;
using RealMat = Eigen::MatrixXd;

/// (A + A^H)/2, used to strip accumulated round-off from nominally
/// Hermitian products.
inline Mat hermitian_part(const Mat& a) { return 0.5 * (a + a.adjoint()); }

/// Re tr(A B) for Hermitian A, B. Uses tr(AB) = sum_ij A_ij conj(B_ij).
inline double trace_inner(const Mat& a, const Mat& b) {
  return a.cwiseProduct(b.conjugate()).sum().real();
}

/// w^H A w as a real number (A Hermitian).
inline double quad_form(const Vec& w, const Mat& a) {
  return std::real(w.dot(a * w));
}

}  // namespace hyrad
