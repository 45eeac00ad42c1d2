#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <numbers>

namespace bztopo {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;

inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

namespace detail {

inline double max_abs(const Matrix& a) {
  return a.size() == 0 ? 0.0 : a.cwiseAbs().maxCoeff();
}

inline double hermiticity_defect(const Matrix& a) {
  return max_abs(a - a.adjoint().eval());
}

inline double unitarity_defect(const Matrix& u) {
  return max_abs(u.adjoint() * u - Matrix::Identity(u.cols(), u.cols()));
}

// ‖a² − 1‖, zero for a grading.
inline double involution_defect(const Matrix& a) {
  return max_abs(a * a - Matrix::Identity(a.rows(), a.cols()));
}

// ‖a² − a‖, zero for a projection.
inline double idempotency_defect(const Matrix& a) {
  return max_abs(a * a - a);
}

// Principal angle in [-pi, pi]; ±pi only when x is exactly half a period.
inline double wrap_angle(double x) { return std::remainder(x, kTwoPi); }

}  // namespace detail
}  // namespace bztopo
