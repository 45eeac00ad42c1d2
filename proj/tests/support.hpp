#pragma once

// Shared helpers for the test binaries: seeded random matrices and fields,
// and an exception matcher that checks the error code.

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <vector>

#include "bztopo/bloch.hpp"
#include "bztopo/chiral.hpp"
#include "bztopo/detail/random.hpp"
#include "bztopo/errors.hpp"
#include "bztopo/grid.hpp"
#include "bztopo/models.hpp"

namespace testsupport {

using bztopo::BrillouinGrid;
using bztopo::Complex;
using bztopo::GradingField;
using bztopo::Matrix;
using bztopo::UnitaryField;

inline Matrix random_matrix(bztopo::detail::RandomStream& rng, int n) {
  Matrix a(n, n);
  for (int r = 0; r < n; ++r) {
    for (int c = 0; c < n; ++c) a(r, c) = rng.complex_symmetric();
  }
  return a;
}

inline Matrix random_unitary(bztopo::detail::RandomStream& rng, int n) {
  Eigen::HouseholderQR<Matrix> qr(random_matrix(rng, n));
  return qr.householderQ() * Matrix::Identity(n, n);
}

inline Matrix random_hermitian(bztopo::detail::RandomStream& rng, int n) {
  const Matrix a = random_matrix(rng, n);
  return ((a + a.adjoint()) / 2.0).eval();
}

/// Random grading: unitary conjugation of diag(+1 x (n - minus), -1 x minus).
inline Matrix random_grading(bztopo::detail::RandomStream& rng, int n, int minus) {
  Eigen::VectorXd signs(n);
  for (int i = 0; i < n; ++i) signs[i] = i < n - minus ? 1.0 : -1.0;
  const Matrix u = random_unitary(rng, n);
  const Matrix g = u * signs.asDiagonal() * u.adjoint();
  return ((g + g.adjoint()) / 2.0).eval();
}

inline UnitaryField random_unitary_field(std::uint64_t seed, const BrillouinGrid& grid,
                                         int n) {
  bztopo::detail::RandomStream rng(seed);
  std::vector<Matrix> values;
  values.reserve(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) values.push_back(random_unitary(rng, n));
  return UnitaryField(grid, std::move(values));
}

/// Smooth random U(1) gauge field e^{i phi(k)} with a low-order trig phase.
inline UnitaryField random_phase_gauge(std::uint64_t seed, const BrillouinGrid& grid) {
  bztopo::detail::RandomStream rng(seed);
  const double a = rng.symmetric();
  const double b = rng.symmetric();
  const double c = rng.symmetric();
  return UnitaryField::build(grid, [a, b, c](const bztopo::GridPoint& p) {
    const double k = p.momentum[0];
    const double phi = a * std::sin(k) + b * std::cos(k) + c * std::sin(2 * k);
    Matrix q(1, 1);
    q(0, 0) = std::exp(Complex(0.0, phi));
    return q;
  });
}

inline GradingField gamma_n(int n, const BrillouinGrid& grid) {
  return bztopo::gamma_from_q(bztopo::build_qn(n, grid));
}

inline double max_field_diff(const std::vector<Matrix>& a, const std::vector<Matrix>& b) {
  double worst = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    worst = std::max(worst, bztopo::detail::max_abs(a[i] - b[i]));
  }
  return worst;
}

template <class Fn>
void expect_error(bztopo::errc code, Fn&& fn) {
  bool threw = false;
  try {
    fn();
  } catch (const bztopo::Error& e) {
    threw = true;
    EXPECT_EQ(e.code(), code) << "threw " << e.name() << ": " << e.what();
  }
  EXPECT_TRUE(threw) << "expected error " << bztopo::errc_name(code);
}

}  // namespace testsupport
