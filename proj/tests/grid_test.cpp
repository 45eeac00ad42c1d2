#include "bztopo/grid.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include "bztopo/detail/random.hpp"
#include "support.hpp"

using namespace bztopo;
using testsupport::expect_error;

namespace {

constexpr double kPi = std::numbers::pi;

TEST(MakeGrid, OneDimensionalMomenta) {
  const BrillouinGrid grid = make_grid(1, 4);
  ASSERT_EQ(grid.size(), 4u);
  const std::vector<double> expected = {0.0, kPi / 2, kPi, 3 * kPi / 2};
  for (std::size_t i = 0; i < 4; ++i) {
    EXPECT_NEAR(grid.point(i).momentum[0], expected[i], 1e-15);
  }
}

TEST(MakeGrid, PointCounts) {
  EXPECT_EQ(make_grid(2, 2).size(), 4u);
  EXPECT_EQ(make_grid(3, 32).size(), 32768u);
}

TEST(MakeGrid, SpacingTimesLengthIsTwoPi) {
  for (int length : {2, 3, 17, 64, 100}) {
    const BrillouinGrid grid = make_grid(1, length);
    EXPECT_LT(std::abs(grid.spacing() * length - kTwoPi) / kTwoPi, 1e-12);
  }
}

TEST(MakeGrid, RejectsBadArguments) {
  expect_error(errc::invalid_dimension, [] { make_grid(0, 8); });
  expect_error(errc::invalid_dimension, [] { make_grid(4, 8); });
  expect_error(errc::grid_too_small, [] { make_grid(2, 1); });
}

TEST(Indexing, SteppingLengthTimesReturnsToStart) {
  const BrillouinGrid grid = make_grid(3, 5);
  for (std::size_t start : {0u, 7u, 77u, 124u}) {
    for (int axis = 0; axis < 3; ++axis) {
      std::size_t i = start;
      for (int s = 0; s < 5; ++s) i = grid.neighbor(i, axis, +1);
      EXPECT_EQ(i, start);
      EXPECT_EQ(grid.neighbor(start, axis, -5), start);
    }
  }
}

TEST(Indexing, RowMajorAxisZeroSlowest) {
  const BrillouinGrid grid = make_grid(2, 3);
  const GridPoint p = grid.point(5);
  EXPECT_EQ(p.indices[0], 1);
  EXPECT_EQ(p.indices[1], 2);
  EXPECT_EQ(grid.flat_index({1, 2, 0}), 5u);
  EXPECT_EQ(grid.flat_index({-1, 5, 0}), grid.flat_index({2, 2, 0}));
}

TEST(Indexing, ReflectionIsInvolutionAndNegatesMomentum) {
  const BrillouinGrid grid = make_grid(2, 6);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const std::size_t r = grid.reflection(i);
    EXPECT_EQ(grid.reflection(r), i);
    for (int a = 0; a < 2; ++a) {
      const double sum = grid.point(i).momentum[a] + grid.point(r).momentum[a];
      const double wrapped = std::remainder(sum, kTwoPi);
      EXPECT_NEAR(wrapped, 0.0, 1e-12);
    }
  }
}

TEST(Integrate, ConstantFieldGivesTorusMeasure) {
  const auto one = [](const GridPoint&) { return Complex(1.0, 0.0); };
  EXPECT_NEAR(integrate(make_grid(1, 64), one).real(), kTwoPi, 1e-12);
  EXPECT_NEAR(integrate(make_grid(3, 8), one).real(), kTwoPi * kTwoPi * kTwoPi, 1e-9);
}

TEST(Integrate, CharacterIntegratesToZero) {
  const Complex result = integrate(make_grid(1, 64), [](const GridPoint& p) {
    return std::exp(Complex(0.0, p.momentum[0]));
  });
  EXPECT_LT(std::abs(result), 1e-12);
}

TEST(Integrate, Linearity) {
  for (int length : {8, 64}) {
    const BrillouinGrid grid = make_grid(1, length);
    detail::RandomStream rng(202406);
    std::vector<Complex> f(grid.size()), g(grid.size());
    for (auto& x : f) x = rng.complex_symmetric();
    for (auto& x : g) x = rng.complex_symmetric();
    const Complex a{rng.symmetric(), rng.symmetric()};
    const Complex b{rng.symmetric(), rng.symmetric()};
    const auto eval = [](const std::vector<Complex>& v) {
      return [&v](const GridPoint& p) { return v[p.flat]; };
    };
    const Complex lhs = integrate(grid, [&](const GridPoint& p) {
      return a * f[p.flat] + b * g[p.flat];
    });
    const Complex rhs = a * integrate(grid, eval(f)) + b * integrate(grid, eval(g));
    EXPECT_LT(std::abs(lhs - rhs) / std::max(1.0, std::abs(rhs)), 1e-12);
  }
}

TEST(Integrate, RepeatRunsAreBitIdentical) {
  const BrillouinGrid grid = make_grid(2, 16);
  detail::RandomStream rng(7);
  std::vector<Complex> f(grid.size());
  for (auto& x : f) x = rng.complex_symmetric();
  const auto field = [&f](const GridPoint& p) { return f[p.flat]; };
  const Complex first = integrate(grid, field);
  const Complex second = integrate(grid, field);
  EXPECT_EQ(first.real(), second.real());
  EXPECT_EQ(first.imag(), second.imag());
}

std::vector<Matrix> phase_field(const BrillouinGrid& grid, int harmonic) {
  return sample(grid, [harmonic](const GridPoint& p) {
    Matrix m(1, 1);
    m(0, 0) = std::exp(Complex(0.0, harmonic * p.momentum[0]));
    return m;
  });
}

double derivative_error(const BrillouinGrid& grid, int harmonic) {
  const auto derivative = finite_difference(grid, phase_field(grid, harmonic), 0);
  double worst = 0.0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const Complex expected = Complex(0.0, harmonic) *
                             std::exp(Complex(0.0, harmonic * grid.point(i).momentum[0]));
    worst = std::max(worst, std::abs(derivative[i](0, 0) - expected));
  }
  return worst;
}

TEST(FiniteDifference, ExponentialDerivatives) {
  const BrillouinGrid grid = make_grid(1, 256);
  EXPECT_LT(derivative_error(grid, 1), 1e-3);
  EXPECT_LT(derivative_error(grid, 2), 1e-3);
}

TEST(FiniteDifference, ConstantFieldGivesExactZero) {
  const BrillouinGrid grid = make_grid(1, 32);
  const auto derivative = finite_difference(
      grid, sample(grid, [](const GridPoint&) { return Matrix::Constant(2, 2, 1.5); }), 0);
  for (const Matrix& m : derivative) EXPECT_EQ(detail::max_abs(m), 0.0);
}

TEST(FiniteDifference, SecondOrderConvergence) {
  // fixed trig polynomial, error should shrink 4x per grid doubling
  const double coarse = derivative_error(make_grid(1, 64), 3);
  const double fine = derivative_error(make_grid(1, 128), 3);
  const double ratio = coarse / fine;
  EXPECT_GE(ratio, 3.5);
  EXPECT_LE(ratio, 4.5);
}

TEST(FiniteDifference, AxisOutOfRange) {
  const BrillouinGrid grid = make_grid(1, 8);
  const auto field = phase_field(grid, 1);
  expect_error(errc::axis_out_of_range, [&] { finite_difference(grid, field, 1); });
}

}  // namespace
