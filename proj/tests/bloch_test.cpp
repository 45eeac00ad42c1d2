#include "bztopo/bloch.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <complex>
#include <vector>

#include "bztopo/chiral.hpp"
#include "bztopo/models.hpp"
#include "support.hpp"

using namespace bztopo;
using testsupport::expect_error;
using testsupport::gamma_n;
using testsupport::max_field_diff;

namespace {

HermitianField two_band_chain(const BrillouinGrid& grid, double mass) {
  // H(k) = [[m, e^{-ik}], [e^{ik}, -m]], gap sqrt(1 + m^2)
  return HermitianField::build(grid, [mass](const GridPoint& p) {
    Matrix h(2, 2);
    h << mass, std::exp(Complex(0.0, -p.momentum[0])),
        std::exp(Complex(0.0, p.momentum[0])), -mass;
    return h;
  });
}

TEST(SpectralGap, FlatGradingHasUnitGap) {
  EXPECT_NEAR(spectral_gap(gamma_n(2, make_grid(1, 32))), 1.0, 1e-12);
}

TEST(SpectralGap, ConstantDiagonal) {
  const BrillouinGrid grid = make_grid(1, 8);
  const HermitianField h = HermitianField::build(grid, [](const GridPoint&) {
    Matrix m(2, 2);
    m << 2.0, 0.0, 0.0, -3.0;
    return m;
  });
  EXPECT_NEAR(spectral_gap(h), 2.0, 1e-12);
}

TEST(SpectralGap, NearlyClosedChain) {
  // singular values of the hopping block are |1 + e^{-ik}| = 2|cos(k/2)|
  const BrillouinGrid grid = make_grid(1, 64);
  const HermitianField h = HermitianField::build(grid, [](const GridPoint& p) {
    const Complex hop = 1.0 + std::exp(Complex(0.0, -p.momentum[0]));
    Matrix m(2, 2);
    m << 0.0, hop, std::conj(hop), 0.0;
    return m;
  });
  const double gap = spectral_gap(h);
  EXPECT_LT(gap, 0.1);
  double expected = 1e300;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    expected = std::min(expected, 2.0 * std::abs(std::cos(grid.point(i).momentum[0] / 2)));
  }
  EXPECT_NEAR(gap, expected, 1e-12);
}

TEST(Flatten, FixesAlreadyFlatField) {
  const GradingField g = gamma_n(2, make_grid(1, 16));
  EXPECT_LT(max_field_diff(flatten(g).values(), g.values()), 1e-12);
}

TEST(Flatten, PositiveScaleInvariance) {
  const BrillouinGrid grid = make_grid(1, 16);
  const GradingField g = gamma_n(3, grid);
  const HermitianField scaled =
      HermitianField::build(grid, [&](const GridPoint& p) { return (5.0 * g[p.flat]).eval(); });
  EXPECT_LT(max_field_diff(flatten(scaled).values(), g.values()), 1e-10);
}

TEST(Flatten, ClosedFormTwoBandChain) {
  // H^2 = (1 + m^2) 1, so sgn(H) = H / sqrt(1 + m^2)
  const BrillouinGrid grid = make_grid(1, 32);
  for (double mass : {0.0, 0.7}) {
    const HermitianField h = two_band_chain(grid, mass);
    const GradingField flat = flatten(h);
    const double scale = 1.0 / std::sqrt(1.0 + mass * mass);
    double worst = 0.0;
    for (std::size_t i = 0; i < grid.size(); ++i) {
      worst = std::max(worst, detail::max_abs(flat[i] - scale * h[i]));
    }
    EXPECT_LT(worst, 1e-12) << "mass " << mass;
  }
}

TEST(Flatten, IdempotentAndScaleInvariantOnRandomFields) {
  const BrillouinGrid grid = make_grid(1, 8);
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const HermitianField h = build_random_gapped(seed, 3, 0.4, grid);
    const GradingField once = flatten(h);
    EXPECT_LT(max_field_diff(flatten(once).values(), once.values()), 1e-10);
    const HermitianField scaled = HermitianField::build(
        grid, [&](const GridPoint& p) { return (2.5 * h[p.flat]).eval(); });
    EXPECT_LT(max_field_diff(flatten(scaled).values(), once.values()), 1e-10);
  }
}

TEST(Flatten, GaplessInputRejected) {
  const BrillouinGrid grid = make_grid(1, 16);
  const HermitianField h = HermitianField::build(grid, [](const GridPoint& p) {
    Matrix m(2, 2);
    m << std::sin(p.momentum[0]), 0.0, 0.0, -std::sin(p.momentum[0]);
    return m;
  });
  expect_error(errc::gapless, [&] { flatten(h); });
}

TEST(Flatten, OutputSatisfiesGradingInvariants) {
  const HermitianField h = build_random_gapped(11, 4, 0.3, make_grid(1, 8));
  const GradingField flat = flatten(h);
  for (std::size_t i = 0; i < flat.size(); ++i) {
    EXPECT_LT(detail::involution_defect(flat[i]), 1e-10);
    EXPECT_LT(detail::hermiticity_defect(flat[i]), 1e-12);
  }
}

TEST(CheckChiral, OffDiagonalGradingAnticommutes) {
  const BrillouinGrid grid = make_grid(1, 16);
  EXPECT_TRUE(check_chiral(gamma_n(1, grid), ChiralOperator(2)));
}

TEST(CheckChiral, SymmetryItselfFails) {
  // S commutes with itself, never anticommutes
  const BrillouinGrid grid = make_grid(1, 8);
  const ChiralOperator s(2);
  const GradingField gamma_is_s =
      GradingField::build(grid, [&](const GridPoint&) { return s.matrix(); });
  EXPECT_FALSE(check_chiral(gamma_is_s, s));
}

TEST(CheckChiral, ConstantOffDiagonal) {
  const BrillouinGrid grid = make_grid(1, 8);
  const GradingField pauli_x = GradingField::build(grid, [](const GridPoint&) {
    Matrix m(2, 2);
    m << 0.0, 1.0, 1.0, 0.0;
    return m;
  });
  EXPECT_TRUE(check_chiral(pauli_x, ChiralOperator(2)));
}

TEST(CheckChiral, BandMismatch) {
  const GradingField g = gamma_n(0, make_grid(1, 8));
  expect_error(errc::band_mismatch, [&] { check_chiral(g, ChiralOperator(4)); });
}

TEST(CheckChiral, SurvivesFlattening) {
  // random gapped chiral Hamiltonian: off-diagonal blocks only
  const BrillouinGrid grid = make_grid(1, 12);
  detail::RandomStream rng(5);
  std::vector<Matrix> values;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const Matrix block =
        testsupport::random_matrix(rng, 2) + 3.0 * Matrix::Identity(2, 2);
    Matrix h = Matrix::Zero(4, 4);
    h.topRightCorner(2, 2) = block;
    h.bottomLeftCorner(2, 2) = block.adjoint();
    values.push_back(h);
  }
  const HermitianField h(grid, values);
  const ChiralOperator s(4);
  ASSERT_TRUE(check_chiral(h, s));
  EXPECT_TRUE(check_chiral(flatten(h), s));
}

TEST(CheckTimeReversal, ReferencePhasesAreSymmetric) {
  const BrillouinGrid grid = make_grid(1, 64);
  const TimeReversalOperator t = TimeReversalOperator::conjugation(2);
  for (int n : {-2, 0, 1, 3}) {
    EXPECT_TRUE(check_time_reversal(gamma_n(n, grid), t)) << "n = " << n;
  }
}

TEST(CheckTimeReversal, PerturbedPhaseBreaksSymmetry) {
  // same winding as n=1 but the cos term spoils conj(Q(k)) = Q(-k)
  const BrillouinGrid grid = make_grid(1, 64);
  const UnitaryField q = UnitaryField::build(grid, [](const GridPoint& p) {
    const double k = p.momentum[0];
    Matrix m(1, 1);
    m(0, 0) = std::exp(Complex(0.0, -(k + 0.3 * std::sin(k) + 0.2 * std::cos(k))));
    return m;
  });
  EXPECT_FALSE(check_time_reversal(gamma_from_q(q), TimeReversalOperator::conjugation(2)));
}

TEST(CheckTimeReversal, ConstantRealField) {
  const BrillouinGrid grid = make_grid(1, 8);
  const GradingField pauli_x = GradingField::build(grid, [](const GridPoint&) {
    Matrix m(2, 2);
    m << 0.0, 1.0, 1.0, 0.0;
    return m;
  });
  EXPECT_TRUE(check_time_reversal(pauli_x, TimeReversalOperator::conjugation(2)));
}

TEST(Operators, TimeReversalValidation) {
  expect_error(errc::not_unitary, [] {
    TimeReversalOperator(Matrix::Constant(2, 2, 0.5));
  });
  // U conj(U) = -1 is the Kramers case, out of contract here
  Matrix u(2, 2);
  u << 0.0, 1.0, -1.0, 0.0;
  expect_error(errc::invalid_request, [&] { TimeReversalOperator(std::move(u)); });
}

TEST(Operators, ChiralCanonicalMatrix) {
  const ChiralOperator s(4);
  EXPECT_EQ(s.block_size(), 2);
  Matrix expected = Matrix::Zero(4, 4);
  expected(0, 0) = 1.0;
  expected(1, 1) = 1.0;
  expected(2, 2) = -1.0;
  expected(3, 3) = -1.0;
  EXPECT_EQ(detail::max_abs(s.matrix() - expected), 0.0);
  expect_error(errc::invalid_request, [] { ChiralOperator(3); });
}

TEST(Fields, HermitianValidation) {
  const BrillouinGrid grid = make_grid(1, 4);
  std::vector<Matrix> values(4, Matrix::Identity(2, 2));
  values[2](0, 1) = Complex(0.0, 1.0);  // breaks Hermiticity
  expect_error(errc::not_hermitian, [&] { HermitianField(grid, values); });
  expect_error(errc::not_grading, [&] {
    GradingField::build(grid, [](const GridPoint&) {
      return (2.0 * Matrix::Identity(2, 2)).eval();
    });
  });
}

TEST(ValenceProjection, ConstantDiagonal) {
  const BrillouinGrid grid = make_grid(1, 4);
  const HermitianField h = HermitianField::build(grid, [](const GridPoint&) {
    Matrix m(2, 2);
    m << 2.0, 0.0, 0.0, -3.0;
    return m;
  });
  const HermitianField p = valence_projection(h);
  Matrix expected = Matrix::Zero(2, 2);
  expected(1, 1) = 1.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    EXPECT_LT(detail::max_abs(p[i] - expected), 1e-12);
  }
}

}  // namespace
