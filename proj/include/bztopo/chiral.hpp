#pragma once

#include <Eigen/Dense>
#include <string>
#include <utility>
#include <vector>

#include "bztopo/bloch.hpp"
#include "bztopo/detail/linalg.hpp"
#include "bztopo/errors.hpp"
#include "bztopo/grid.hpp"

namespace bztopo {

inline constexpr double kUnitaryTol = 1e-10;

/// A unitary matrix Q(k) at every grid point.
class UnitaryField {
 public:
  UnitaryField(BrillouinGrid grid, std::vector<Matrix> values)
      : grid_(std::move(grid)), values_(std::move(values)) {
    require(values_.size() == grid_.size(), errc::invalid_request,
            "expected " + std::to_string(grid_.size()) + " matrices, got " +
                std::to_string(values_.size()));
    require(!values_.empty() && values_.front().rows() >= 1, errc::invalid_request,
            "empty field");
    size_n_ = static_cast<int>(values_.front().rows());
    for (std::size_t i = 0; i < values_.size(); ++i) {
      const Matrix& m = values_[i];
      require(m.rows() == size_n_ && m.cols() == size_n_, errc::invalid_request,
              "non-square or inconsistent matrix size at point " + std::to_string(i));
      require(detail::unitarity_defect(m) < kUnitaryTol, errc::not_unitary,
              "matrix at point " + std::to_string(i) + " is not unitary");
    }
  }

  template <class Fn>
  static UnitaryField build(const BrillouinGrid& grid, Fn&& fn) {
    return UnitaryField(grid, sample(grid, std::forward<Fn>(fn)));
  }

  const BrillouinGrid& grid() const { return grid_; }
  int matrix_size() const { return size_n_; }
  const std::vector<Matrix>& values() const { return values_; }
  const Matrix& operator[](std::size_t i) const { return values_[i]; }
  std::size_t size() const { return values_.size(); }

 private:
  BrillouinGrid grid_;
  std::vector<Matrix> values_;
  int size_n_ = 0;
};

/// Flattened Hamiltonian determined by a unitary field in the reference
/// basis of S = diag(1_N, -1_N):
///
///   Gamma_Q(k) = [ 0      Q(k) ]
///                [ Q(k)^+  0   ]
inline GradingField gamma_from_q(const UnitaryField& q) {
  const int n = q.matrix_size();
  std::vector<Matrix> out;
  out.reserve(q.size());
  for (std::size_t i = 0; i < q.size(); ++i) {
    Matrix g = Matrix::Zero(2 * n, 2 * n);
    g.topRightCorner(n, n) = q[i];
    g.bottomLeftCorner(n, n) = q[i].adjoint();
    out.push_back(std::move(g));
  }
  return GradingField(q.grid(), std::move(out));
}

/// Upper-right block of an S-compatible grading.  Inverse of gamma_from_q.
inline UnitaryField extract_q(const GradingField& gamma, const ChiralOperator& s) {
  require(gamma.bands() == s.bands(), errc::band_mismatch,
          "grading has " + std::to_string(gamma.bands()) + " bands, symmetry has " +
              std::to_string(s.bands()));
  require(check_chiral(gamma, s), errc::not_chiral,
          "grading does not anticommute with the chiral symmetry");
  const int n = s.block_size();
  std::vector<Matrix> blocks;
  blocks.reserve(gamma.size());
  for (std::size_t i = 0; i < gamma.size(); ++i) {
    blocks.push_back(gamma[i].topRightCorner(n, n).eval());
  }
  // the UnitaryField constructor rejects non-unitary blocks (NotUnitary)
  return UnitaryField(gamma.grid(), std::move(blocks));
}

/// Which eigenspace of S the gauge field acts on.
enum class GaugeBlock { Plus, Minus };

/// Conjugation by the S-commuting unitary diag(G, 1) (or diag(1, G) for the
/// Minus block).  On extracted blocks: Q -> G Q for Plus, Q -> Q G^+ for Minus.
inline GradingField gauge_transform(const GradingField& gamma, const UnitaryField& g,
                                    GaugeBlock block = GaugeBlock::Plus) {
  require(gamma.bands() == 2 * g.matrix_size(), errc::band_mismatch,
          "gauge field of size " + std::to_string(g.matrix_size()) +
              " does not match " + std::to_string(gamma.bands()) + " bands");
  require(gamma.grid() == g.grid(), errc::band_mismatch, "grids differ");
  require(check_chiral(gamma, ChiralOperator(gamma.bands())), errc::not_chiral,
          "grading does not anticommute with the reference chiral symmetry");
  const int n = g.matrix_size();
  std::vector<Matrix> out;
  out.reserve(gamma.size());
  Matrix u = Matrix::Identity(2 * n, 2 * n);
  for (std::size_t i = 0; i < gamma.size(); ++i) {
    if (block == GaugeBlock::Plus) {
      u.topLeftCorner(n, n) = g[i];
    } else {
      u.bottomRightCorner(n, n) = g[i];
    }
    Matrix conj = u * gamma[i] * u.adjoint();
    out.push_back(((conj + conj.adjoint()) / 2.0).eval());
  }
  return GradingField(gamma.grid(), std::move(out));
}

/// Relative grading construction: reference block R times Q^-1 in the
/// upper-right corner.  With R = 1 this is gamma_from_q(Q^+).
inline GradingField gamma_from_reference(const UnitaryField& r, const UnitaryField& q) {
  require(r.matrix_size() == q.matrix_size(), errc::band_mismatch,
          "reference and unitary blocks differ in size");
  require(r.grid() == q.grid(), errc::band_mismatch, "grids differ");
  std::vector<Matrix> blocks;
  blocks.reserve(r.size());
  for (std::size_t i = 0; i < r.size(); ++i) {
    blocks.push_back((r[i] * q[i].adjoint()).eval());
  }
  return gamma_from_q(UnitaryField(r.grid(), std::move(blocks)));
}

/// Basis rotation taking an arbitrary chiral symmetry matrix (unitary,
/// Hermitian, squaring to 1, balanced spectrum) to diag(1_N, -1_N):
/// returns V with V s V^+ canonical.
inline Matrix canonical_chiral_rotation(const Matrix& s) {
  require(s.rows() == s.cols() && s.rows() >= 2 && s.rows() % 2 == 0,
          errc::invalid_request, "chiral matrix must be square with even size");
  require(detail::hermiticity_defect(s) < kHermitianTol &&
              detail::involution_defect(s) < kGradingTol,
          errc::not_grading, "chiral matrix must be a Hermitian involution");
  Eigen::SelfAdjointEigenSolver<Matrix> solver(s);
  const int n = static_cast<int>(s.rows()) / 2;
  int plus = 0;
  for (Eigen::Index j = 0; j < solver.eigenvalues().size(); ++j) {
    if (solver.eigenvalues()[j] > 0.0) ++plus;
  }
  require(plus == n, errc::not_chiral, "eigenvalues of S must split evenly between ±1");
  // eigenvalues come back ascending: -1 block first, +1 block last
  Matrix ordered(s.rows(), s.cols());
  ordered.leftCols(n) = solver.eigenvectors().rightCols(n);
  ordered.rightCols(n) = solver.eigenvectors().leftCols(n);
  return ordered.adjoint();
}

}  // namespace bztopo
