#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include "bztopo/detail/linalg.hpp"
#include "bztopo/errors.hpp"
#include "bztopo/grid.hpp"

namespace bztopo {

inline constexpr double kHermitianTol = 1e-12;
inline constexpr double kGradingTol = 1e-10;
inline constexpr double kSymmetryTol = 1e-10;
inline constexpr double kDefaultGapTol = 1e-8;

/// A Hermitian matrix H(k) at every grid point, constant band count.
class HermitianField {
 public:
  HermitianField(BrillouinGrid grid, std::vector<Matrix> values)
      : grid_(std::move(grid)), values_(std::move(values)) {
    require(values_.size() == grid_.size(), errc::invalid_request,
            "expected " + std::to_string(grid_.size()) + " matrices, got " +
                std::to_string(values_.size()));
    require(!values_.empty() && values_.front().rows() >= 1, errc::invalid_request,
            "empty field");
    bands_ = static_cast<int>(values_.front().rows());
    for (std::size_t i = 0; i < values_.size(); ++i) {
      const Matrix& m = values_[i];
      require(m.rows() == bands_ && m.cols() == bands_, errc::invalid_request,
              "non-square or inconsistent matrix size at point " + std::to_string(i));
      require(detail::hermiticity_defect(m) < kHermitianTol, errc::not_hermitian,
              "matrix at point " + std::to_string(i) + " is not Hermitian");
    }
  }

  template <class Fn>
  static HermitianField build(const BrillouinGrid& grid, Fn&& fn) {
    return HermitianField(grid, sample(grid, std::forward<Fn>(fn)));
  }

  const BrillouinGrid& grid() const { return grid_; }
  int bands() const { return bands_; }
  const std::vector<Matrix>& values() const { return values_; }
  const Matrix& operator[](std::size_t i) const { return values_[i]; }
  std::size_t size() const { return values_.size(); }

 private:
  BrillouinGrid grid_;
  std::vector<Matrix> values_;
  int bands_ = 0;
};

/// A flattened Hamiltonian: Hermitian and squaring to the identity.
class GradingField : public HermitianField {
 public:
  GradingField(BrillouinGrid grid, std::vector<Matrix> values)
      : HermitianField(std::move(grid), std::move(values)) {
    for (std::size_t i = 0; i < size(); ++i) {
      require(detail::involution_defect((*this)[i]) < kGradingTol, errc::not_grading,
              "matrix at point " + std::to_string(i) + " does not square to 1");
    }
  }

  template <class Fn>
  static GradingField build(const BrillouinGrid& grid, Fn&& fn) {
    return GradingField(grid, sample(grid, std::forward<Fn>(fn)));
  }
};

/// Sublattice symmetry in its reference basis: S = diag(1_N, -1_N), constant
/// over the grid.  All gauge freedom lives in the unitary fields that commute
/// with it.
class ChiralOperator {
 public:
  explicit ChiralOperator(int bands) : bands_(bands) {
    require(bands >= 2 && bands % 2 == 0, errc::invalid_request,
            "chiral symmetry needs an even band count >= 2, got " + std::to_string(bands));
  }

  int bands() const { return bands_; }
  int block_size() const { return bands_ / 2; }

  Matrix matrix() const {
    Matrix s = Matrix::Zero(bands_, bands_);
    const int n = block_size();
    s.topLeftCorner(n, n) = Matrix::Identity(n, n);
    s.bottomRightCorner(n, n) = -Matrix::Identity(n, n);
    return s;
  }

  friend bool operator==(const ChiralOperator&, const ChiralOperator&) = default;

 private:
  int bands_;
};

/// Antilinear time reversal psi -> U conj(psi) with U conj(U) = +1.
class TimeReversalOperator {
 public:
  explicit TimeReversalOperator(Matrix u) : u_(std::move(u)) {
    require(u_.rows() == u_.cols() && u_.rows() >= 1, errc::invalid_request,
            "time-reversal matrix must be square");
    require(detail::unitarity_defect(u_) < kHermitianTol, errc::not_unitary,
            "time-reversal matrix is not unitary");
    const Matrix square = u_ * u_.conjugate();
    require(detail::max_abs(square - Matrix::Identity(u_.rows(), u_.cols())) < kHermitianTol,
            errc::invalid_request, "U conj(U) != 1: not a T^2 = +1 time reversal");
  }

  /// Plain complex conjugation (U = 1).
  static TimeReversalOperator conjugation(int bands) {
    return TimeReversalOperator(Matrix::Identity(bands, bands));
  }

  int bands() const { return static_cast<int>(u_.rows()); }
  const Matrix& matrix() const { return u_; }

 private:
  Matrix u_;
};

/// Smallest |eigenvalue| of H(k) over all k.  Returns 0.0 for gapless input.
inline double spectral_gap(const HermitianField& h) {
  double gap = std::numeric_limits<double>::infinity();
  Eigen::SelfAdjointEigenSolver<Matrix> solver;
  for (std::size_t i = 0; i < h.size(); ++i) {
    solver.compute(h[i], Eigen::EigenvaluesOnly);
    const auto& ev = solver.eigenvalues();
    for (Eigen::Index j = 0; j < ev.size(); ++j) gap = std::min(gap, std::abs(ev[j]));
  }
  return gap;
}

/// Spectral flattening sgn(H): same eigenvectors, eigenvalues mapped to ±1.
inline GradingField flatten(const HermitianField& h, double gap_tolerance = kDefaultGapTol) {
  const double gap = spectral_gap(h);
  require(gap > gap_tolerance, errc::gapless,
          "spectral gap " + std::to_string(gap) + " <= tolerance " +
              std::to_string(gap_tolerance));
  std::vector<Matrix> flat;
  flat.reserve(h.size());
  Eigen::SelfAdjointEigenSolver<Matrix> solver;
  for (std::size_t i = 0; i < h.size(); ++i) {
    solver.compute(h[i]);
    Eigen::VectorXd signs = solver.eigenvalues().unaryExpr(
        [](double x) { return x > 0.0 ? 1.0 : -1.0; });
    Matrix g = solver.eigenvectors() * signs.asDiagonal() *
               solver.eigenvectors().adjoint();
    // symmetrize away the last bits of solver round-off
    flat.push_back(((g + g.adjoint()) / 2.0).eval());
  }
  return GradingField(h.grid(), std::move(flat));
}

/// True iff S anticommutes with the field at every grid point.
inline bool check_chiral(const HermitianField& h, const ChiralOperator& s) {
  require(h.bands() == s.bands(), errc::band_mismatch,
          "field has " + std::to_string(h.bands()) + " bands, symmetry has " +
              std::to_string(s.bands()));
  const Matrix sm = s.matrix();
  for (std::size_t i = 0; i < h.size(); ++i) {
    if (detail::max_abs(sm * h[i] + h[i] * sm) >= kSymmetryTol) return false;
  }
  return true;
}

/// True iff U conj(H(k)) U^-1 = H(-k) at every grid point.
inline bool check_time_reversal(const HermitianField& h, const TimeReversalOperator& t) {
  require(h.bands() == t.bands(), errc::band_mismatch,
          "field has " + std::to_string(h.bands()) + " bands, time reversal has " +
              std::to_string(t.bands()));
  const Matrix& u = t.matrix();
  for (std::size_t i = 0; i < h.size(); ++i) {
    const Matrix lhs = u * h[i].conjugate() * u.adjoint();
    const Matrix& rhs = h[h.grid().reflection(i)];
    if (detail::max_abs(lhs - rhs) >= kSymmetryTol) return false;
  }
  return true;
}

/// Projection onto the negative-energy bands, P = (1 - sgn H)/2.
inline HermitianField valence_projection(const HermitianField& h,
                                         double gap_tolerance = kDefaultGapTol) {
  GradingField g = flatten(h, gap_tolerance);
  std::vector<Matrix> proj;
  proj.reserve(g.size());
  const Matrix id = Matrix::Identity(g.bands(), g.bands());
  for (std::size_t i = 0; i < g.size(); ++i) {
    Matrix p = (id - g[i]) / 2.0;
    proj.push_back(((p + p.adjoint()) / 2.0).eval());
  }
  return HermitianField(h.grid(), std::move(proj));
}

}  // namespace bztopo
