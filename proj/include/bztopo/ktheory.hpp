#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "bztopo/bloch.hpp"
#include "bztopo/chiral.hpp"
#include "bztopo/detail/linalg.hpp"
#include "bztopo/errors.hpp"
#include "bztopo/invariants.hpp"

namespace bztopo {

// norm tolerance for deciding two gradings are the same grading
inline constexpr double kGradingEqualityTol = 1e-10;
// eigenvalue snap width used when counting -1 eigenspace ranks
inline constexpr double kEigenSnapTol = 1e-8;

enum class DifferenceKind { RankDifference, WindingDifference };

/// Integer class of a triple after reduction.
struct DifferenceClass {
  DifferenceKind kind = DifferenceKind::RankDifference;
  long value = 0;
};

/// An ordered pair of gradings on a shared carrier, representing the
/// obstruction in passing from the first grading to the second.  Two carriers
/// are supported: a plain vector space (point) and a d-dimensional torus with
/// chiral structure.
class KaroubiTriple {
 public:
  struct Point {
    Matrix gamma1;
    Matrix gamma2;
  };
  struct Torus {
    GradingField gamma1;
    GradingField gamma2;
    ChiralOperator symmetry;
  };

  static KaroubiTriple point(Matrix gamma1, Matrix gamma2) {
    require(gamma1.rows() == gamma1.cols() && gamma2.rows() == gamma2.cols(),
            errc::not_grading, "gradings must be square matrices");
    require(gamma1.rows() == gamma2.rows(), errc::carrier_mismatch,
            "gradings live on different vector spaces");
    for (const Matrix* g : {&gamma1, &gamma2}) {
      require(detail::hermiticity_defect(*g) < kHermitianTol &&
                  detail::involution_defect(*g) < kGradingTol,
              errc::not_grading, "matrix is not a Hermitian involution");
    }
    return KaroubiTriple(Point{std::move(gamma1), std::move(gamma2)});
  }

  static KaroubiTriple torus(GradingField gamma1, GradingField gamma2,
                             ChiralOperator symmetry) {
    require(gamma1.grid() == gamma2.grid(), errc::carrier_mismatch, "grids differ");
    require(gamma1.bands() == gamma2.bands() && gamma1.bands() == symmetry.bands(),
            errc::carrier_mismatch, "band counts differ");
    require(check_chiral(gamma1, symmetry) && check_chiral(gamma2, symmetry),
            errc::not_chiral, "gradings must anticommute with the chiral symmetry");
    return KaroubiTriple(Torus{std::move(gamma1), std::move(gamma2), symmetry});
  }

  bool is_point() const { return std::holds_alternative<Point>(data_); }
  bool is_torus() const { return std::holds_alternative<Torus>(data_); }
  const Point& as_point() const { return std::get<Point>(data_); }
  const Torus& as_torus() const { return std::get<Torus>(data_); }

 private:
  explicit KaroubiTriple(std::variant<Point, Torus> data) : data_(std::move(data)) {}
  std::variant<Point, Torus> data_;
};

namespace detail {

inline long minus_rank(const Matrix& grading) {
  Eigen::SelfAdjointEigenSolver<Matrix> solver(grading, Eigen::EigenvaluesOnly);
  long count = 0;
  for (Eigen::Index j = 0; j < solver.eigenvalues().size(); ++j) {
    const double ev = solver.eigenvalues()[j];
    if (std::abs(ev + 1.0) <= kEigenSnapTol) {
      ++count;
    } else {
      require(std::abs(ev - 1.0) <= kEigenSnapTol, errc::not_grading,
              "eigenvalue " + std::to_string(ev) + " is not within snap range of ±1");
    }
  }
  return count;
}

}  // namespace detail

/// Change in the rank of the -1 eigenspace between the two gradings.
inline DifferenceClass reduce_point(const KaroubiTriple& t) {
  require(t.is_point(), errc::unsupported_carrier,
          "rank reduction is defined on point carriers");
  const auto& p = t.as_point();
  return DifferenceClass{DifferenceKind::RankDifference,
                         detail::minus_rank(p.gamma2) - detail::minus_rank(p.gamma1)};
}

/// Relative winding between the two gradings of a d=1 torus triple.
inline DifferenceClass reduce_torus(const KaroubiTriple& t) {
  require(t.is_torus(), errc::unsupported_carrier,
          "winding reduction is defined on torus carriers");
  const auto& w = t.as_torus();
  require(w.gamma1.grid().dimension() == 1, errc::unsupported_carrier,
          "only d=1 torus carriers reduce; higher-d triples can be built and "
          "added but have no integer reduction here");
  const InvariantReport rel = relative_winding(w.gamma1, w.gamma2, w.symmetry);
  return DifferenceClass{DifferenceKind::WindingDifference, rel.value};
}

inline DifferenceClass reduce(const KaroubiTriple& t) {
  return t.is_point() ? reduce_point(t) : reduce_torus(t);
}

/// Direct sum of carriers and gradings.  Reduction is additive.
inline KaroubiTriple add_triples(const KaroubiTriple& a, const KaroubiTriple& b) {
  require(a.is_point() == b.is_point(), errc::carrier_mismatch,
          "cannot add a point triple to a torus triple");
  if (a.is_point()) {
    const auto& pa = a.as_point();
    const auto& pb = b.as_point();
    const auto n = pa.gamma1.rows() + pb.gamma1.rows();
    Matrix g1 = Matrix::Zero(n, n);
    Matrix g2 = Matrix::Zero(n, n);
    g1.topLeftCorner(pa.gamma1.rows(), pa.gamma1.rows()) = pa.gamma1;
    g1.bottomRightCorner(pb.gamma1.rows(), pb.gamma1.rows()) = pb.gamma1;
    g2.topLeftCorner(pa.gamma2.rows(), pa.gamma2.rows()) = pa.gamma2;
    g2.bottomRightCorner(pb.gamma2.rows(), pb.gamma2.rows()) = pb.gamma2;
    return KaroubiTriple::point(std::move(g1), std::move(g2));
  }
  const auto& ta = a.as_torus();
  const auto& tb = b.as_torus();
  require(ta.gamma1.grid() == tb.gamma1.grid(), errc::carrier_mismatch, "grids differ");
  // the summed carrier keeps S in reference form, so blocks are interleaved
  // rather than stacked: Q_sum = diag(Q_a, Q_b) in the upper-right corner
  const UnitaryField qa1 = extract_q(ta.gamma1, ta.symmetry);
  const UnitaryField qa2 = extract_q(ta.gamma2, ta.symmetry);
  const UnitaryField qb1 = extract_q(tb.gamma1, tb.symmetry);
  const UnitaryField qb2 = extract_q(tb.gamma2, tb.symmetry);
  const int na = qa1.matrix_size();
  const int nb = qb1.matrix_size();
  const auto direct_sum = [&](const UnitaryField& qa, const UnitaryField& qb) {
    std::vector<Matrix> blocks;
    blocks.reserve(qa.size());
    for (std::size_t i = 0; i < qa.size(); ++i) {
      Matrix q = Matrix::Zero(na + nb, na + nb);
      q.topLeftCorner(na, na) = qa[i];
      q.bottomRightCorner(nb, nb) = qb[i];
      blocks.push_back(std::move(q));
    }
    return gamma_from_q(UnitaryField(qa.grid(), std::move(blocks)));
  };
  return KaroubiTriple::torus(direct_sum(qa1, qb1), direct_sum(qa2, qb2),
                              ChiralOperator(2 * (na + nb)));
}

/// The obstruction taken in the opposite order: reduce(invert(t)) = -reduce(t).
inline KaroubiTriple invert_triple(const KaroubiTriple& t) {
  if (t.is_point()) {
    const auto& p = t.as_point();
    return KaroubiTriple::point(p.gamma2, p.gamma1);
  }
  const auto& w = t.as_torus();
  return KaroubiTriple::torus(w.gamma2, w.gamma1, w.symmetry);
}

/// Chain two obstructions that share their middle grading:
/// (g1, g2) then (g2, g3) gives (g1, g3).
inline KaroubiTriple compose_triples(const KaroubiTriple& a, const KaroubiTriple& b) {
  require(a.is_point() == b.is_point(), errc::carrier_mismatch,
          "cannot compose a point triple with a torus triple");
  if (a.is_point()) {
    const auto& pa = a.as_point();
    const auto& pb = b.as_point();
    require(pa.gamma1.rows() == pb.gamma1.rows(), errc::carrier_mismatch,
            "carriers differ in dimension");
    require(detail::max_abs(pa.gamma2 - pb.gamma1) <= kGradingEqualityTol,
            errc::midpoint_mismatch, "shared grading differs beyond tolerance");
    return KaroubiTriple::point(pa.gamma1, pb.gamma2);
  }
  const auto& ta = a.as_torus();
  const auto& tb = b.as_torus();
  require(ta.gamma1.grid() == tb.gamma1.grid() &&
              ta.gamma1.bands() == tb.gamma1.bands(),
          errc::carrier_mismatch, "carriers differ");
  for (std::size_t i = 0; i < ta.gamma2.size(); ++i) {
    require(detail::max_abs(ta.gamma2[i] - tb.gamma1[i]) <= kGradingEqualityTol,
            errc::midpoint_mismatch,
            "shared grading differs at point " + std::to_string(i));
  }
  return KaroubiTriple::torus(ta.gamma1, tb.gamma2, ta.symmetry);
}

/// Explicit rotation homotopy between diag(uv, 1) at t=0 and diag(u, v) at
/// t=1, unitary for every t:
///
///   U_t = diag(u,1) R(t) diag(v,1) R(t)^T,   R(t) = [cos(pi t/2), -sin; sin, cos] ⊗ 1.
inline Matrix rotation_path(const Matrix& u, const Matrix& v, double t) {
  require(u.rows() == u.cols() && v.rows() == v.cols() && u.rows() == v.rows(),
          errc::band_mismatch, "u and v must be square and of equal size");
  require(detail::unitarity_defect(u) < kUnitaryTol &&
              detail::unitarity_defect(v) < kUnitaryTol,
          errc::not_unitary, "path endpoints must be unitary");
  const auto n = u.rows();
  const double c = std::cos(std::numbers::pi * t / 2.0);
  const double s = std::sin(std::numbers::pi * t / 2.0);
  Matrix rot = Matrix::Zero(2 * n, 2 * n);
  rot.topLeftCorner(n, n) = c * Matrix::Identity(n, n);
  rot.topRightCorner(n, n) = -s * Matrix::Identity(n, n);
  rot.bottomLeftCorner(n, n) = s * Matrix::Identity(n, n);
  rot.bottomRightCorner(n, n) = c * Matrix::Identity(n, n);
  Matrix du = Matrix::Identity(2 * n, 2 * n);
  du.topLeftCorner(n, n) = u;
  Matrix dv = Matrix::Identity(2 * n, 2 * n);
  dv.topLeftCorner(n, n) = v;
  return du * rot * dv * rot.transpose();
}

/// Sampled diagnostics of the doubled projection path
/// P_t = U_t diag(p0, 0) U_t^+ with U_t = rotation_path(u, u^+, t).
struct HomotopyReport {
  int samples = 0;
  double max_step_norm = 0.0;
  double max_projection_defect = 0.0;
  double max_hermiticity_defect = 0.0;
  double start_defect = 0.0;  // ‖P_0 - diag(p0, 0)‖
  double end_defect = 0.0;    // ‖P_1 - diag(u p0 u^+, 0)‖
};

/// Walk the doubled path from diag(p0, 0) to diag(u p0 u^+, 0) through
/// `samples` equispaced values of t and report how far each sample strays
/// from being a projection, plus the largest step between samples.
inline HomotopyReport projection_homotopy(const Matrix& p0, const Matrix& u, int samples) {
  require(p0.rows() == p0.cols(), errc::not_projection, "p0 must be square");
  require(detail::hermiticity_defect(p0) < kHermitianTol &&
              detail::idempotency_defect(p0) < kGradingTol,
          errc::not_projection, "p0 must be a Hermitian idempotent");
  require(u.rows() == u.cols() && u.rows() == p0.rows(), errc::band_mismatch,
          "u must match the size of p0");
  require(detail::unitarity_defect(u) < kUnitaryTol, errc::not_unitary,
          "u must be unitary");
  require(samples >= 2, errc::invalid_request, "need at least two samples");

  const auto n = p0.rows();
  Matrix embedded = Matrix::Zero(2 * n, 2 * n);
  embedded.topLeftCorner(n, n) = p0;
  Matrix target = Matrix::Zero(2 * n, 2 * n);
  target.topLeftCorner(n, n) = u * p0 * u.adjoint();

  HomotopyReport report;
  report.samples = samples;
  Matrix prev;
  for (int j = 0; j < samples; ++j) {
    const double t = static_cast<double>(j) / static_cast<double>(samples - 1);
    const Matrix path = rotation_path(u, u.adjoint(), t);
    const Matrix pt = path * embedded * path.adjoint();
    report.max_projection_defect =
        std::max(report.max_projection_defect, detail::idempotency_defect(pt));
    report.max_hermiticity_defect =
        std::max(report.max_hermiticity_defect, detail::hermiticity_defect(pt));
    if (j == 0) report.start_defect = detail::max_abs(pt - embedded);
    if (j == samples - 1) report.end_defect = detail::max_abs(pt - target);
    if (j > 0) {
      report.max_step_norm = std::max(report.max_step_norm, detail::max_abs(pt - prev));
    }
    prev = pt;
  }
  return report;
}

}  // namespace bztopo
