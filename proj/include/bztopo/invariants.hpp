#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <string>
#include <utility>
#include <vector>

#include "bztopo/bloch.hpp"
#include "bztopo/chiral.hpp"
#include "bztopo/detail/linalg.hpp"
#include "bztopo/errors.hpp"
#include "bztopo/grid.hpp"

namespace bztopo {

enum class InvariantKind { Winding1, Chern2, Winding3 };

inline const char* invariant_kind_name(InvariantKind kind) {
  switch (kind) {
    case InvariantKind::Winding1: return "winding1";
    case InvariantKind::Chern2: return "chern2";
    case InvariantKind::Winding3: return "winding3";
  }
  return "unknown";
}

struct InvariantReport {
  InvariantKind kind = InvariantKind::Winding1;
  double raw_value = 0.0;
  long value = 0;
  double residual = 0.0;
  int grid_length = 0;
};

namespace detail {

inline InvariantReport make_report(InvariantKind kind, double raw, int grid_length) {
  InvariantReport r;
  r.kind = kind;
  r.raw_value = raw;
  r.value = std::lround(raw);
  r.residual = std::abs(raw - static_cast<double>(r.value));
  r.grid_length = grid_length;
  return r;
}

}  // namespace detail

/// arg det Q along the d=1 loop, unwrapped increment by increment.  Returns
/// L+1 samples: entry j is the phase accumulated up to k = j*dk, so the last
/// entry minus the first is the total winding angle.  Throws GridTooCoarse
/// when an increment reaches half a period and the branch is ambiguous.
inline std::vector<double> unwrapped_phase(const UnitaryField& q) {
  require(q.grid().dimension() == 1, errc::wrong_dimension,
          "phase unwrapping is defined on d=1 grids");
  const std::size_t n = q.size();
  std::vector<double> arg(n);
  for (std::size_t i = 0; i < n; ++i) arg[i] = std::arg(q[i].determinant());
  std::vector<double> phase(n + 1);
  phase[0] = arg[0];
  for (std::size_t i = 0; i < n; ++i) {
    const double next = arg[(i + 1) % n];
    const double step = detail::wrap_angle(next - arg[i]);
    require(std::abs(step) < std::numbers::pi, errc::grid_too_coarse,
            "phase jump of half a period between points " + std::to_string(i) +
                " and " + std::to_string(i + 1));
    phase[i + 1] = phase[i] + step;
  }
  return phase;
}

/// Winding number of det Q around the d=1 Brillouin loop.  Sign convention:
/// the phase e^{-ink} has winding +n.
inline InvariantReport winding_number(const UnitaryField& q) {
  const std::vector<double> phase = unwrapped_phase(q);
  const double raw = -(phase.back() - phase.front()) / kTwoPi;
  return detail::make_report(InvariantKind::Winding1, raw, q.grid().points_per_axis());
}

/// Berry flux through each plaquette of a d=2 projection field, using
/// link variables det(V(k)^+ V(k')) built from orthonormal frames of the
/// projection.  Entry (i*L + j) is the wrapped flux through the plaquette
/// with corners (i,j), (i+1,j), (i+1,j+1), (i,j+1); axis 0 is k_x.  The sum
/// of all entries is 2*pi times an integer up to round-off, since every link
/// phase enters twice with opposite signs.
inline std::vector<double> plaquette_fluxes(const HermitianField& p) {
  require(p.grid().dimension() == 2, errc::wrong_dimension,
          "plaquette fluxes are defined on d=2 grids");
  const std::size_t n = p.size();
  const int bands = p.bands();

  long rank = -1;
  std::vector<Matrix> frames(n);
  Eigen::SelfAdjointEigenSolver<Matrix> solver;
  for (std::size_t i = 0; i < n; ++i) {
    require(detail::idempotency_defect(p[i]) < kGradingTol, errc::not_projection,
            "matrix at point " + std::to_string(i) + " is not idempotent");
    const long r = std::lround(p[i].trace().real());
    if (rank < 0) rank = r;
    require(r == rank, errc::not_projection,
            "projection rank changes across the grid");
    solver.compute(p[i]);
    long occupied = 0;
    for (Eigen::Index j = 0; j < solver.eigenvalues().size(); ++j) {
      if (solver.eigenvalues()[j] > 0.5) ++occupied;
    }
    require(occupied == rank, errc::not_projection,
            "eigenvalues at point " + std::to_string(i) + " are not near 0/1");
    frames[i] = solver.eigenvectors().rightCols(rank);
  }

  const auto link_phase = [&](std::size_t from, int axis) {
    const std::size_t to = p.grid().neighbor(from, axis, +1);
    const Complex det = rank == 0
                            ? Complex(1.0, 0.0)
                            : Complex((frames[from].adjoint() * frames[to]).determinant());
    require(std::abs(det) >= 1e-12, errc::singular_link,
            "vanishing link overlap leaving point " + std::to_string(from) +
                " along axis " + std::to_string(axis));
    return std::arg(det);
  };

  std::vector<double> theta_x(n), theta_y(n);
  for (std::size_t i = 0; i < n; ++i) {
    theta_x[i] = link_phase(i, 0);
    theta_y[i] = link_phase(i, 1);
  }

  std::vector<double> flux(n);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t right = p.grid().neighbor(i, 0, +1);
    const std::size_t up = p.grid().neighbor(i, 1, +1);
    flux[i] = detail::wrap_angle(theta_x[i] + theta_y[right] - theta_x[up] - theta_y[i]);
  }
  return flux;
}

/// First Chern number of a d=2 projection field.  Quantized to an integer by
/// construction: wrapping each plaquette flux shifts the telescoping link sum
/// by exact multiples of 2*pi.
inline InvariantReport chern_number(const HermitianField& p) {
  const std::vector<double> flux = plaquette_fluxes(p);
  double total = 0.0;
  for (double f : flux) total += f;
  return detail::make_report(InvariantKind::Chern2, total / kTwoPi,
                             p.grid().points_per_axis());
}

/// Degree-three winding of a d=3 unitary field,
///
///   W3 = -1/(24 pi^2) * integral of tr[(Q^+ dQ)^3],
///
/// where the antisymmetrized triple product collapses, by cyclicity of the
/// trace, to 3(tr[A0 A1 A2] - tr[A0 A2 A1]) with A_mu = Q^+ d_mu Q.
/// Derivatives use the 5-point central stencil: the 3-point truncation error
/// at L=32 (~3e-2 for degree-one maps) is too coarse for safe integer
/// rounding, the 5-point one (~1e-3) is not.
inline InvariantReport winding3(const UnitaryField& q) {
  require(q.grid().dimension() == 3, errc::wrong_dimension,
          "degree-3 winding is defined on d=3 grids");
  const BrillouinGrid& grid = q.grid();
  const std::size_t n = q.size();
  const double dk = grid.spacing();

  std::vector<Matrix> a[3];
  for (int axis = 0; axis < 3; ++axis) {
    a[axis].reserve(n);
    const double inv12 = 1.0 / (12.0 * dk);
    for (std::size_t i = 0; i < n; ++i) {
      const Matrix& f1 = q[grid.neighbor(i, axis, +1)];
      const Matrix& f2 = q[grid.neighbor(i, axis, +2)];
      const Matrix& b1 = q[grid.neighbor(i, axis, -1)];
      const Matrix& b2 = q[grid.neighbor(i, axis, -2)];
      const Matrix dq = (-f2 + 8.0 * f1 - 8.0 * b1 + b2) * inv12;
      a[axis].push_back((q[i].adjoint() * dq).eval());
    }
  }

  Complex total = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    total += (a[0][i] * a[1][i] * a[2][i]).trace();
    total -= (a[0][i] * a[2][i] * a[1][i]).trace();
  }
  const double raw = -total.real() * dk * dk * dk /
                     (8.0 * std::numbers::pi * std::numbers::pi);
  return detail::make_report(InvariantKind::Winding3, raw, grid.points_per_axis());
}

/// Winding of the obstruction from gamma_a to gamma_b: the invariant of
/// Q_b Q_a^+.  Unchanged when both gradings are conjugated by the same
/// S-commuting gauge field.
inline InvariantReport relative_winding(const GradingField& gamma_a,
                                        const GradingField& gamma_b,
                                        const ChiralOperator& s) {
  require(gamma_a.grid() == gamma_b.grid(), errc::band_mismatch, "grids differ");
  require(gamma_a.bands() == gamma_b.bands(), errc::band_mismatch,
          "band counts differ");
  const UnitaryField qa = extract_q(gamma_a, s);
  const UnitaryField qb = extract_q(gamma_b, s);
  std::vector<Matrix> rel;
  rel.reserve(qa.size());
  for (std::size_t i = 0; i < qa.size(); ++i) {
    rel.push_back((qb[i] * qa[i].adjoint()).eval());
  }
  return winding_number(UnitaryField(gamma_a.grid(), std::move(rel)));
}

}  // namespace bztopo
