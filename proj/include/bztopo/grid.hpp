#pragma once

#include <array>
#include <complex>
#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "bztopo/detail/linalg.hpp"
#include "bztopo/errors.hpp"

namespace bztopo {

/// One momentum-space sample: integer indices plus the momentum they label.
/// Unused axes are zero.
struct GridPoint {
  std::size_t flat = 0;
  std::array<int, 3> indices{0, 0, 0};
  std::array<double, 3> momentum{0.0, 0.0, 0.0};
};

/// Uniform discretization of the torus [0, 2pi)^d with the same number of
/// points L on every axis.  Points are ordered row-major with axis 0 slowest,
/// and all index arithmetic wraps periodically.
class BrillouinGrid {
 public:
  BrillouinGrid(int dimension, int points_per_axis)
      : dimension_(dimension), length_(points_per_axis) {
    require(dimension >= 1 && dimension <= 3, errc::invalid_dimension,
            "dimension must be 1, 2 or 3, got " + std::to_string(dimension));
    require(points_per_axis >= 2, errc::grid_too_small,
            "need at least 2 points per axis, got " + std::to_string(points_per_axis));
    spacing_ = kTwoPi / static_cast<double>(length_);
  }

  int dimension() const { return dimension_; }
  int points_per_axis() const { return length_; }
  double spacing() const { return spacing_; }

  std::size_t size() const {
    std::size_t n = 1;
    for (int a = 0; a < dimension_; ++a) n *= static_cast<std::size_t>(length_);
    return n;
  }

  /// Stride of an axis in the flat row-major ordering (axis 0 slowest).
  std::size_t stride(int axis) const {
    check_axis(axis);
    std::size_t s = 1;
    for (int a = axis + 1; a < dimension_; ++a) s *= static_cast<std::size_t>(length_);
    return s;
  }

  std::array<int, 3> indices(std::size_t flat) const {
    std::array<int, 3> out{0, 0, 0};
    for (int a = dimension_ - 1; a >= 0; --a) {
      out[a] = static_cast<int>(flat % static_cast<std::size_t>(length_));
      flat /= static_cast<std::size_t>(length_);
    }
    return out;
  }

  /// Flat index of a (possibly out-of-range) index tuple, wrapped per axis.
  std::size_t flat_index(const std::array<int, 3>& idx) const {
    std::size_t flat = 0;
    for (int a = 0; a < dimension_; ++a) flat = flat * length_ + wrap(idx[a]);
    return flat;
  }

  GridPoint point(std::size_t flat) const {
    GridPoint p;
    p.flat = flat;
    p.indices = indices(flat);
    for (int a = 0; a < dimension_; ++a) p.momentum[a] = spacing_ * p.indices[a];
    return p;
  }

  /// Periodic neighbor `steps` grid points away along `axis`.
  std::size_t neighbor(std::size_t flat, int axis, int steps) const {
    check_axis(axis);
    auto idx = indices(flat);
    idx[axis] += steps;
    return flat_index(idx);
  }

  /// Index of -k (componentwise periodic reflection).
  std::size_t reflection(std::size_t flat) const {
    auto idx = indices(flat);
    for (int a = 0; a < dimension_; ++a) idx[a] = -idx[a];
    return flat_index(idx);
  }

  friend bool operator==(const BrillouinGrid&, const BrillouinGrid&) = default;

 private:
  void check_axis(int axis) const {
    require(axis >= 0 && axis < dimension_, errc::axis_out_of_range,
            "axis " + std::to_string(axis) + " on a " + std::to_string(dimension_) +
                "-dimensional grid");
  }

  int wrap(int i) const {
    int r = i % length_;
    return r < 0 ? r + length_ : r;
  }

  int dimension_;
  int length_;
  double spacing_;
};

inline BrillouinGrid make_grid(int dimension, int points_per_axis) {
  return BrillouinGrid(dimension, points_per_axis);
}

/// Riemann sum over the torus, which on a periodic uniform grid coincides
/// with the trapezoid rule.  Summation runs in flat-index order so repeated
/// runs are bit-identical.
template <class Field>
std::complex<double> integrate(const BrillouinGrid& grid, Field&& field) {
  std::complex<double> total = 0.0;
  const std::size_t n = grid.size();
  for (std::size_t i = 0; i < n; ++i) total += field(grid.point(i));
  double weight = 1.0;
  for (int a = 0; a < grid.dimension(); ++a) weight *= grid.spacing();
  return total * weight;
}

/// Evaluate a matrix-valued function at every grid point, flat order.
template <class Fn>
std::vector<Matrix> sample(const BrillouinGrid& grid, Fn&& fn) {
  std::vector<Matrix> out;
  const std::size_t n = grid.size();
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) out.push_back(fn(grid.point(i)));
  return out;
}

/// Second-order central difference with periodic wrap:
/// (f(k + dk e_axis) - f(k - dk e_axis)) / (2 dk).
inline std::vector<Matrix> finite_difference(const BrillouinGrid& grid,
                                             const std::vector<Matrix>& field, int axis) {
  require(field.size() == grid.size(), errc::invalid_request,
          "field has " + std::to_string(field.size()) + " samples, grid has " +
              std::to_string(grid.size()));
  const double inv = 1.0 / (2.0 * grid.spacing());
  std::vector<Matrix> out;
  out.reserve(field.size());
  for (std::size_t i = 0; i < field.size(); ++i) {
    const Matrix& fwd = field[grid.neighbor(i, axis, +1)];
    const Matrix& bwd = field[grid.neighbor(i, axis, -1)];
    out.push_back((fwd - bwd) * inv);
  }
  return out;
}

}  // namespace bztopo
