#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "bztopo/bloch.hpp"
#include "bztopo/chiral.hpp"
#include "bztopo/detail/linalg.hpp"
#include "bztopo/detail/random.hpp"
#include "bztopo/errors.hpp"
#include "bztopo/grid.hpp"

namespace bztopo {

namespace detail {

inline const Matrix& pauli(int i) {
  static const Matrix sx = [] {
    Matrix m(2, 2);
    m << 0, 1, 1, 0;
    return m;
  }();
  static const Matrix sy = [] {
    Matrix m(2, 2);
    m << Complex(0, 0), Complex(0, -1), Complex(0, 1), Complex(0, 0);
    return m;
  }();
  static const Matrix sz = [] {
    Matrix m(2, 2);
    m << 1, 0, 0, -1;
    return m;
  }();
  switch (i) {
    case 0: return sx;
    case 1: return sy;
    default: return sz;
  }
}

}  // namespace detail

/// Pure phase q_n(k) = e^{-ink}, the rank-one field with winding +n.
inline UnitaryField build_qn(int n, const BrillouinGrid& grid) {
  require(grid.dimension() == 1, errc::wrong_dimension, "q_n lives on a d=1 grid");
  return UnitaryField::build(grid, [n](const GridPoint& p) {
    Matrix q(1, 1);
    q(0, 0) = std::exp(Complex(0.0, -static_cast<double>(n) * p.momentum[0]));
    return q;
  });
}

/// Two-band chiral chain H(k) = [[0, t1 + t2 e^{-ik}], [t1 + t2 e^{ik}, 0]].
/// Gapped iff |t1| != |t2|; winding 0 for |t1| > |t2| and +1 otherwise.
inline HermitianField build_ssh(double t1, double t2, const BrillouinGrid& grid) {
  require(grid.dimension() == 1, errc::wrong_dimension, "the chain lives on a d=1 grid");
  require(std::abs(std::abs(t1) - std::abs(t2)) > 1e-12, errc::gapless,
          "|t1| = |t2| closes the gap");
  return HermitianField::build(grid, [t1, t2](const GridPoint& p) {
    const Complex hop = t1 + t2 * std::exp(Complex(0.0, -p.momentum[0]));
    Matrix h(2, 2);
    h << 0.0, hop, std::conj(hop), 0.0;
    return h;
  });
}

/// Two-band Chern insulator
/// H(k) = sin kx sx + sin ky sy + (m - cos kx - cos ky) sz.
/// Chern number 0 for |m| > 2, +1 for 0 < m < 2, -1 for -2 < m < 0;
/// gap closes at m in {-2, 0, 2}.
inline HermitianField build_qwz(double m, const BrillouinGrid& grid) {
  require(grid.dimension() == 2, errc::wrong_dimension, "this model lives on a d=2 grid");
  for (double critical : {-2.0, 0.0, 2.0}) {
    require(std::abs(m - critical) > 1e-12, errc::gapless,
            "gap closes at m = " + std::to_string(critical));
  }
  return HermitianField::build(grid, [m](const GridPoint& p) {
    const double kx = p.momentum[0];
    const double ky = p.momentum[1];
    return (std::sin(kx) * detail::pauli(0) + std::sin(ky) * detail::pauli(1) +
            (m - std::cos(kx) - std::cos(ky)) * detail::pauli(2))
        .eval();
  });
}

/// SU(2) field exp(i f(k) ghat(k).sigma) with f = atan2(|g|, mass - sum cos)
/// and g = (sin kx, sin ky, sin kz): the lattice map of degree +1 for
/// 1 < mass < 3.  `strength` scales the rotation profile; 0 gives the
/// constant field.
inline UnitaryField build_degree_map(const BrillouinGrid& grid, double mass = 2.0,
                                     double strength = 1.0) {
  require(grid.dimension() == 3, errc::wrong_dimension,
          "the degree map lives on a d=3 grid");
  return UnitaryField::build(grid, [mass, strength](const GridPoint& p) {
    const double n0 = mass - std::cos(p.momentum[0]) - std::cos(p.momentum[1]) -
                      std::cos(p.momentum[2]);
    const double gx = std::sin(p.momentum[0]);
    const double gy = std::sin(p.momentum[1]);
    const double gz = std::sin(p.momentum[2]);
    const double gn = std::sqrt(gx * gx + gy * gy + gz * gz);
    Matrix axis;
    if (gn > 1e-12) {
      axis = (gx * detail::pauli(0) + gy * detail::pauli(1) + gz * detail::pauli(2)) / gn;
    } else {
      axis = detail::pauli(2);  // rotation angle is 0 or pi here, axis immaterial
    }
    const double angle = strength * std::atan2(gn, n0);
    return (std::cos(angle) * Matrix::Identity(2, 2) +
            Complex(0.0, 1.0) * std::sin(angle) * axis)
        .eval();
  });
}

/// Seeded pseudo-random Hermitian field with spectral gap at least `gap`:
/// each spectrum is pushed away from zero by shifting |eigenvalue| up by the
/// requested gap.  Same seed, same field, bit for bit.
inline HermitianField build_random_gapped(std::uint64_t seed, int bands, double gap,
                                          const BrillouinGrid& grid) {
  require(bands >= 1, errc::invalid_request, "need at least one band");
  require(gap > 0.0, errc::invalid_request, "gap must be positive");
  detail::RandomStream rng(seed);
  std::vector<Matrix> values;
  values.reserve(grid.size());
  Eigen::SelfAdjointEigenSolver<Matrix> solver;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    Matrix a(bands, bands);
    for (int r = 0; r < bands; ++r) {
      for (int c = 0; c < bands; ++c) a(r, c) = rng.complex_symmetric();
    }
    Matrix h = ((a + a.adjoint()) / 2.0).eval();
    solver.compute(h);
    Eigen::VectorXd shifted = solver.eigenvalues().unaryExpr([gap](double ev) {
      return ev >= 0.0 ? ev + gap : ev - gap;
    });
    Matrix out = solver.eigenvectors() * shifted.asDiagonal() *
                 solver.eigenvectors().adjoint();
    values.push_back(((out + out.adjoint()) / 2.0).eval());
  }
  return HermitianField(grid, std::move(values));
}

/// A named model request: which builder to run and with which parameters.
struct ModelSpec {
  std::string name;
  std::map<std::string, double> parameters;
  BrillouinGrid grid;
};

struct ModelInfo {
  int dimension = 0;  // 0: dimension comes from the "d" parameter
  std::vector<std::string> required;
  std::map<std::string, double> optional;
};

/// Registered model names and their parameter keys (the CLI contract).
inline const std::map<std::string, ModelInfo>& model_catalog() {
  static const std::map<std::string, ModelInfo> catalog = {
      {"qn", {1, {"n"}, {}}},
      {"ssh", {1, {"t1", "t2"}, {}}},
      {"qwz", {2, {"m"}, {}}},
      {"degree", {3, {}, {{"mass", 2.0}, {"strength", 1.0}}}},
      {"random", {0, {"d", "seed", "bands", "gap"}, {}}},
  };
  return catalog;
}

using BuiltModel = std::variant<HermitianField, UnitaryField>;

namespace detail {

inline long integral_parameter(const std::string& key, double value) {
  const double rounded = std::round(value);
  require(std::abs(value - rounded) <= 1e-9, errc::invalid_request,
          "parameter '" + key + "' must be an integer, got " + std::to_string(value));
  return static_cast<long>(rounded);
}

}  // namespace detail

/// Build the named model on the spec's grid.  Unknown names, missing keys and
/// stray keys are rejected before any physics runs.
inline BuiltModel build_model(const ModelSpec& spec) {
  const auto& catalog = model_catalog();
  const auto entry = catalog.find(spec.name);
  require(entry != catalog.end(), errc::unknown_model, "no model named '" + spec.name + "'");
  const ModelInfo& info = entry->second;

  std::map<std::string, double> params = spec.parameters;
  for (const std::string& key : info.required) {
    require(params.count(key) == 1, errc::invalid_request,
            "model '" + spec.name + "' needs parameter '" + key + "'");
  }
  for (const auto& [key, fallback] : info.optional) {
    if (!params.count(key)) params[key] = fallback;
  }
  for (const auto& [key, value] : params) {
    (void)value;
    const bool known = info.optional.count(key) ||
                       std::count(info.required.begin(), info.required.end(), key);
    require(known, errc::invalid_request,
            "model '" + spec.name + "' has no parameter '" + key + "'");
  }

  const int dimension =
      info.dimension > 0
          ? info.dimension
          : static_cast<int>(detail::integral_parameter("d", params.at("d")));
  require(spec.grid.dimension() == dimension, errc::wrong_dimension,
          "model '" + spec.name + "' needs a d=" + std::to_string(dimension) + " grid");

  if (spec.name == "qn") {
    return build_qn(static_cast<int>(detail::integral_parameter("n", params.at("n"))),
                    spec.grid);
  }
  if (spec.name == "ssh") {
    return build_ssh(params.at("t1"), params.at("t2"), spec.grid);
  }
  if (spec.name == "qwz") {
    return build_qwz(params.at("m"), spec.grid);
  }
  if (spec.name == "degree") {
    return build_degree_map(spec.grid, params.at("mass"), params.at("strength"));
  }
  const long seed = detail::integral_parameter("seed", params.at("seed"));
  require(seed >= 0, errc::invalid_request, "seed must be non-negative");
  const long bands = detail::integral_parameter("bands", params.at("bands"));
  return build_random_gapped(static_cast<std::uint64_t>(seed), static_cast<int>(bands),
                             params.at("gap"), spec.grid);
}

}  // namespace bztopo
