#pragma once

#include <array>
#include <chrono>
#include <cstdint>
#include <cstdio>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include <json.hpp>

#include "bztopo/bloch.hpp"
#include "bztopo/chiral.hpp"
#include "bztopo/errors.hpp"
#include "bztopo/grid.hpp"
#include "bztopo/invariants.hpp"
#include "bztopo/ktheory.hpp"
#include "bztopo/models.hpp"
#include "bztopo/version.hpp"

namespace bztopo::cli {

using ojson = nlohmann::ordered_json;

enum class RequestKind { Winding1, Chern2, Winding3, RelativeWinding, TripleReduce };

inline const char* request_kind_name(RequestKind kind) {
  switch (kind) {
    case RequestKind::Winding1: return "winding1";
    case RequestKind::Chern2: return "chern2";
    case RequestKind::Winding3: return "winding3";
    case RequestKind::RelativeWinding: return "relative_winding";
    case RequestKind::TripleReduce: return "triple_reduce";
  }
  return "unknown";
}

inline std::optional<RequestKind> parse_request_kind(std::string_view name) {
  for (RequestKind kind : {RequestKind::Winding1, RequestKind::Chern2,
                           RequestKind::Winding3, RequestKind::RelativeWinding,
                           RequestKind::TripleReduce}) {
    if (name == request_kind_name(kind)) return kind;
  }
  return std::nullopt;
}

inline int invariant_dimension(RequestKind kind) {
  switch (kind) {
    case RequestKind::Chern2: return 2;
    case RequestKind::Winding3: return 3;
    default: return 1;
  }
}

struct ModelRequest {
  std::string model;
  std::map<std::string, double> params;

  friend bool operator==(const ModelRequest&, const ModelRequest&) = default;
};

struct RunRequest {
  ModelRequest model;
  std::optional<ModelRequest> model_b;  // set for relative requests
  int grid_length = 0;
  RequestKind invariant = RequestKind::Winding1;
  std::optional<std::string> output_path;
  bool emit_curve = false;

  friend bool operator==(const RunRequest&, const RunRequest&) = default;
};

struct RunReport {
  RunRequest request;
  std::optional<std::string> kind;
  std::optional<double> raw_value;
  std::optional<long> value;
  std::optional<double> residual;
  std::optional<double> gap;
  std::optional<std::string> error;
  std::int64_t wall_time_ms = 0;
  std::string tool_version = kVersion;

  // plot data, written separately from the report document
  std::vector<std::array<double, 2>> phase_curve;  // k, unwrapped phase
  std::vector<std::array<double, 4>> flux_curve;   // kx, ky, flux, cumulative
};

inline int exit_code(const RunReport& report) { return report.error ? 3 : 0; }

/// Exit code for an Error that escaped run(): physics failures are reported
/// in-band, so anything thrown is a bad request.
inline int exit_code_for(const Error& e) { return is_physics_error(e.code()) ? 3 : 2; }

// ---------------------------------------------------------------------------
// serialization (canonical key order; volatile fields last)
// ---------------------------------------------------------------------------

inline ojson request_to_json(const RunRequest& request) {
  ojson params = ojson::object();
  for (const auto& [key, value] : request.model.params) params[key] = value;
  ojson out = ojson::object();
  const bool is_relative = request.invariant == RequestKind::RelativeWinding ||
                           request.invariant == RequestKind::TripleReduce;
  out["command"] = is_relative ? "relative" : "compute";
  out["model"] = request.model.model;
  out["params"] = params;
  if (request.model_b) {
    ojson params_b = ojson::object();
    for (const auto& [key, value] : request.model_b->params) params_b[key] = value;
    out["model_b"] = ojson{{"model", request.model_b->model}, {"params", params_b}};
  } else {
    out["model_b"] = nullptr;
  }
  out["grid"] = request.grid_length;
  out["invariant"] = request_kind_name(request.invariant);
  out["emit_curve"] = request.emit_curve;
  return out;
}

inline ojson report_to_json(const RunReport& report) {
  ojson out = ojson::object();
  out["request"] = request_to_json(report.request);
  out["kind"] = report.kind ? ojson(*report.kind) : ojson(nullptr);
  out["raw_value"] = report.raw_value ? ojson(*report.raw_value) : ojson(nullptr);
  out["value"] = report.value ? ojson(*report.value) : ojson(nullptr);
  out["residual"] = report.residual ? ojson(*report.residual) : ojson(nullptr);
  out["gap"] = report.gap ? ojson(*report.gap) : ojson(nullptr);
  out["error"] = report.error ? ojson(*report.error) : ojson(nullptr);
  out["wall_time_ms"] = report.wall_time_ms;
  out["tool_version"] = report.tool_version;
  return out;
}

/// The report document: UTF-8, two-space indent, newline-terminated.
inline std::string report_to_string(const RunReport& report) {
  return report_to_json(report).dump(2) + "\n";
}

inline RunRequest request_from_json(const ojson& j) {
  RunRequest request;
  request.model.model = j.at("model").get<std::string>();
  for (const auto& [key, value] : j.at("params").items()) {
    request.model.params[key] = value.get<double>();
  }
  if (!j.at("model_b").is_null()) {
    ModelRequest b;
    b.model = j.at("model_b").at("model").get<std::string>();
    for (const auto& [key, value] : j.at("model_b").at("params").items()) {
      b.params[key] = value.get<double>();
    }
    request.model_b = std::move(b);
  }
  request.grid_length = j.at("grid").get<int>();
  const auto kind = parse_request_kind(j.at("invariant").get<std::string>());
  require(kind.has_value(), errc::invalid_request, "unknown invariant in report");
  request.invariant = *kind;
  request.emit_curve = j.at("emit_curve").get<bool>();
  return request;
}

inline RunReport report_from_json(const ojson& j) {
  RunReport report;
  report.request = request_from_json(j.at("request"));
  if (!j.at("kind").is_null()) report.kind = j.at("kind").get<std::string>();
  if (!j.at("raw_value").is_null()) report.raw_value = j.at("raw_value").get<double>();
  if (!j.at("value").is_null()) report.value = j.at("value").get<long>();
  if (!j.at("residual").is_null()) report.residual = j.at("residual").get<double>();
  if (!j.at("gap").is_null()) report.gap = j.at("gap").get<double>();
  if (!j.at("error").is_null()) report.error = j.at("error").get<std::string>();
  report.wall_time_ms = j.at("wall_time_ms").get<std::int64_t>();
  report.tool_version = j.at("tool_version").get<std::string>();
  return report;
}

/// Tab-separated plot data: (k, unwrapped phase) rows for d=1 requests,
/// (kx, ky, plaquette flux, cumulative flux) rows for d=2.
inline std::string curve_to_tsv(const RunReport& report) {
  char line[160];
  std::string out;
  if (!report.phase_curve.empty()) {
    out += "# k\tphase\n";
    for (const auto& row : report.phase_curve) {
      std::snprintf(line, sizeof(line), "%.17g\t%.17g\n", row[0], row[1]);
      out += line;
    }
  } else if (!report.flux_curve.empty()) {
    out += "# kx\tky\tflux\tcumulative\n";
    for (const auto& row : report.flux_curve) {
      std::snprintf(line, sizeof(line), "%.17g\t%.17g\t%.17g\t%.17g\n", row[0], row[1],
                    row[2], row[3]);
      out += line;
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// pipelines
// ---------------------------------------------------------------------------

namespace detail {

struct Prepared {
  BuiltModel field;
  double gap = 0.0;
};

inline Prepared prepare(const ModelRequest& request, const BrillouinGrid& grid) {
  ModelSpec spec{request.model, request.params, grid};
  BuiltModel built = build_model(spec);
  double gap = 0.0;
  if (const auto* h = std::get_if<HermitianField>(&built)) {
    gap = spectral_gap(*h);
  } else {
    gap = spectral_gap(gamma_from_q(std::get<UnitaryField>(built)));
  }
  return Prepared{std::move(built), gap};
}

/// Chiral-verified unitary block of a model: unitary models pass through,
/// Hamiltonian models are flattened and checked against the reference S.
inline UnitaryField as_unitary(const Prepared& prepared) {
  if (const auto* q = std::get_if<UnitaryField>(&prepared.field)) return *q;
  const auto& h = std::get<HermitianField>(prepared.field);
  require(h.bands() % 2 == 0, errc::not_chiral,
          "odd band count cannot host a chiral symmetry");
  const GradingField flat = flatten(h);
  const ChiralOperator s(h.bands());
  require(check_chiral(flat, s), errc::not_chiral,
          "model is not compatible with the chiral symmetry");
  return extract_q(flat, s);
}

inline GradingField as_grading(const Prepared& prepared) {
  if (const auto* q = std::get_if<UnitaryField>(&prepared.field)) return gamma_from_q(*q);
  const auto& h = std::get<HermitianField>(prepared.field);
  const GradingField flat = flatten(h);
  require(h.bands() % 2 == 0 && check_chiral(flat, ChiralOperator(h.bands())),
          errc::not_chiral, "model is not compatible with the chiral symmetry");
  return flat;
}

inline void attach_phase_curve(RunReport& report, const UnitaryField& q) {
  const std::vector<double> phase = unwrapped_phase(q);
  const double dk = q.grid().spacing();
  report.phase_curve.reserve(phase.size());
  for (std::size_t i = 0; i < phase.size(); ++i) {
    report.phase_curve.push_back({dk * static_cast<double>(i), phase[i]});
  }
}

inline void attach_flux_curve(RunReport& report, const HermitianField& projection) {
  const std::vector<double> flux = plaquette_fluxes(projection);
  const BrillouinGrid& grid = projection.grid();
  double cumulative = 0.0;
  report.flux_curve.reserve(flux.size());
  for (std::size_t i = 0; i < flux.size(); ++i) {
    cumulative += flux[i];
    const GridPoint p = grid.point(i);
    report.flux_curve.push_back({p.momentum[0], p.momentum[1], flux[i], cumulative});
  }
}

inline void fill_invariant(RunReport& report, const InvariantReport& invariant) {
  report.raw_value = invariant.raw_value;
  report.value = invariant.value;
  report.residual = invariant.residual;
}

}  // namespace detail

/// Build the model(s), verify the symmetries the invariant needs, compute it,
/// and assemble the report.  Physics failures (Gapless, GridTooCoarse,
/// NotChiral, SingularLink) are captured in the report; malformed requests
/// throw.
inline RunReport run(const RunRequest& request) {
  const auto started = std::chrono::steady_clock::now();
  RunReport report;
  report.request = request;
  report.kind = request_kind_name(request.invariant);

  const bool is_relative = request.invariant == RequestKind::RelativeWinding ||
                           request.invariant == RequestKind::TripleReduce;
  require(is_relative == request.model_b.has_value(), errc::invalid_request,
          is_relative ? "relative invariants need a second model"
                      : "only relative invariants take a second model");
  require(!(request.emit_curve && request.invariant == RequestKind::Winding3),
          errc::invalid_request, "no curve format is defined for winding3");

  const BrillouinGrid grid =
      make_grid(invariant_dimension(request.invariant), request.grid_length);

  try {
    switch (request.invariant) {
      case RequestKind::Winding1: {
        const detail::Prepared prepared = detail::prepare(request.model, grid);
        const UnitaryField q = detail::as_unitary(prepared);
        detail::fill_invariant(report, winding_number(q));
        report.gap = prepared.gap;
        if (request.emit_curve) detail::attach_phase_curve(report, q);
        break;
      }
      case RequestKind::Chern2: {
        const detail::Prepared prepared = detail::prepare(request.model, grid);
        const auto* h = std::get_if<HermitianField>(&prepared.field);
        require(h != nullptr, errc::invalid_request,
                "chern2 needs a Hamiltonian model");
        const HermitianField projection = valence_projection(*h);
        detail::fill_invariant(report, chern_number(projection));
        report.gap = prepared.gap;
        if (request.emit_curve) detail::attach_flux_curve(report, projection);
        break;
      }
      case RequestKind::Winding3: {
        const detail::Prepared prepared = detail::prepare(request.model, grid);
        detail::fill_invariant(report, winding3(detail::as_unitary(prepared)));
        report.gap = prepared.gap;
        break;
      }
      case RequestKind::RelativeWinding:
      case RequestKind::TripleReduce: {
        const detail::Prepared prepared_a = detail::prepare(request.model, grid);
        const detail::Prepared prepared_b = detail::prepare(*request.model_b, grid);
        const GradingField gamma_a = detail::as_grading(prepared_a);
        const GradingField gamma_b = detail::as_grading(prepared_b);
        require(gamma_a.bands() == gamma_b.bands(), errc::band_mismatch,
                "models have different band counts");
        const ChiralOperator s(gamma_a.bands());
        InvariantReport rel{};
        if (request.invariant == RequestKind::TripleReduce) {
          const KaroubiTriple triple = KaroubiTriple::torus(gamma_a, gamma_b, s);
          rel = relative_winding(gamma_a, gamma_b, s);
          rel.value = reduce_torus(triple).value;
        } else {
          rel = relative_winding(gamma_a, gamma_b, s);
        }
        detail::fill_invariant(report, rel);
        report.gap = std::min(prepared_a.gap, prepared_b.gap);
        if (request.emit_curve) {
          const UnitaryField qa = extract_q(gamma_a, s);
          const UnitaryField qb = extract_q(gamma_b, s);
          std::vector<Matrix> relative_field;
          relative_field.reserve(qa.size());
          for (std::size_t i = 0; i < qa.size(); ++i) {
            relative_field.push_back((qb[i] * qa[i].adjoint()).eval());
          }
          detail::attach_phase_curve(report,
                                     UnitaryField(grid, std::move(relative_field)));
        }
        break;
      }
    }
  } catch (const Error& e) {
    if (!is_physics_error(e.code())) throw;
    report.error = e.name();
    report.raw_value.reset();
    report.value.reset();
    report.residual.reset();
    report.gap.reset();
  }

  report.wall_time_ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                            std::chrono::steady_clock::now() - started)
                            .count();
  return report;
}

/// Relative obstruction between two models.  This, not the absolute winding,
/// is the gauge-independent quantity: conjugating both models by the same
/// S-commuting gauge field shifts their individual windings and leaves the
/// relative one fixed.
inline RunReport relative(const RunRequest& request) {
  require(request.invariant == RequestKind::RelativeWinding ||
              request.invariant == RequestKind::TripleReduce,
          errc::invalid_request, "relative() handles relative invariants only");
  return run(request);
}

}  // namespace bztopo::cli
