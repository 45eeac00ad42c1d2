#pragma once

#include <stdexcept>
#include <string>

namespace bztopo {

/// Every failure mode the library reports, by name.
enum class errc {
  invalid_dimension,
  grid_too_small,
  axis_out_of_range,
  not_hermitian,
  gapless,
  band_mismatch,
  not_chiral,
  not_unitary,
  wrong_dimension,
  grid_too_coarse,
  singular_link,
  not_projection,
  not_grading,
  carrier_mismatch,
  midpoint_mismatch,
  unsupported_carrier,
  unknown_model,
  invalid_request,
};

inline const char* errc_name(errc code) noexcept {
  switch (code) {
    case errc::invalid_dimension: return "InvalidDimension";
    case errc::grid_too_small: return "GridTooSmall";
    case errc::axis_out_of_range: return "AxisOutOfRange";
    case errc::not_hermitian: return "NotHermitian";
    case errc::gapless: return "Gapless";
    case errc::band_mismatch: return "BandMismatch";
    case errc::not_chiral: return "NotChiral";
    case errc::not_unitary: return "NotUnitary";
    case errc::wrong_dimension: return "WrongDimension";
    case errc::grid_too_coarse: return "GridTooCoarse";
    case errc::singular_link: return "SingularLink";
    case errc::not_projection: return "NotProjection";
    case errc::not_grading: return "NotGrading";
    case errc::carrier_mismatch: return "CarrierMismatch";
    case errc::midpoint_mismatch: return "MidpointMismatch";
    case errc::unsupported_carrier: return "UnsupportedCarrier";
    case errc::unknown_model: return "UnknownModel";
    case errc::invalid_request: return "InvalidRequest";
  }
  return "Unknown";
}

/// Failures caused by the physics of the input (a closed gap, an unresolved
/// winding, a missing symmetry) rather than by a malformed request.
inline bool is_physics_error(errc code) noexcept {
  switch (code) {
    case errc::gapless:
    case errc::grid_too_coarse:
    case errc::not_chiral:
    case errc::singular_link:
      return true;
    default:
      return false;
  }
}

class Error : public std::runtime_error {
 public:
  Error(errc code, const std::string& detail)
      : std::runtime_error(std::string(errc_name(code)) + ": " + detail), code_(code) {}

  errc code() const noexcept { return code_; }
  const char* name() const noexcept { return errc_name(code_); }

 private:
  errc code_;
};

[[noreturn]] inline void fail(errc code, const std::string& detail) {
  throw Error(code, detail);
}

inline void require(bool condition, errc code, const std::string& detail) {
  if (!condition) fail(code, detail);
}

}  // namespace bztopo
