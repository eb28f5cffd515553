#pragma once

#include <stdexcept>
#include <string>

namespace bloch {

enum class ErrorCode {
  degenerate_lattice,
  zero_bloch_vector,
  subdivision_too_large,
  parse_error,
  open_surface,
  inconsistent_orientation,
  inverted_orientation,
  mesh_too_large,
  singular_system,
  non_unit_direction,
  domain_error,
  resonant_radius,
  order_out_of_range,
  asymmetric_tensor,
  volume_fraction_too_large,
  mismatched_inputs,
  io_error,
  invalid_argument,
  numeric_check_failed,
};

inline const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::degenerate_lattice: return "DegenerateLattice";
    case ErrorCode::zero_bloch_vector: return "ZeroBlochVector";
    case ErrorCode::subdivision_too_large: return "SubdivisionTooLarge";
    case ErrorCode::parse_error: return "ParseError";
    case ErrorCode::open_surface: return "OpenSurface";
    case ErrorCode::inconsistent_orientation: return "InconsistentOrientation";
    case ErrorCode::inverted_orientation: return "InvertedOrientation";
    case ErrorCode::mesh_too_large: return "MeshTooLarge";
    case ErrorCode::singular_system: return "SingularSystem";
    case ErrorCode::non_unit_direction: return "NonUnitDirection";
    case ErrorCode::domain_error: return "DomainError";
    case ErrorCode::resonant_radius: return "ResonantRadius";
    case ErrorCode::order_out_of_range: return "OrderOutOfRange";
    case ErrorCode::asymmetric_tensor: return "AsymmetricTensor";
    case ErrorCode::volume_fraction_too_large: return "VolumeFractionTooLarge";
    case ErrorCode::mismatched_inputs: return "MismatchedInputs";
    case ErrorCode::io_error: return "IoError";
    case ErrorCode::invalid_argument: return "InvalidArgument";
    case ErrorCode::numeric_check_failed: return "NumericCheckFailed";
  }
  return "UnknownError";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace bloch
