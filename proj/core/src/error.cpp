#include "cot_atlas/error.hpp"

namespace cot_atlas {

std::string_view error_kind_name(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::Unreachable: return "Unreachable";
    case ErrorKind::SingularJacobian: return "SingularJacobian";
    case ErrorKind::NumericalBlowup: return "NumericalBlowup";
    case ErrorKind::FrictionConeInfeasible: return "FrictionConeInfeasible";
    case ErrorKind::Timeout: return "Timeout";
    case ErrorKind::WindowOutOfRange: return "WindowOutOfRange";
    case ErrorKind::ZeroDistance: return "ZeroDistance";
    case ErrorKind::TooManySingularRows: return "TooManySingularRows";
    case ErrorKind::InsufficientOverlap: return "InsufficientOverlap";
    case ErrorKind::AllTrialsFailed: return "AllTrialsFailed";
    case ErrorKind::ParseError: return "ParseError";
    case ErrorKind::UnknownKey: return "UnknownKey";
    case ErrorKind::InvariantViolation: return "InvariantViolation";
    case ErrorKind::SchemaError: return "SchemaError";
    case ErrorKind::NonMonotoneTime: return "NonMonotoneTime";
    case ErrorKind::UnitSanity: return "UnitSanity";
    case ErrorKind::Io: return "Io";
  }
  return "Unknown";
}

}  // namespace cot_atlas
