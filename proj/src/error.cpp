#include "tjdrag/error.hpp"

namespace tjdrag {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::DegenerateParametrization: return "DegenerateParametrization";
    case ErrorKind::IndexOutOfRange: return "IndexOutOfRange";
    case ErrorKind::EmptyInput: return "EmptyInput";
    case ErrorKind::NonFiniteInput: return "NonFiniteInput";
    case ErrorKind::KinkPoint: return "KinkPoint";
    case ErrorKind::SigmaNonpositive: return "SigmaNonpositive";
    case ErrorKind::NonMonotoneReparametrization: return "NonMonotoneReparametrization";
    case ErrorKind::GeometricCompatibilityRequired: return "GeometricCompatibilityRequired";
    case ErrorKind::DegenerateFrozenCoefficient: return "DegenerateFrozenCoefficient";
    case ErrorKind::InputGridMismatch: return "InputGridMismatch";
    case ErrorKind::AnchorSingularity: return "AnchorSingularity";
    case ErrorKind::ConstructionFailed: return "ConstructionFailed";
    case ErrorKind::ConfigError: return "ConfigError";
  }
  return "Unknown";
}

}  // namespace tjdrag
