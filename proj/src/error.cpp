#include "macrorealism/error.hpp"

namespace macrorealism {

std::string_view to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::Overflow: return "Overflow";
    case ErrorKind::DomainError: return "DomainError";
    case ErrorKind::PhaseSingular: return "PhaseSingular";
    case ErrorKind::BadGrid: return "BadGrid";
    case ErrorKind::QuadratureFailure: return "QuadratureFailure";
    case ErrorKind::NegativeC: return "NegativeC";
    case ErrorKind::BadConfig: return "BadConfig";
    case ErrorKind::NormDrift: return "NormDrift";
    case ErrorKind::BoundaryOutsideGrid: return "BoundaryOutsideGrid";
    case ErrorKind::NonPositiveInput: return "NonPositiveInput";
    case ErrorKind::InvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

}  // namespace macrorealism
