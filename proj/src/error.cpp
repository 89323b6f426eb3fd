#include "opball/error.hpp"

namespace opball {

std::string_view error_name(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::NotHermitian: return "NotHermitian";
    case ErrorKind::NotPSD: return "NotPSD";
    case ErrorKind::DomainError: return "DomainError";
    case ErrorKind::ShapeMismatch: return "ShapeMismatch";
    case ErrorKind::InvalidMatrix: return "InvalidMatrix";
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::BoundaryProximity: return "BoundaryProximity";
    case ErrorKind::SingularResolvent: return "SingularResolvent";
    case ErrorKind::SingularDenominator: return "SingularDenominator";
    case ErrorKind::NotEtaPreserving: return "NotEtaPreserving";
    case ErrorKind::ZeroInput: return "ZeroInput";
    case ErrorKind::ParameterOverflow: return "ParameterOverflow";
    case ErrorKind::CoincidentPoints: return "CoincidentPoints";
    case ErrorKind::InvalidDirection: return "InvalidDirection";
    case ErrorKind::GridTooCoarse: return "GridTooCoarse";
    case ErrorKind::ClosureExceeded: return "ClosureExceeded";
    case ErrorKind::NotElliptic: return "NotElliptic";
    case ErrorKind::MaxIterations: return "MaxIterations";
    case ErrorKind::PreconditionUnmet: return "PreconditionUnmet";
    case ErrorKind::NotNegative: return "NotNegative";
    case ErrorKind::DegenerateGraph: return "DegenerateGraph";
    case ErrorKind::FixedPointFailed: return "FixedPointFailed";
    case ErrorKind::DegenerateSplit: return "DegenerateSplit";
    case ErrorKind::InvalidRepresentation: return "InvalidRepresentation";
    case ErrorKind::UnknownGroup: return "UnknownGroup";
    case ErrorKind::ParseError: return "ParseError";
    case ErrorKind::ShapeError: return "ShapeError";
  }
  return "Unknown";
}

Error::Error(ErrorKind kind, const std::string& detail)
    : std::runtime_error(std::string(error_name(kind)) + ": " + detail), kind_(kind), detail_(detail) {}

}  // namespace opball
