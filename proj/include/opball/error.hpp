#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace opball {

// Every failure the library reports carries one of these kinds. The names are
// a stable contract: the CLI prints them verbatim in its `error` field.
enum class ErrorKind {
  NotHermitian,
  NotPSD,
  DomainError,
  ShapeMismatch,
  InvalidMatrix,
  InvalidArgument,
  BoundaryProximity,
  SingularResolvent,
  SingularDenominator,
  NotEtaPreserving,
  ZeroInput,
  ParameterOverflow,
  CoincidentPoints,
  InvalidDirection,
  GridTooCoarse,
  ClosureExceeded,
  NotElliptic,
  MaxIterations,
  PreconditionUnmet,
  NotNegative,
  DegenerateGraph,
  FixedPointFailed,
  DegenerateSplit,
  InvalidRepresentation,
  UnknownGroup,
  ParseError,
  ShapeError,
};

std::string_view error_name(ErrorKind kind) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& detail);

  ErrorKind kind() const noexcept { return kind_; }
  std::string_view name() const noexcept { return error_name(kind_); }
  const std::string& detail() const noexcept { return detail_; }

 private:
  ErrorKind kind_;
  std::string detail_;
};

}  // namespace opball
