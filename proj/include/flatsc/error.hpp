#pragma once

#include <stdexcept>
#include <string>

namespace flatsc {

enum class ErrorCode {
  ParseError,
  GluingMismatch,
  NonConvexPolygon,
  Disconnected,
  BadConeAngle,
  StratumError,
  SingularMatrix,
  FieldMismatch,
  UnknownName,
  DirectionLeavesField,
  NoHitWithinBudget,
  PreconditionViolated,
  UnknownVertex,
  NotPairwiseDisjoint,
  UnknownFormat,
  SeedNotDisjoint,
  UnknownEdge,
  AnchorInvalid,
  HypothesisViolated,
  UnknownCylinderStatus,
  NotAnEdge,
  BadGenerator,
  NoTriangleInTruncation,
  NotFlippable,
  UnreachableInTruncation,
  Internal,
};

const char* error_code_name(ErrorCode code);

/// All domain failures surface as this exception; `code()` is stable and
/// is what the CLI prints in its {"error": ...} object.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& detail)
      : std::runtime_error(detail), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace flatsc
