#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace hognn {

enum class ErrorCode {
  OutOfRange,
  DuplicateEdge,
  SizeMismatch,
  TooLarge,
  FeatureWidthMismatch,
  KindMismatch,
  EmptyStructure,
  UnknownEntity,
  UnknownTuple,
  EmptyClass,
  MotifTooLarge,
  BoundsInverted,
  BudgetExceeded,
  EmptyRelationSet,
  MixedTupleLengths,
  UnknownFunctionKind,
  ShapeMismatch,
  EmptyIncidence,
  EmptyCollection,
  OuterRequiresVertexAnchoring,
  EmptyState,
  PreconditionFailed,
  ParseError,
};

std::string_view to_string(ErrorCode code);

/// Exception carrying one of the library's error codes.
class Error : public std::runtime_error {
public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

private:
  ErrorCode code_;
};

} // namespace hognn
