#include "hognn/error.hpp"

namespace hognn {

std::string_view to_string(ErrorCode code) {
  switch (code) {
  case ErrorCode::OutOfRange: return "OutOfRange";
  case ErrorCode::DuplicateEdge: return "DuplicateEdge";
  case ErrorCode::SizeMismatch: return "SizeMismatch";
  case ErrorCode::TooLarge: return "TooLarge";
  case ErrorCode::FeatureWidthMismatch: return "FeatureWidthMismatch";
  case ErrorCode::KindMismatch: return "KindMismatch";
  case ErrorCode::EmptyStructure: return "EmptyStructure";
  case ErrorCode::UnknownEntity: return "UnknownEntity";
  case ErrorCode::UnknownTuple: return "UnknownTuple";
  case ErrorCode::EmptyClass: return "EmptyClass";
  case ErrorCode::MotifTooLarge: return "MotifTooLarge";
  case ErrorCode::BoundsInverted: return "BoundsInverted";
  case ErrorCode::BudgetExceeded: return "BudgetExceeded";
  case ErrorCode::EmptyRelationSet: return "EmptyRelationSet";
  case ErrorCode::MixedTupleLengths: return "MixedTupleLengths";
  case ErrorCode::UnknownFunctionKind: return "UnknownFunctionKind";
  case ErrorCode::ShapeMismatch: return "ShapeMismatch";
  case ErrorCode::EmptyIncidence: return "EmptyIncidence";
  case ErrorCode::EmptyCollection: return "EmptyCollection";
  case ErrorCode::OuterRequiresVertexAnchoring: return "OuterRequiresVertexAnchoring";
  case ErrorCode::EmptyState: return "EmptyState";
  case ErrorCode::PreconditionFailed: return "PreconditionFailed";
  case ErrorCode::ParseError: return "ParseError";
  }
  return "Unknown";
}

} // namespace hognn
