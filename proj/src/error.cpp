#include "bilin/error.hpp"

namespace bilin {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidArgument: return "InvalidArgument";
    case ErrorCode::kDimensionMismatch: return "DimensionMismatch";
    case ErrorCode::kNumericalBreakdown: return "NumericalBreakdown";
    case ErrorCode::kEnumerationTooLarge: return "EnumerationTooLarge";
    case ErrorCode::kUnboundedCoordinate: return "UnboundedCoordinate";
    case ErrorCode::kPreconditionViolated: return "PreconditionViolated";
    case ErrorCode::kInfeasibleRestriction: return "InfeasibleRestriction";
    case ErrorCode::kModelError: return "ModelError";
    case ErrorCode::kGeneratorExhausted: return "GeneratorExhausted";
    case ErrorCode::kTooManyVariables: return "TooManyVariables";
    case ErrorCode::kParseError: return "ParseError";
  }
  return "Unknown";
}

}  // namespace bilin
