#include "tropembed/errors.hpp"

namespace tropembed {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::LengthMismatch: return "LengthMismatch";
    case ErrorCode::NotRemovable: return "NotRemovable";
    case ErrorCode::InfiniteVertex: return "InfiniteVertex";
    case ErrorCode::UnknownEdge: return "UnknownEdge";
    case ErrorCode::UnknownVertex: return "UnknownVertex";
    case ErrorCode::DegenerateSegment: return "DegenerateSegment";
    case ErrorCode::NonRationalSlope: return "NonRationalSlope";
    case ErrorCode::OverlapError: return "OverlapError";
    case ErrorCode::TouchingElements: return "TouchingElements";
    case ErrorCode::MultipleCrossing: return "MultipleCrossing";
    case ErrorCode::NotUnimodular: return "NotUnimodular";
    case ErrorCode::BudgetExceeded: return "BudgetExceeded";
    case ErrorCode::NotPlanar: return "NotPlanar";
    case ErrorCode::NeighborhoodConflict: return "NeighborhoodConflict";
    case ErrorCode::PerturbationFailed: return "PerturbationFailed";
    case ErrorCode::InvalidTarget: return "InvalidTarget";
    case ErrorCode::FrameMismatch: return "FrameMismatch";
    case ErrorCode::NotInLambda: return "NotInLambda";
    case ErrorCode::NonPositiveLength: return "NonPositiveLength";
    case ErrorCode::NotOnSegment: return "NotOnSegment";
    case ErrorCode::UndecidableComparison: return "UndecidableComparison";
    case ErrorCode::GeneratorMismatch: return "GeneratorMismatch";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::SchemaError: return "SchemaError";
  }
  return "Unknown";
}

}  // namespace tropembed
