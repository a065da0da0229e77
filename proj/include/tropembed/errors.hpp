#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace tropembed {

enum class ErrorCode {
  // metric graphs
  LengthMismatch,
  NotRemovable,
  InfiniteVertex,
  UnknownEdge,
  UnknownVertex,
  // lattice geometry
  DegenerateSegment,
  NonRationalSlope,
  OverlapError,
  TouchingElements,
  MultipleCrossing,
  NotUnimodular,
  // planar layout
  BudgetExceeded,
  NotPlanar,
  NeighborhoodConflict,
  PerturbationFailed,
  // cr\'eneaux
  InvalidTarget,
  FrameMismatch,
  // value group
  NotInLambda,
  NonPositiveLength,
  NotOnSegment,
  UndecidableComparison,
  GeneratorMismatch,
  // io
  ParseError,
  SchemaError,
};

std::string_view to_string(ErrorCode code) noexcept;

/// Every failure raised by the library carries one of the codes above so
/// callers (and tests) can branch on the category rather than the message.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace tropembed
