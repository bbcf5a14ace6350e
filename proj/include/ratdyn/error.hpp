#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace ratdyn {

enum class ErrorKind {
  Validation,
  PoleDerivative,
  DegenerateFamily,
  NotInFamilySlice,
  SolverFailure,
  NoConvergence,
  NotInBasin,
  SuperattractingFixedPoint,
  NotAttracting,
  LevelOutsideWindow,
  NoEscapingCritical,
  MultipleEscaping,
  HypothesisFailed,
  LevelIntervalEmpty,
  NoInvariantCut,
  ComponentCountMismatch,
  EscapeFromTrap,
  LeftTrap,
  UnstableAtResolution,
  NoSignChange,
  SamePredicateValue,
  IoError,
};

std::string_view to_string(ErrorKind kind);

/// Process exit code for a failure of this kind: 2 validation, 3 numerical,
/// 4 hypothesis/precondition about the dynamics, 1 for I/O.
int exit_code_for(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what, long step = -1)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind), step_(step) {}

  ErrorKind kind() const noexcept { return kind_; }
  /// Iteration index attached to LeftTrap / EscapeFromTrap, -1 otherwise.
  long step() const noexcept { return step_; }

 private:
  ErrorKind kind_;
  long step_;
};

}  // namespace ratdyn
