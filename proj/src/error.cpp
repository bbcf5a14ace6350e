#include "ratdyn/error.hpp"

namespace ratdyn {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::Validation: return "Validation";
    case ErrorKind::PoleDerivative: return "PoleDerivative";
    case ErrorKind::DegenerateFamily: return "DegenerateFamily";
    case ErrorKind::NotInFamilySlice: return "NotInFamilySlice";
    case ErrorKind::SolverFailure: return "SolverFailure";
    case ErrorKind::NoConvergence: return "NoConvergence";
    case ErrorKind::NotInBasin: return "NotInBasin";
    case ErrorKind::SuperattractingFixedPoint: return "SuperattractingFixedPoint";
    case ErrorKind::NotAttracting: return "NotAttracting";
    case ErrorKind::LevelOutsideWindow: return "LevelOutsideWindow";
    case ErrorKind::NoEscapingCritical: return "NoEscapingCritical";
    case ErrorKind::MultipleEscaping: return "MultipleEscaping";
    case ErrorKind::HypothesisFailed: return "HypothesisFailed";
    case ErrorKind::LevelIntervalEmpty: return "LevelIntervalEmpty";
    case ErrorKind::NoInvariantCut: return "NoInvariantCut";
    case ErrorKind::ComponentCountMismatch: return "ComponentCountMismatch";
    case ErrorKind::EscapeFromTrap: return "EscapeFromTrap";
    case ErrorKind::LeftTrap: return "LeftTrap";
    case ErrorKind::UnstableAtResolution: return "UnstableAtResolution";
    case ErrorKind::NoSignChange: return "NoSignChange";
    case ErrorKind::SamePredicateValue: return "SamePredicateValue";
    case ErrorKind::IoError: return "IoError";
  }
  return "Unknown";
}

int exit_code_for(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::Validation:
    case ErrorKind::DegenerateFamily:
    case ErrorKind::NotInFamilySlice:
    case ErrorKind::NoSignChange:
    case ErrorKind::SamePredicateValue:
    case ErrorKind::LevelOutsideWindow:
      return 2;
    case ErrorKind::PoleDerivative:
    case ErrorKind::SolverFailure:
    case ErrorKind::NoConvergence:
    case ErrorKind::UnstableAtResolution:
      return 3;
    case ErrorKind::NotInBasin:
    case ErrorKind::SuperattractingFixedPoint:
    case ErrorKind::NotAttracting:
    case ErrorKind::NoEscapingCritical:
    case ErrorKind::MultipleEscaping:
    case ErrorKind::HypothesisFailed:
    case ErrorKind::LevelIntervalEmpty:
    case ErrorKind::NoInvariantCut:
    case ErrorKind::ComponentCountMismatch:
    case ErrorKind::EscapeFromTrap:
    case ErrorKind::LeftTrap:
      return 4;
    case ErrorKind::IoError:
      return 1;
  }
  return 1;
}

}  // namespace ratdyn
