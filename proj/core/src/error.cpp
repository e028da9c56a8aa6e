#include "escort/error.hpp"

namespace escort {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InsufficientDepth: return "insufficient-depth";
    case ErrorKind::InvalidArgument: return "invalid-argument";
    case ErrorKind::OutOfRange: return "out-of-range";
    case ErrorKind::DegenerateFiber: return "degenerate-fiber";
    case ErrorKind::NonConvergence: return "non-convergence";
    case ErrorKind::ContinuationAbort: return "continuation-abort";
    case ErrorKind::PreconditionViolated: return "precondition-violated";
    case ErrorKind::NoRay: return "no-ray";
    case ErrorKind::BranchAmbiguity: return "branch-ambiguity";
    case ErrorKind::BranchJump: return "branch-jump";
    case ErrorKind::SingularCollision: return "singular-collision";
    case ErrorKind::AddressDepth: return "address-depth";
    case ErrorKind::DegenerateCrossing: return "degenerate-crossing";
    case ErrorKind::DegeneratePullback: return "degenerate-pullback";
    case ErrorKind::SolverFailure: return "solver-failure";
    case ErrorKind::Parse: return "parse";
    case ErrorKind::Validation: return "validation";
  }
  return "unknown";
}

}  // namespace escort
