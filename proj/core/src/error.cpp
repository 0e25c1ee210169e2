#include "hm/error.hpp"

namespace hm {

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::Syntax: return "SyntaxError";
    case ErrorKind::UnknownVariable: return "UnknownVariable";
    case ErrorKind::DivisionByZero: return "DivisionByZero";
    case ErrorKind::Eval: return "EvalError";
    case ErrorKind::IndexOutOfRange: return "IndexOutOfRange";
    case ErrorKind::ModeMismatch: return "ModeMismatch";
    case ErrorKind::SingularJacobian: return "SingularJacobian";
    case ErrorKind::NoConvergence: return "NoConvergence";
    case ErrorKind::DegenerateAllZero: return "DegenerateAllZero";
    case ErrorKind::NotPolynomial: return "NotPolynomial";
    case ErrorKind::BranchJump: return "BranchJump";
    case ErrorKind::InsufficientSamples: return "InsufficientSamples";
    case ErrorKind::UnknownItem: return "UnknownItem";
    case ErrorKind::BadParams: return "BadParams";
    case ErrorKind::BadRegion: return "BadRegion";
    case ErrorKind::Validation: return "ValidationError";
  }
  return "Error";
}

}  // namespace hm
