#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace hm {

enum class ErrorKind {
  Syntax,
  UnknownVariable,
  DivisionByZero,
  Eval,
  IndexOutOfRange,
  ModeMismatch,
  SingularJacobian,
  NoConvergence,
  DegenerateAllZero,
  NotPolynomial,
  BranchJump,
  InsufficientSamples,
  UnknownItem,
  BadParams,
  BadRegion,
  Validation,
};

const char* to_string(ErrorKind kind);

/// Base of every error raised by the library. The kind is stable and is what
/// reports and the CLI key on; the message is for humans.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(std::string(to_string(kind)) + ": " + message), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

class SyntaxError : public Error {
 public:
  SyntaxError(std::size_t position, const std::string& message)
      : Error(ErrorKind::Syntax, "at offset " + std::to_string(position) + ": " + message),
        position_(position) {}

  std::size_t position() const noexcept { return position_; }

 private:
  std::size_t position_;
};

}  // namespace hm
