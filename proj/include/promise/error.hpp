#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace promise {

enum class Errc {
  // task algebra
  TypeMismatch,
  ReflexiveDeclaration,
  NegationConflict,
  ReservedTask,
  // model construction
  InvalidName,
  DuplicateName,
  UnknownName,
  OrderCycle,
  // transition system
  NotEnabled,
  NotPresent,
  NoCompliance,
  InvalidBody,
  UnboundVariable,
  // exploration
  LimitExceeded,
  // input
  Syntax,
};

std::string_view to_string(Errc code);

/// Base of every error thrown by the library; carries a machine-checkable code.
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

}  // namespace promise
