#pragma once

#include <stdexcept>
#include <string>

namespace symsched {

enum class ErrorKind {
  StructureMismatch,
  CapExceeded,
  NotAHomomorphism,
  NotInGroup,
  NotASubgroup,
  NotInSet,
  NotTransitive,
  OracleCapExceeded,
  NoSolution,
  InvalidAction,
  NotPrime,
  ConditionViolated,
  ParameterInfeasible,
  Divisibility,
  MemoryBudget,
  InvalidHierarchy,
  WindowOverflow,
  UnroutableMove,
  MachineMismatch,
  ParseError,
  SizeCap,
  InvalidArgument,
};

const char* kind_name(ErrorKind k);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(kind_name(kind)) + ": " + what), kind_(kind) {}
  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace symsched
