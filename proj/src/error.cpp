#include "symsched/error.hpp"

namespace symsched {

const char* kind_name(ErrorKind k) {
  switch (k) {
    case ErrorKind::StructureMismatch: return "StructureMismatch";
    case ErrorKind::CapExceeded: return "CapExceeded";
    case ErrorKind::NotAHomomorphism: return "NotAHomomorphism";
    case ErrorKind::NotInGroup: return "NotInGroup";
    case ErrorKind::NotASubgroup: return "NotASubgroup";
    case ErrorKind::NotInSet: return "NotInSet";
    case ErrorKind::NotTransitive: return "NotTransitive";
    case ErrorKind::OracleCapExceeded: return "OracleCapExceeded";
    case ErrorKind::NoSolution: return "NoSolution";
    case ErrorKind::InvalidAction: return "InvalidAction";
    case ErrorKind::NotPrime: return "NotPrime";
    case ErrorKind::ConditionViolated: return "ConditionViolated";
    case ErrorKind::ParameterInfeasible: return "ParameterInfeasible";
    case ErrorKind::Divisibility: return "Divisibility";
    case ErrorKind::MemoryBudget: return "MemoryBudget";
    case ErrorKind::InvalidHierarchy: return "InvalidHierarchy";
    case ErrorKind::WindowOverflow: return "WindowOverflow";
    case ErrorKind::UnroutableMove: return "UnroutableMove";
    case ErrorKind::MachineMismatch: return "MachineMismatch";
    case ErrorKind::ParseError: return "ParseError";
    case ErrorKind::SizeCap: return "SizeCap";
    case ErrorKind::InvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

}  // namespace symsched
