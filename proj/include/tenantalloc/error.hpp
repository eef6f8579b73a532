#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace tenantalloc {

enum class ErrorCode {
  duplicate_endowment,
  unknown_house,
  unknown_agent,
  duplicate_agent_id,
  duplicate_house_id,
  duplicate_acceptable_house,
  invalid_allocation,
  unbalanced_graph,
  unknown_vertex,
  infeasible_input,
  invalid_permutation,
  invalid_params,
  budget_exceeded,
  parse_error,
  internal_error,
};

inline std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::duplicate_endowment: return "DuplicateEndowment";
    case ErrorCode::unknown_house: return "UnknownHouse";
    case ErrorCode::unknown_agent: return "UnknownAgent";
    case ErrorCode::duplicate_agent_id: return "DuplicateAgentId";
    case ErrorCode::duplicate_house_id: return "DuplicateHouseId";
    case ErrorCode::duplicate_acceptable_house: return "DuplicateAcceptableHouse";
    case ErrorCode::invalid_allocation: return "InvalidAllocation";
    case ErrorCode::unbalanced_graph: return "UnbalancedGraph";
    case ErrorCode::unknown_vertex: return "UnknownVertex";
    case ErrorCode::infeasible_input: return "InfeasibleInput";
    case ErrorCode::invalid_permutation: return "InvalidPermutation";
    case ErrorCode::invalid_params: return "InvalidParams";
    case ErrorCode::budget_exceeded: return "BudgetExceeded";
    case ErrorCode::parse_error: return "ParseError";
    case ErrorCode::internal_error: return "InternalError";
  }
  return "Unknown";
}

/// Every failure raised by the library carries a machine-checkable code.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace tenantalloc
