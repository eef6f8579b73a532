#pragma once

// Named allocation properties and a report that bundles verdicts with
// witnesses. Every failing verdict carries a witness that the standalone
// checkers in oracles.hpp accept.

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "tenantalloc/error.hpp"
#include "tenantalloc/model.hpp"
#include "tenantalloc/oracles.hpp"

namespace tenantalloc {

enum class Property { ir, sir, po, core, strict_core, maxw, maxw_ir, maxw_sir };

inline constexpr Property kAllProperties[] = {Property::ir,          Property::sir,
                                              Property::po,          Property::core,
                                              Property::strict_core, Property::maxw,
                                              Property::maxw_ir,     Property::maxw_sir};

inline std::string_view to_string(Property p) {
  switch (p) {
    case Property::ir: return "ir";
    case Property::sir: return "sir";
    case Property::po: return "po";
    case Property::core: return "core";
    case Property::strict_core: return "strict-core";
    case Property::maxw: return "maxw";
    case Property::maxw_ir: return "maxw-ir";
    case Property::maxw_sir: return "maxw-sir";
  }
  return "?";
}

inline Property parse_property(std::string_view name) {
  for (Property p : kAllProperties) {
    if (to_string(p) == name) return p;
  }
  throw Error(ErrorCode::parse_error, "unknown property '" + std::string(name) + "'");
}

/// Agent whose rationality constraint is violated.
struct ViolatingAgent {
  AgentIndex agent = 0;
};

/// An allocation that does better: Pareto-dominating for po, higher welfare
/// (under the same constraint) for the maxw family.
struct BetterAllocation {
  Allocation allocation;
  std::size_t welfare = 0;
};

using Witness = std::variant<std::monostate, ViolatingAgent, BetterAllocation, CoalitionWitness>;

struct PropertyVerdict {
  Property property{};
  bool holds = true;
  Witness witness;
};

struct PropertyReport {
  std::vector<PropertyVerdict> verdicts;

  bool all_hold() const {
    for (const auto& v : verdicts) {
      if (!v.holds) return false;
    }
    return true;
  }
  const PropertyVerdict* find(Property p) const {
    for (const auto& v : verdicts) {
      if (v.property == p) return &v;
    }
    return nullptr;
  }
};

namespace detail {

inline std::optional<AgentIndex> first_ir_violation(const Instance& inst, const Allocation& x) {
  for (AgentIndex a = 0; a < inst.agent_count(); ++a) {
    if (utility(inst, a, x[a]) < utility(inst, a, inst.endowment(a))) return a;
  }
  return std::nullopt;
}

inline std::optional<AgentIndex> first_sir_violation(const Instance& inst, const Allocation& x) {
  for (AgentIndex a = 0; a < inst.agent_count(); ++a) {
    const auto own = inst.endowment(a);
    if (own && x[a] != own && utility(inst, a, x[a]) <= utility(inst, a, own)) return a;
  }
  return std::nullopt;
}

// First allocation in enumeration order passing `c` with welfare above x's.
inline std::optional<BetterAllocation> better_under(const Instance& inst, const Allocation& x,
                                                    Constraint c, const SizeBudget& budget) {
  const std::size_t own = welfare(inst, x);
  std::optional<BetterAllocation> found;
  for_each_allocation(inst, budget, [&](const Allocation& y) {
    if (!satisfies(inst, y, c)) return true;
    const std::size_t w = welfare(inst, y);
    if (w > own) {
      found = BetterAllocation{y, w};
      return false;
    }
    return true;
  });
  return found;
}

// Maximum-cardinality assignment of agents to acceptable houses.
inline BetterAllocation max_welfare_allocation(const Instance& inst) {
  // Grow a served set greedily in index order; saturating_matching settles
  // feasibility, and a maximal independent set of a matroid is maximum.
  std::vector<AgentIndex> served;
  std::vector<std::vector<HouseIndex>> options;
  std::vector<HouseIndex> last;
  for (AgentIndex a = 0; a < inst.agent_count(); ++a) {
    options.push_back(inst.acceptable(a));
    if (auto y = saturating_matching(options, inst.house_count())) {
      served.push_back(a);
      last = std::move(*y);
    } else {
      options.pop_back();
    }
  }
  std::vector<HouseSlot> y(inst.agent_count());
  for (std::size_t k = 0; k < served.size(); ++k) y[served[k]] = last[k];
  return {Allocation(std::move(y)), served.size()};
}

}  // namespace detail

inline PropertyVerdict evaluate(const Instance& inst, const Allocation& x, Property p,
                                const SizeBudget& budget = {}) {
  check_allocation(inst, x);
  PropertyVerdict v;
  v.property = p;
  auto fail_with = [&](Witness w) {
    v.holds = false;
    v.witness = std::move(w);
  };
  switch (p) {
    case Property::ir:
      if (const auto a = detail::first_ir_violation(inst, x)) fail_with(ViolatingAgent{*a});
      break;
    case Property::sir:
      if (const auto a = detail::first_sir_violation(inst, x)) fail_with(ViolatingAgent{*a});
      break;
    case Property::po: {
      auto r = is_pareto_optimal(inst, x);
      if (!r.optimal) {
        const std::size_t w = welfare(inst, *r.dominating);
        fail_with(BetterAllocation{std::move(*r.dominating), w});
      }
      break;
    }
    case Property::core: {
      auto r = is_core_stable(inst, x, budget);
      if (!r.stable) fail_with(std::move(*r.witness));
      break;
    }
    case Property::strict_core: {
      auto r = is_strict_core_stable(inst, x, budget);
      if (!r.stable) fail_with(std::move(*r.witness));
      break;
    }
    case Property::maxw: {
      if (welfare(inst, x) < max_welfare(inst)) fail_with(detail::max_welfare_allocation(inst));
      break;
    }
    case Property::maxw_ir:
    case Property::maxw_sir: {
      const Constraint c = p == Property::maxw_ir ? Constraint::ir : Constraint::sir;
      if (!satisfies(inst, x, c)) {
        const auto a = c == Constraint::ir ? detail::first_ir_violation(inst, x)
                                           : detail::first_sir_violation(inst, x);
        fail_with(ViolatingAgent{*a});
      } else if (auto better = detail::better_under(inst, x, c, budget)) {
        fail_with(std::move(*better));
      }
      break;
    }
  }
  return v;
}

inline PropertyReport evaluate(const Instance& inst, const Allocation& x,
                               const std::vector<Property>& props, const SizeBudget& budget = {}) {
  PropertyReport report;
  for (Property p : props) report.verdicts.push_back(evaluate(inst, x, p, budget));
  return report;
}

/// Re-checks a failing verdict's witness independently of the search that
/// produced it.
inline bool witness_is_sound(const Instance& inst, const Allocation& x, const PropertyVerdict& v) {
  if (v.holds) return std::holds_alternative<std::monostate>(v.witness);
  return std::visit(
      [&](const auto& w) -> bool {
        using T = std::decay_t<decltype(w)>;
        if constexpr (std::is_same_v<T, std::monostate>) {
          return false;
        } else if constexpr (std::is_same_v<T, ViolatingAgent>) {
          const auto own = inst.endowment(w.agent);
          const Utility ux = utility(inst, w.agent, x[w.agent]);
          const Utility uo = utility(inst, w.agent, own);
          if (v.property == Property::ir || v.property == Property::maxw_ir) return ux < uo;
          return own && x[w.agent] != own && ux <= uo;
        } else if constexpr (std::is_same_v<T, BetterAllocation>) {
          check_allocation(inst, w.allocation);
          if (welfare(inst, w.allocation) != w.welfare) return false;
          switch (v.property) {
            case Property::po: return dominates(inst, w.allocation, x);
            case Property::maxw: return w.welfare > welfare(inst, x);
            case Property::maxw_ir:
              return is_ir(inst, w.allocation) && w.welfare > welfare(inst, x);
            case Property::maxw_sir:
              return is_sir(inst, w.allocation) && w.welfare > welfare(inst, x);
            default: return false;
          }
        } else {
          if (v.property == Property::core) return blocks(inst, x, w);
          if (v.property == Property::strict_core) return weakly_blocks(inst, x, w);
          return false;
        }
      },
      v.witness);
}

}  // namespace tenantalloc
