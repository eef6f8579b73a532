#pragma once

// Reference checkers for allocation properties. They share nothing with the
// mechanisms beyond the data model: feasibility questions are answered by a
// private augmenting-path matcher, and the welfare optima by exhaustive
// enumeration of allocations. Exhaustive searches refuse instances above a
// SizeBudget instead of truncating.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <cstdlib>
#include <functional>
#include <limits>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "tenantalloc/error.hpp"
#include "tenantalloc/mechanisms.hpp"
#include "tenantalloc/model.hpp"

namespace tenantalloc {

struct SizeBudget {
  std::size_t max_enum_agents = 8;
  std::size_t max_enum_houses = 8;
  std::size_t max_coalition_agents = 12;
  std::size_t max_misreport_houses = 6;

  /// Defaults overridden by TENANTALLOC_MAX_ENUM_AGENTS,
  /// TENANTALLOC_MAX_ENUM_HOUSES, TENANTALLOC_MAX_COALITION_AGENTS and
  /// TENANTALLOC_MAX_MISREPORT_HOUSES when set.
  static SizeBudget from_environment() {
    SizeBudget b;
    auto read = [](const char* name, std::size_t& slot) {
      if (const char* v = std::getenv(name)) {
        char* end = nullptr;
        const auto parsed = std::strtoull(v, &end, 10);
        if (end == v || *end != '\0') {
          throw Error(ErrorCode::invalid_params, std::string(name) + " is not an integer");
        }
        slot = static_cast<std::size_t>(parsed);
      }
    };
    read("TENANTALLOC_MAX_ENUM_AGENTS", b.max_enum_agents);
    read("TENANTALLOC_MAX_ENUM_HOUSES", b.max_enum_houses);
    read("TENANTALLOC_MAX_COALITION_AGENTS", b.max_coalition_agents);
    read("TENANTALLOC_MAX_MISREPORT_HOUSES", b.max_misreport_houses);
    return b;
  }
};

namespace detail {

inline void budget_check(bool ok, const std::string& which, std::size_t limit,
                         std::size_t actual) {
  if (!ok) {
    throw Error(ErrorCode::budget_exceeded, which + " limit " + std::to_string(limit) +
                                                ", instance needs " + std::to_string(actual));
  }
}

inline void require_enum_budget(const Instance& inst, const SizeBudget& b) {
  budget_check(inst.agent_count() <= b.max_enum_agents, "max_enum_agents", b.max_enum_agents,
               inst.agent_count());
  budget_check(inst.house_count() <= b.max_enum_houses, "max_enum_houses", b.max_enum_houses,
               inst.house_count());
}

inline void require_coalition_budget(const Instance& inst, const SizeBudget& b) {
  budget_check(inst.agent_count() <= b.max_coalition_agents, "max_coalition_agents",
               b.max_coalition_agents, inst.agent_count());
}

// Small bipartite matcher over explicit candidate lists: agents[k] may take
// any house in options[k]. Returns the assignment or nullopt if not every
// agent can be served.
inline std::optional<std::vector<HouseIndex>> saturating_matching(
    const std::vector<std::vector<HouseIndex>>& options, std::size_t house_count) {
  constexpr auto none = std::numeric_limits<std::size_t>::max();
  std::vector<std::size_t> holder(house_count, none);
  std::vector<char> seen(house_count);
  std::function<bool(std::size_t)> augment = [&](std::size_t k) {
    for (HouseIndex h : options[k]) {
      if (seen[h]) continue;
      seen[h] = 1;
      if (holder[h] == none || augment(holder[h])) {
        holder[h] = k;
        return true;
      }
    }
    return false;
  };
  for (std::size_t k = 0; k < options.size(); ++k) {
    std::fill(seen.begin(), seen.end(), 0);
    if (!augment(k)) return std::nullopt;
  }
  std::vector<HouseIndex> out(options.size());
  for (HouseIndex h = 0; h < house_count; ++h) {
    if (holder[h] != none) out[holder[h]] = h;
  }
  return out;
}

inline std::size_t max_matching_size(const std::vector<std::vector<HouseIndex>>& options,
                                     std::size_t house_count) {
  constexpr auto none = std::numeric_limits<std::size_t>::max();
  std::vector<std::size_t> holder(house_count, none);
  std::vector<char> seen(house_count);
  std::function<bool(std::size_t)> augment = [&](std::size_t k) {
    for (HouseIndex h : options[k]) {
      if (seen[h]) continue;
      seen[h] = 1;
      if (holder[h] == none || augment(holder[h])) {
        holder[h] = k;
        return true;
      }
    }
    return false;
  };
  std::size_t size = 0;
  for (std::size_t k = 0; k < options.size(); ++k) {
    std::fill(seen.begin(), seen.end(), 0);
    if (augment(k)) ++size;
  }
  return size;
}

}  // namespace detail

/// Calls `visit` on every allocation (injective partial map agents -> houses),
/// in a fixed order. `visit` returns false to stop early.
inline void for_each_allocation(const Instance& inst, const SizeBudget& budget,
                                const std::function<bool(const Allocation&)>& visit) {
  detail::require_enum_budget(inst, budget);
  const std::size_t n = inst.agent_count();
  const std::size_t m = inst.house_count();
  std::vector<HouseSlot> cur(n);
  std::vector<char> used(m, 0);
  bool stop = false;
  std::function<void(std::size_t)> rec = [&](std::size_t a) {
    if (stop) return;
    if (a == n) {
      if (!visit(Allocation(cur))) stop = true;
      return;
    }
    cur[a] = std::nullopt;
    rec(a + 1);
    for (HouseIndex h = 0; h < m && !stop; ++h) {
      if (used[h]) continue;
      used[h] = 1;
      cur[a] = h;
      rec(a + 1);
      used[h] = 0;
    }
    cur[a] = std::nullopt;
  };
  rec(0);
}

inline bool is_ir(const Instance& inst, const Allocation& x) {
  check_allocation(inst, x);
  for (AgentIndex a = 0; a < inst.agent_count(); ++a) {
    if (utility(inst, a, x[a]) < utility(inst, a, inst.endowment(a))) return false;
  }
  return true;
}

inline bool is_sir(const Instance& inst, const Allocation& x) {
  check_allocation(inst, x);
  for (AgentIndex a = 0; a < inst.agent_count(); ++a) {
    const auto own = inst.endowment(a);
    if (!own || x[a] == own) continue;
    if (utility(inst, a, x[a]) <= utility(inst, a, own)) return false;
  }
  return true;
}

/// y Pareto-dominates x: nobody worse off, somebody strictly better.
inline bool dominates(const Instance& inst, const Allocation& y, const Allocation& x) {
  check_allocation(inst, x);
  check_allocation(inst, y);
  bool strict = false;
  for (AgentIndex a = 0; a < inst.agent_count(); ++a) {
    const Utility uy = utility(inst, a, y[a]);
    const Utility ux = utility(inst, a, x[a]);
    if (uy < ux) return false;
    if (uy > ux) strict = true;
  }
  return strict;
}

struct ParetoVerdict {
  bool optimal = true;
  std::optional<Allocation> dominating;
};

/// Exhaustive search for a dominating allocation; first one in enumeration
/// order is the witness.
inline ParetoVerdict is_pareto_optimal_brute(const Instance& inst, const Allocation& x,
                                             const SizeBudget& budget = {}) {
  check_allocation(inst, x);
  ParetoVerdict v;
  for_each_allocation(inst, budget, [&](const Allocation& y) {
    if (dominates(inst, y, x)) {
      v.optimal = false;
      v.dominating = y;
      return false;
    }
    return true;
  });
  return v;
}

/// x is Pareto optimal iff no unsatisfied agent can be served together with
/// everyone x already serves. Polynomial; no budget.
inline ParetoVerdict is_pareto_optimal_certificate(const Instance& inst, const Allocation& x) {
  const auto sat = satisfied_set(inst, x);
  std::vector<char> is_sat(inst.agent_count(), 0);
  for (AgentIndex a : sat) is_sat[a] = 1;
  std::vector<std::vector<HouseIndex>> options;
  for (AgentIndex a : sat) options.push_back(inst.acceptable(a));
  for (AgentIndex j = 0; j < inst.agent_count(); ++j) {
    if (is_sat[j]) continue;
    options.push_back(inst.acceptable(j));
    const auto served = detail::saturating_matching(options, inst.house_count());
    options.pop_back();
    if (!served) continue;
    std::vector<HouseSlot> y(inst.agent_count());
    for (std::size_t k = 0; k < sat.size(); ++k) y[sat[k]] = (*served)[k];
    y[j] = served->back();
    return {false, Allocation(std::move(y))};
  }
  return {};
}

inline ParetoVerdict is_pareto_optimal(const Instance& inst, const Allocation& x) {
  return is_pareto_optimal_certificate(inst, x);
}

/// Coalition S and its internal reallocation y (y[k] goes to coalition[k]).
struct CoalitionWitness {
  std::vector<AgentIndex> coalition;
  std::vector<HouseIndex> reallocation;

  bool operator==(const CoalitionWitness&) const = default;
};

struct CoreVerdict {
  bool stable = true;
  std::optional<CoalitionWitness> witness;
};

namespace detail {

inline std::vector<HouseIndex> owned_by(const Instance& inst, const std::vector<AgentIndex>& s) {
  std::vector<HouseIndex> houses;
  for (AgentIndex a : s) {
    if (const auto h = inst.endowment(a)) houses.push_back(*h);
  }
  std::sort(houses.begin(), houses.end());
  return houses;
}

inline bool reallocation_is_internal(const Instance& inst, const CoalitionWitness& w) {
  if (w.coalition.empty() || w.coalition.size() != w.reallocation.size()) return false;
  std::vector<AgentIndex> members = w.coalition;
  std::sort(members.begin(), members.end());
  if (std::adjacent_find(members.begin(), members.end()) != members.end()) return false;
  if (members.back() >= inst.agent_count()) return false;
  const auto pool = owned_by(inst, w.coalition);
  std::vector<HouseIndex> given = w.reallocation;
  std::sort(given.begin(), given.end());
  if (std::adjacent_find(given.begin(), given.end()) != given.end()) return false;
  return std::includes(pool.begin(), pool.end(), given.begin(), given.end());
}

// Enumerates nonempty subsets of `pool` in increasing bitmask order.
inline void for_each_subset(const std::vector<AgentIndex>& pool,
                            const std::function<bool(const std::vector<AgentIndex>&)>& visit) {
  const std::size_t k = pool.size();
  const std::uint64_t total = std::uint64_t{1} << k;
  std::vector<AgentIndex> s;
  for (std::uint64_t mask = 1; mask < total; ++mask) {
    s.clear();
    for (std::size_t b = 0; b < k; ++b) {
      if (mask >> b & 1) s.push_back(pool[b]);
    }
    if (!visit(s)) return;
  }
}

}  // namespace detail

/// Standalone check that `w` blocks x: internal reallocation, every member
/// strictly better off.
inline bool blocks(const Instance& inst, const Allocation& x, const CoalitionWitness& w) {
  check_allocation(inst, x);
  if (!detail::reallocation_is_internal(inst, w)) return false;
  for (std::size_t k = 0; k < w.coalition.size(); ++k) {
    const AgentIndex a = w.coalition[k];
    if (utility(inst, a, w.reallocation[k]) <= utility(inst, a, x[a])) return false;
  }
  return true;
}

/// Standalone check that `w` weakly blocks x.
inline bool weakly_blocks(const Instance& inst, const Allocation& x, const CoalitionWitness& w) {
  check_allocation(inst, x);
  if (!detail::reallocation_is_internal(inst, w)) return false;
  bool strict = false;
  for (std::size_t k = 0; k < w.coalition.size(); ++k) {
    const AgentIndex a = w.coalition[k];
    const Utility uy = utility(inst, a, w.reallocation[k]);
    const Utility ux = utility(inst, a, x[a]);
    if (uy < ux) return false;
    if (uy > ux) strict = true;
  }
  return strict;
}

enum class CoalitionSearch {
  /// Only endowed agents left unsatisfied by x can be useful members.
  pruned,
  /// Every subset of agents, every internal reallocation, literal definition.
  exhaustive,
};

inline CoreVerdict is_core_stable(const Instance& inst, const Allocation& x,
                                  const SizeBudget& budget = {},
                                  CoalitionSearch mode = CoalitionSearch::pruned) {
  check_allocation(inst, x);
  detail::require_coalition_budget(inst, budget);
  CoreVerdict v;
  std::vector<AgentIndex> pool;
  for (AgentIndex a = 0; a < inst.agent_count(); ++a) {
    if (mode == CoalitionSearch::exhaustive ||
        (inst.is_endowed(a) && utility(inst, a, x[a]) == 0)) {
      pool.push_back(a);
    }
  }

  if (mode == CoalitionSearch::pruned) {
    detail::for_each_subset(pool, [&](const std::vector<AgentIndex>& s) {
      const auto houses = detail::owned_by(inst, s);
      std::vector<std::vector<HouseIndex>> options;
      for (AgentIndex a : s) {
        std::vector<HouseIndex> opt;
        for (HouseIndex h : houses) {
          if (inst.is_acceptable(a, h)) opt.push_back(h);
        }
        options.push_back(std::move(opt));
      }
      if (const auto y = detail::saturating_matching(options, inst.house_count())) {
        v.stable = false;
        v.witness = CoalitionWitness{s, *y};
        return false;
      }
      return true;
    });
    return v;
  }

  detail::for_each_subset(pool, [&](const std::vector<AgentIndex>& s) {
    const auto houses = detail::owned_by(inst, s);
    std::vector<HouseIndex> y(s.size());
    std::vector<char> used(houses.size(), 0);
    std::function<bool(std::size_t)> rec = [&](std::size_t k) {
      if (k == s.size()) return blocks(inst, x, CoalitionWitness{s, y});
      for (std::size_t i = 0; i < houses.size(); ++i) {
        if (used[i]) continue;
        used[i] = 1;
        y[k] = houses[i];
        if (rec(k + 1)) return true;
        used[i] = 0;
      }
      return false;
    };
    if (rec(0)) {
      v.stable = false;
      v.witness = CoalitionWitness{s, y};
      return false;
    }
    return true;
  });
  return v;
}

inline CoreVerdict is_strict_core_stable(const Instance& inst, const Allocation& x,
                                         const SizeBudget& budget = {}) {
  check_allocation(inst, x);
  detail::require_coalition_budget(inst, budget);
  std::vector<AgentIndex> everyone(inst.agent_count());
  std::iota(everyone.begin(), everyone.end(), AgentIndex{0});
  CoreVerdict v;
  detail::for_each_subset(everyone, [&](const std::vector<AgentIndex>& s) {
    const auto houses = detail::owned_by(inst, s);
    if (houses.size() < s.size()) return true;
    // Satisfied members need an acceptable house back; one unsatisfied
    // member (the strict gainer) needs one too; the rest take anything.
    for (std::size_t g = 0; g < s.size(); ++g) {
      if (utility(inst, s[g], x[s[g]]) == 1) continue;
      std::vector<std::vector<HouseIndex>> options;
      for (std::size_t k = 0; k < s.size(); ++k) {
        const AgentIndex a = s[k];
        const bool needs_acceptable = k == g || utility(inst, a, x[a]) == 1;
        std::vector<HouseIndex> opt;
        for (HouseIndex h : houses) {
          if (!needs_acceptable || inst.is_acceptable(a, h)) opt.push_back(h);
        }
        options.push_back(std::move(opt));
      }
      if (const auto y = detail::saturating_matching(options, inst.house_count())) {
        v.stable = false;
        v.witness = CoalitionWitness{s, *y};
        return false;
      }
    }
    return true;
  });
  return v;
}

/// Maximum number of simultaneously satisfiable agents, no rationality
/// constraint.
inline std::size_t max_welfare(const Instance& inst) {
  std::vector<std::vector<HouseIndex>> options;
  for (AgentIndex a = 0; a < inst.agent_count(); ++a) options.push_back(inst.acceptable(a));
  return detail::max_matching_size(options, inst.house_count());
}

enum class Constraint { none, ir, sir };

inline bool satisfies(const Instance& inst, const Allocation& x, Constraint c) {
  switch (c) {
    case Constraint::none: return true;
    case Constraint::ir: return is_ir(inst, x);
    case Constraint::sir: return is_sir(inst, x);
  }
  return false;
}

/// Exhaustive maximum of welfare over allocations passing the constraint.
inline std::size_t max_welfare_subject_to(const Instance& inst, Constraint c,
                                          const SizeBudget& budget = {}) {
  std::size_t best = 0;
  for_each_allocation(inst, budget, [&](const Allocation& x) {
    if (satisfies(inst, x, c)) best = std::max(best, welfare(inst, x));
    return best < inst.agent_count();
  });
  return best;
}

/// Every allocation passing the constraint with maximal welfare.
inline std::vector<Allocation> welfare_maximizers(const Instance& inst, Constraint c,
                                                  const SizeBudget& budget = {}) {
  const std::size_t best = max_welfare_subject_to(inst, c, budget);
  std::vector<Allocation> out;
  for_each_allocation(inst, budget, [&](const Allocation& x) {
    if (satisfies(inst, x, c) && welfare(inst, x) == best) out.push_back(x);
    return true;
  });
  return out;
}

struct Manipulation {
  AgentIndex agent = 0;
  std::vector<HouseIndex> reported;
  /// True-utility gain from misreporting (always 1 under 1-0 utilities).
  Utility gain = 0;

  bool operator==(const Manipulation&) const = default;
};

/// Standalone check: the misreport raises the agent's true utility.
inline bool improves(const Instance& inst, Mechanism variant, const PermutationPolicy& policy,
                     const Manipulation& w) {
  const AgentIndex a = w.agent;
  const auto truthful = run_mechanism(inst, variant, policy);
  const auto lied = run_mechanism(inst.with_acceptable(a, w.reported), variant, policy);
  return utility(inst, a, lied.allocation[a]) > utility(inst, a, truthful.allocation[a]);
}

/// Sweeps every agent and every reported subset of houses; returns the first
/// profitable misreport in (agent, subset bitmask) order.
inline std::optional<Manipulation> check_strategyproofness(const Instance& inst,
                                                           Mechanism variant,
                                                           const PermutationPolicy& policy = {},
                                                           const SizeBudget& budget = {}) {
  detail::budget_check(inst.house_count() <= budget.max_misreport_houses, "max_misreport_houses",
                       budget.max_misreport_houses, inst.house_count());
  const std::size_t m = inst.house_count();
  const auto truthful = run_mechanism(inst, variant, policy);
  for (AgentIndex a = 0; a < inst.agent_count(); ++a) {
    const Utility honest = utility(inst, a, truthful.allocation[a]);
    if (honest == 1) continue;
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << m); ++mask) {
      std::vector<HouseIndex> reported;
      for (HouseIndex h = 0; h < m; ++h) {
        if (mask >> h & 1) reported.push_back(h);
      }
      const auto lied = run_mechanism(inst.with_acceptable(a, reported), variant, policy);
      const Utility got = utility(inst, a, lied.allocation[a]);
      if (got > honest) return Manipulation{a, std::move(reported), got - honest};
    }
  }
  return std::nullopt;
}

}  // namespace tenantalloc
