#pragma once

// MSIR and MIR: maximum-welfare allocation subject to strong individual
// rationality (MSIR) or individual rationality (MIR), made strategyproof by a
// serial refinement over a fixed agent order.
//
// Both mechanisms build a padded bipartite graph whose perfect matchings are
// exactly the feasible allocations (S-IR resp. IR), with weight 1 on edges to
// acceptable houses. W is the optimal weight. Agents are then visited in
// priority order; each one loses its weight-0 edges for good if the graph
// still carries a weight-W perfect matching afterwards.

#include <cstddef>
#include <cstdint>
#include <numeric>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "tenantalloc/error.hpp"
#include "tenantalloc/matching.hpp"
#include "tenantalloc/model.hpp"
#include "tenantalloc/random.hpp"

namespace tenantalloc {

enum class Mechanism { msir, mir };

inline std::string to_string(Mechanism m) { return m == Mechanism::msir ? "msir" : "mir"; }

/// Graph plus the vertex layout: left [0, agents) are agents, the rest dummy
/// agents; right [0, houses) are houses, the rest dummy houses.
struct MechanismGraph {
  WeightedBipartiteGraph graph;
  std::size_t agents = 0;
  std::size_t houses = 0;

  std::size_t size() const noexcept { return graph.left_count(); }
  bool is_dummy_house(std::size_t r) const noexcept { return r >= houses; }
  bool is_dummy_agent(std::size_t l) const noexcept { return l >= agents; }
};

namespace detail {

inline MechanismGraph padded_graph(const Instance& inst) {
  const std::size_t n = inst.agent_count();
  const std::size_t m = inst.house_count();
  const std::size_t size = std::max(n, m);
  MechanismGraph mg{WeightedBipartiteGraph(size, size), n, m};
  for (std::size_t d = n; d < size; ++d) {
    for (std::size_t r = 0; r < size; ++r) mg.graph.set_edge(d, r, 0);
  }
  return mg;
}

// Edges from agent a to every right vertex; dummy houses are never acceptable.
inline void connect_to_all(MechanismGraph& mg, const Instance& inst, AgentIndex a) {
  for (std::size_t r = 0; r < mg.size(); ++r) {
    const int w = (!mg.is_dummy_house(r) && inst.is_acceptable(a, r)) ? 1 : 0;
    mg.graph.set_edge(a, r, w);
  }
}

}  // namespace detail

/// Endowed agents may keep their house or move to an acceptable one (only
/// the former if the endowment is already acceptable). Unendowed agents may
/// take anything, including a dummy house.
inline MechanismGraph build_msir_graph(const Instance& inst) {
  auto mg = detail::padded_graph(inst);
  for (AgentIndex a = 0; a < inst.agent_count(); ++a) {
    const auto own = inst.endowment(a);
    if (!own) {
      detail::connect_to_all(mg, inst, a);
      continue;
    }
    if (inst.is_acceptable(a, *own)) {
      mg.graph.set_edge(a, *own, 1);
      continue;
    }
    mg.graph.set_edge(a, *own, 0);
    for (HouseIndex h : inst.acceptable(a)) mg.graph.set_edge(a, h, 1);
  }
  return mg;
}

/// Agents with an acceptable endowment must end on an acceptable house;
/// everyone else may take anything, including a dummy house.
inline MechanismGraph build_mir_graph(const Instance& inst) {
  auto mg = detail::padded_graph(inst);
  for (AgentIndex a = 0; a < inst.agent_count(); ++a) {
    if (inst.has_acceptable_endowment(a)) {
      for (HouseIndex h : inst.acceptable(a)) mg.graph.set_edge(a, h, 1);
    } else {
      detail::connect_to_all(mg, inst, a);
    }
  }
  return mg;
}

inline MechanismGraph build_graph(const Instance& inst, Mechanism m) {
  return m == Mechanism::msir ? build_msir_graph(inst) : build_mir_graph(inst);
}

/// Priority order over agents. Must not depend on reported preferences.
struct PermutationPolicy {
  struct Identity {};
  struct Explicit {
    std::vector<AgentIndex> order;
  };
  /// Fisher-Yates over the identity with SplitMix64: for i = n-1 down to 1,
  /// swap positions i and below(i + 1).
  struct Seeded {
    std::uint64_t seed = 0;
  };

  std::variant<Identity, Explicit, Seeded> kind = Identity{};

  static PermutationPolicy identity() { return {}; }
  static PermutationPolicy explicit_order(std::vector<AgentIndex> order) {
    return {Explicit{std::move(order)}};
  }
  static PermutationPolicy seeded(std::uint64_t seed) { return {Seeded{seed}}; }
};

inline std::vector<AgentIndex> realize(const PermutationPolicy& policy, std::size_t n) {
  std::vector<AgentIndex> order(n);
  std::iota(order.begin(), order.end(), AgentIndex{0});
  if (const auto* ex = std::get_if<PermutationPolicy::Explicit>(&policy.kind)) {
    std::vector<char> seen(n, 0);
    if (ex->order.size() != n) {
      throw Error(ErrorCode::invalid_permutation, "permutation has " +
                                                      std::to_string(ex->order.size()) +
                                                      " entries for " + std::to_string(n) + " agents");
    }
    for (AgentIndex a : ex->order) {
      if (a >= n || seen[a]) {
        throw Error(ErrorCode::invalid_permutation, "permutation repeats or exceeds agent index");
      }
      seen[a] = 1;
    }
    return ex->order;
  }
  if (const auto* sd = std::get_if<PermutationPolicy::Seeded>(&policy.kind)) {
    SplitMix64 rng(sd->seed);
    for (std::size_t i = n; i > 1; --i) {
      const auto j = static_cast<std::size_t>(rng.below(i));
      std::swap(order[i - 1], order[j]);
    }
  }
  return order;
}

struct RefinementRound {
  AgentIndex agent = 0;
  /// Right vertices whose weight-0 edges were taken away this round.
  std::vector<std::size_t> removed;
  /// Optimal weight after removal; nullopt if no perfect matching remained.
  std::optional<int> weight;
  bool accepted = false;

  bool operator==(const RefinementRound&) const = default;
};

struct RefinementResult {
  std::vector<int> t;
  std::vector<RefinementRound> rounds;
};

/// Visits agents in `order`, pinning each to weight-1 edges when a weight-W
/// perfect matching survives. `mg.graph` is left in its refined state.
inline RefinementResult serial_refinement(MechanismGraph& mg, const std::vector<AgentIndex>& order,
                                          int target_weight) {
  const auto start = max_weight_perfect_matching(mg.graph);
  if (!start || start->weight != target_weight) {
    throw Error(ErrorCode::infeasible_input,
                "graph has no perfect matching of weight " + std::to_string(target_weight));
  }
  RefinementResult out;
  out.t.assign(mg.agents, 0);
  for (AgentIndex a : order) {
    if (a >= mg.agents) throw Error(ErrorCode::invalid_permutation, "order names a non-agent");
    RefinementRound round;
    round.agent = a;
    auto delta = remove_zero_edges(mg.graph, a);
    for (const auto& [r, w] : delta.removed) round.removed.push_back(r);
    const auto best = max_weight_perfect_matching(mg.graph);
    if (best) round.weight = best->weight;
    round.accepted = best && best->weight >= target_weight;
    if (round.accepted) {
      out.t[a] = 1;
    } else {
      delta.restore(mg.graph);
    }
    out.rounds.push_back(std::move(round));
  }
  return out;
}

struct MechanismTrace {
  int initial_weight = 0;
  std::vector<AgentIndex> permutation;
  std::vector<int> t;
  std::vector<RefinementRound> rounds;

  bool operator==(const MechanismTrace&) const = default;
};

struct MechanismResult {
  Allocation allocation;
  MechanismTrace trace;
};

/// Full mechanism run. Throws InternalError if the output breaks the trace
/// invariants (welfare = W, satisfied set = {t = 1}).
inline MechanismResult run_mechanism(const Instance& inst, Mechanism variant,
                                     const PermutationPolicy& policy = {}) {
  auto mg = build_graph(inst, variant);
  const auto initial = max_weight_perfect_matching(mg.graph);
  if (!initial) throw Error(ErrorCode::internal_error, "builder graph has no perfect matching");

  MechanismResult res;
  res.trace.initial_weight = initial->weight;
  res.trace.permutation = realize(policy, inst.agent_count());
  auto refined = serial_refinement(mg, res.trace.permutation, initial->weight);
  res.trace.t = std::move(refined.t);
  res.trace.rounds = std::move(refined.rounds);

  const auto final_matching = max_weight_perfect_matching(mg.graph);
  if (!final_matching || final_matching->weight != initial->weight) {
    throw Error(ErrorCode::internal_error, "refined graph lost its weight-W matching");
  }
  std::vector<HouseSlot> assignment(inst.agent_count());
  for (AgentIndex a = 0; a < inst.agent_count(); ++a) {
    const std::size_t r = final_matching->mate[a];
    if (!mg.is_dummy_house(r)) assignment[a] = r;
  }
  res.allocation = Allocation::validated(inst, std::move(assignment));

  const auto sat = satisfied_set(inst, res.allocation);
  std::vector<int> sat_flags(inst.agent_count(), 0);
  for (AgentIndex a : sat) sat_flags[a] = 1;
  if (static_cast<int>(sat.size()) != res.trace.initial_weight || sat_flags != res.trace.t) {
    throw Error(ErrorCode::internal_error, "satisfied set differs from refinement flags");
  }
  return res;
}

}  // namespace tenantalloc
