#pragma once

// Housing markets with existing tenants under dichotomous (1-0) preferences.
//
// Agents and houses carry string identifiers at the boundary and dense
// indices everywhere else. All iteration is in index order.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "tenantalloc/error.hpp"

namespace tenantalloc {

using AgentIndex = std::size_t;
using HouseIndex = std::size_t;

/// A house or nothing. Receiving an unacceptable house is worth the same as
/// receiving nothing, but the two stay distinct so IR/S-IR checks are literal.
using HouseSlot = std::optional<HouseIndex>;

/// 1-0 utility.
using Utility = int;

struct RawAgent {
  std::string id;
  std::optional<std::string> endowment;
  std::vector<std::string> acceptable;

  bool operator==(const RawAgent&) const = default;
};

/// Unvalidated instance data, as read from a file.
struct RawInstance {
  std::vector<RawAgent> agents;
  std::vector<std::string> houses;

  bool operator==(const RawInstance&) const = default;
};

class Instance;
Instance validate_instance(const RawInstance& raw);

/// Validated, immutable housing market.
class Instance {
 public:
  Instance() = default;

  /// Builds an instance from index data with default names "1".."n" and
  /// "h1".."hm". Goes through the same validation as file input.
  static Instance from_indices(std::size_t n, std::size_t m,
                               const std::vector<HouseSlot>& endowment,
                               const std::vector<std::vector<HouseIndex>>& acceptable);

  std::size_t agent_count() const noexcept { return agent_ids_.size(); }
  std::size_t house_count() const noexcept { return house_ids_.size(); }

  const std::string& agent_id(AgentIndex a) const { return agent_ids_.at(a); }
  const std::string& house_id(HouseIndex h) const { return house_ids_.at(h); }
  const std::vector<std::string>& agent_ids() const noexcept { return agent_ids_; }
  const std::vector<std::string>& house_ids() const noexcept { return house_ids_; }

  std::optional<AgentIndex> find_agent(const std::string& id) const {
    auto it = agent_lookup_.find(id);
    if (it == agent_lookup_.end()) return std::nullopt;
    return it->second;
  }
  std::optional<HouseIndex> find_house(const std::string& id) const {
    auto it = house_lookup_.find(id);
    if (it == house_lookup_.end()) return std::nullopt;
    return it->second;
  }

  HouseSlot endowment(AgentIndex a) const { return endowment_.at(a); }
  std::optional<AgentIndex> owner(HouseIndex h) const { return owner_.at(h); }
  bool is_endowed(AgentIndex a) const { return endowment_.at(a).has_value(); }

  /// Sorted acceptable set A_a.
  const std::vector<HouseIndex>& acceptable(AgentIndex a) const { return acceptable_.at(a); }

  bool is_acceptable(AgentIndex a, HouseIndex h) const {
    return accept_matrix_[a * house_count() + h] != 0;
  }

  /// True iff the agent owns a house it finds acceptable.
  bool has_acceptable_endowment(AgentIndex a) const {
    const auto e = endowment_.at(a);
    return e && is_acceptable(a, *e);
  }

  /// Same market with agent a reporting `reported` instead of A_a.
  Instance with_acceptable(AgentIndex a, std::vector<HouseIndex> reported) const;

  RawInstance to_raw() const;

  bool operator==(const Instance& other) const {
    return agent_ids_ == other.agent_ids_ && house_ids_ == other.house_ids_ &&
           endowment_ == other.endowment_ && acceptable_ == other.acceptable_;
  }

 private:
  friend Instance validate_instance(const RawInstance& raw);
  void rebuild_derived();

  std::vector<std::string> agent_ids_;
  std::vector<std::string> house_ids_;
  std::vector<HouseSlot> endowment_;
  std::vector<std::vector<HouseIndex>> acceptable_;

  std::vector<std::uint8_t> accept_matrix_;
  std::vector<std::optional<AgentIndex>> owner_;
  std::unordered_map<std::string, AgentIndex> agent_lookup_;
  std::unordered_map<std::string, HouseIndex> house_lookup_;
};

inline void Instance::rebuild_derived() {
  const std::size_t n = agent_count();
  const std::size_t m = house_count();
  accept_matrix_.assign(n * m, 0);
  for (AgentIndex a = 0; a < n; ++a) {
    for (HouseIndex h : acceptable_[a]) accept_matrix_[a * m + h] = 1;
  }
  owner_.assign(m, std::nullopt);
  for (AgentIndex a = 0; a < n; ++a) {
    if (endowment_[a]) owner_[*endowment_[a]] = a;
  }
  agent_lookup_.clear();
  house_lookup_.clear();
  for (AgentIndex a = 0; a < n; ++a) agent_lookup_.emplace(agent_ids_[a], a);
  for (HouseIndex h = 0; h < m; ++h) house_lookup_.emplace(house_ids_[h], h);
}

inline Instance validate_instance(const RawInstance& raw) {
  Instance inst;
  std::unordered_map<std::string, HouseIndex> houses;
  for (const auto& h : raw.houses) {
    if (!houses.emplace(h, houses.size()).second) {
      throw Error(ErrorCode::duplicate_house_id, "house '" + h + "' listed twice");
    }
  }
  std::unordered_map<std::string, AgentIndex> agents;
  std::vector<std::optional<std::string>> owner_name(raw.houses.size());

  auto lookup = [&](const std::string& agent, const std::string& house) {
    auto it = houses.find(house);
    if (it == houses.end()) {
      throw Error(ErrorCode::unknown_house,
                  "agent '" + agent + "' references unknown house '" + house + "'");
    }
    return it->second;
  };

  for (const auto& ra : raw.agents) {
    if (!agents.emplace(ra.id, agents.size()).second) {
      throw Error(ErrorCode::duplicate_agent_id, "agent '" + ra.id + "' listed twice");
    }
    HouseSlot endow;
    if (ra.endowment) {
      const HouseIndex h = lookup(ra.id, *ra.endowment);
      if (owner_name[h]) {
        throw Error(ErrorCode::duplicate_endowment, "house '" + *ra.endowment +
                                                        "' owned by both '" + *owner_name[h] +
                                                        "' and '" + ra.id + "'");
      }
      owner_name[h] = ra.id;
      endow = h;
    }
    std::vector<HouseIndex> acc;
    acc.reserve(ra.acceptable.size());
    for (const auto& name : ra.acceptable) acc.push_back(lookup(ra.id, name));
    std::sort(acc.begin(), acc.end());
    if (std::adjacent_find(acc.begin(), acc.end()) != acc.end()) {
      throw Error(ErrorCode::duplicate_acceptable_house,
                  "agent '" + ra.id + "' lists an acceptable house twice");
    }
    inst.agent_ids_.push_back(ra.id);
    inst.endowment_.push_back(endow);
    inst.acceptable_.push_back(std::move(acc));
  }
  inst.house_ids_ = raw.houses;
  inst.rebuild_derived();
  return inst;
}

inline Instance Instance::from_indices(std::size_t n, std::size_t m,
                                       const std::vector<HouseSlot>& endowment,
                                       const std::vector<std::vector<HouseIndex>>& acceptable) {
  if (endowment.size() != n || acceptable.size() != n) {
    throw Error(ErrorCode::unknown_agent, "index data does not cover exactly n agents");
  }
  RawInstance raw;
  for (HouseIndex h = 0; h < m; ++h) raw.houses.push_back("h" + std::to_string(h + 1));
  auto name = [&](HouseIndex h) -> std::string {
    if (h >= m) throw Error(ErrorCode::unknown_house, "house index " + std::to_string(h));
    return raw.houses[h];
  };
  for (AgentIndex a = 0; a < n; ++a) {
    RawAgent ra;
    ra.id = std::to_string(a + 1);
    if (endowment[a]) ra.endowment = name(*endowment[a]);
    for (HouseIndex h : acceptable[a]) ra.acceptable.push_back(name(h));
    raw.agents.push_back(std::move(ra));
  }
  return validate_instance(raw);
}

inline Instance Instance::with_acceptable(AgentIndex a, std::vector<HouseIndex> reported) const {
  if (a >= agent_count()) throw Error(ErrorCode::unknown_agent, "agent index out of range");
  std::sort(reported.begin(), reported.end());
  reported.erase(std::unique(reported.begin(), reported.end()), reported.end());
  if (!reported.empty() && reported.back() >= house_count()) {
    throw Error(ErrorCode::unknown_house, "reported house index out of range");
  }
  Instance copy = *this;
  copy.acceptable_[a] = std::move(reported);
  copy.rebuild_derived();
  return copy;
}

inline RawInstance Instance::to_raw() const {
  RawInstance raw;
  raw.houses = house_ids_;
  for (AgentIndex a = 0; a < agent_count(); ++a) {
    RawAgent ra;
    ra.id = agent_ids_[a];
    if (endowment_[a]) ra.endowment = house_ids_[*endowment_[a]];
    for (HouseIndex h : acceptable_[a]) ra.acceptable.push_back(house_ids_[h]);
    raw.agents.push_back(std::move(ra));
  }
  return raw;
}

/// Injective partial map agent -> house. Holds indices only; validity is
/// relative to an Instance and checked by validated() / check_allocation().
class Allocation {
 public:
  Allocation() = default;
  explicit Allocation(std::vector<HouseSlot> assignment) : assignment_(std::move(assignment)) {}

  static Allocation empty(std::size_t n) { return Allocation(std::vector<HouseSlot>(n)); }

  static Allocation endowment(const Instance& inst) {
    std::vector<HouseSlot> v(inst.agent_count());
    for (AgentIndex a = 0; a < inst.agent_count(); ++a) v[a] = inst.endowment(a);
    return Allocation(std::move(v));
  }

  static Allocation validated(const Instance& inst, std::vector<HouseSlot> assignment);

  std::size_t size() const noexcept { return assignment_.size(); }
  HouseSlot operator[](AgentIndex a) const { return assignment_.at(a); }
  const std::vector<HouseSlot>& assignment() const noexcept { return assignment_; }

  bool operator==(const Allocation&) const = default;

 private:
  std::vector<HouseSlot> assignment_;
};

/// Throws InvalidAllocation unless `x` is an injective partial map into the
/// instance's houses covering exactly its agents.
inline void check_allocation(const Instance& inst, const Allocation& x) {
  if (x.size() != inst.agent_count()) {
    throw Error(ErrorCode::invalid_allocation,
                "allocation covers " + std::to_string(x.size()) + " agents, instance has " +
                    std::to_string(inst.agent_count()));
  }
  std::vector<bool> used(inst.house_count(), false);
  for (AgentIndex a = 0; a < x.size(); ++a) {
    const auto h = x[a];
    if (!h) continue;
    if (*h >= inst.house_count()) {
      throw Error(ErrorCode::invalid_allocation, "agent '" + inst.agent_id(a) +
                                                     "' assigned a house outside the market");
    }
    if (used[*h]) {
      throw Error(ErrorCode::invalid_allocation,
                  "house '" + inst.house_id(*h) + "' assigned to two agents");
    }
    used[*h] = true;
  }
}

inline Allocation Allocation::validated(const Instance& inst, std::vector<HouseSlot> assignment) {
  Allocation x(std::move(assignment));
  check_allocation(inst, x);
  return x;
}

inline Utility utility(const Instance& inst, AgentIndex a, HouseSlot house) {
  if (a >= inst.agent_count()) {
    throw Error(ErrorCode::unknown_agent, "agent index " + std::to_string(a));
  }
  if (!house) return 0;
  if (*house >= inst.house_count()) {
    throw Error(ErrorCode::unknown_house, "house index " + std::to_string(*house));
  }
  return inst.is_acceptable(a, *house) ? 1 : 0;
}

/// Agents holding an acceptable house under x, in index order.
inline std::vector<AgentIndex> satisfied_set(const Instance& inst, const Allocation& x) {
  check_allocation(inst, x);
  std::vector<AgentIndex> out;
  for (AgentIndex a = 0; a < x.size(); ++a) {
    if (x[a] && inst.is_acceptable(a, *x[a])) out.push_back(a);
  }
  return out;
}

inline std::size_t welfare(const Instance& inst, const Allocation& x) {
  return satisfied_set(inst, x).size();
}

}  // namespace tenantalloc
