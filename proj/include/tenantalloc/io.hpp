#pragma once

// JSON instance and allocation files.
//
// Instance file:
//   {"agents": [{"id": "1", "endowment": "h1" | null, "acceptable": ["h2"]}, ...],
//    "houses": ["h1", ...]}
// Allocation file:
//   {"allocation": {"1": "h2" | null, ...}, "welfare": 1,
//    "trace": {"W": 1, "permutation": [...], "t": {"1": 1, ...},
//              "rounds": [{"agent": "1", "removed": [...], "weight": 1 | null,
//                          "accepted": true}, ...]}}
//
// Canonical output: keys in the order above, agents and houses in instance
// order, acceptable houses in house order, two-space indent, trailing
// newline. Dummy houses in a trace render as "dummy:o1", "dummy:o2", ...

#include <cstddef>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "tenantalloc/error.hpp"
#include "tenantalloc/mechanisms.hpp"
#include "tenantalloc/model.hpp"
#include "tenantalloc/oracles.hpp"
#include "tenantalloc/properties.hpp"

namespace tenantalloc {

using Json = nlohmann::ordered_json;

namespace detail {

[[noreturn]] inline void bad_field(const std::string& where, const std::string& what) {
  throw Error(ErrorCode::parse_error, where + ": " + what);
}

inline Json parse_json(const std::string& text, const std::string& what) {
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    bad_field(what, e.what());
  }
}

inline void only_keys(const Json& obj, std::initializer_list<const char*> allowed,
                      const std::string& where) {
  if (!obj.is_object()) bad_field(where, "expected an object");
  for (const auto& [key, value] : obj.items()) {
    bool ok = false;
    for (const char* k : allowed) ok = ok || key == k;
    if (!ok) bad_field(where + "." + key, "unknown key");
  }
}

inline const Json& required(const Json& obj, const char* key, const std::string& where) {
  auto it = obj.find(key);
  if (it == obj.end()) bad_field(where + "." + key, "missing");
  return *it;
}

inline std::string string_field(const Json& v, const std::string& where) {
  if (!v.is_string()) bad_field(where, "expected a string");
  return v.get<std::string>();
}

inline std::string dump(const Json& j) { return j.dump(2) + "\n"; }

inline std::string right_vertex_name(const Instance& inst, std::size_t r) {
  if (r < inst.house_count()) return inst.house_id(r);
  return "dummy:o" + std::to_string(r - inst.house_count() + 1);
}

inline std::size_t parse_right_vertex(const Instance& inst, const std::string& name,
                                      const std::string& where) {
  if (auto h = inst.find_house(name)) return *h;
  const std::string prefix = "dummy:o";
  if (name.rfind(prefix, 0) == 0) {
    try {
      std::size_t pos = 0;
      const auto k = std::stoull(name.substr(prefix.size()), &pos);
      if (pos + prefix.size() == name.size() && k >= 1) return inst.house_count() + k - 1;
    } catch (const std::exception&) {
    }
  }
  bad_field(where, "unknown house '" + name + "'");
}

inline AgentIndex parse_agent(const Instance& inst, const std::string& name,
                              const std::string& where) {
  if (auto a = inst.find_agent(name)) return *a;
  bad_field(where, "unknown agent '" + name + "'");
}

}  // namespace detail

inline Json instance_to_json(const Instance& inst) {
  Json agents = Json::array();
  for (AgentIndex a = 0; a < inst.agent_count(); ++a) {
    Json entry;
    entry["id"] = inst.agent_id(a);
    entry["endowment"] = inst.endowment(a) ? Json(inst.house_id(*inst.endowment(a))) : Json();
    Json acc = Json::array();
    for (HouseIndex h : inst.acceptable(a)) acc.push_back(inst.house_id(h));
    entry["acceptable"] = std::move(acc);
    agents.push_back(std::move(entry));
  }
  Json doc;
  doc["agents"] = std::move(agents);
  doc["houses"] = inst.house_ids();
  return doc;
}

inline std::string write_instance(const Instance& inst) {
  return detail::dump(instance_to_json(inst));
}

inline RawInstance raw_instance_from_json(const Json& doc) {
  detail::only_keys(doc, {"agents", "houses"}, "instance");
  RawInstance raw;
  const Json& houses = detail::required(doc, "houses", "instance");
  if (!houses.is_array()) detail::bad_field("instance.houses", "expected an array");
  for (std::size_t i = 0; i < houses.size(); ++i) {
    raw.houses.push_back(
        detail::string_field(houses[i], "instance.houses[" + std::to_string(i) + "]"));
  }
  const Json& agents = detail::required(doc, "agents", "instance");
  if (!agents.is_array()) detail::bad_field("instance.agents", "expected an array");
  for (std::size_t i = 0; i < agents.size(); ++i) {
    const std::string where = "instance.agents[" + std::to_string(i) + "]";
    const Json& entry = agents[i];
    detail::only_keys(entry, {"id", "endowment", "acceptable"}, where);
    RawAgent ra;
    ra.id = detail::string_field(detail::required(entry, "id", where), where + ".id");
    if (auto it = entry.find("endowment"); it != entry.end() && !it->is_null()) {
      ra.endowment = detail::string_field(*it, where + ".endowment");
    }
    if (auto it = entry.find("acceptable"); it != entry.end()) {
      if (!it->is_array()) detail::bad_field(where + ".acceptable", "expected an array");
      for (std::size_t k = 0; k < it->size(); ++k) {
        ra.acceptable.push_back(detail::string_field(
            (*it)[k], where + ".acceptable[" + std::to_string(k) + "]"));
      }
    }
    raw.agents.push_back(std::move(ra));
  }
  return raw;
}

inline Instance read_instance(const std::string& text) {
  return validate_instance(raw_instance_from_json(detail::parse_json(text, "instance")));
}

inline Json allocation_map_to_json(const Instance& inst, const Allocation& x) {
  Json map = Json::object();
  for (AgentIndex a = 0; a < inst.agent_count(); ++a) {
    map[inst.agent_id(a)] = x[a] ? Json(inst.house_id(*x[a])) : Json();
  }
  return map;
}

inline Json trace_to_json(const Instance& inst, const MechanismTrace& trace) {
  Json j;
  j["W"] = trace.initial_weight;
  Json perm = Json::array();
  for (AgentIndex a : trace.permutation) perm.push_back(inst.agent_id(a));
  j["permutation"] = std::move(perm);
  Json t = Json::object();
  for (AgentIndex a = 0; a < trace.t.size(); ++a) t[inst.agent_id(a)] = trace.t[a];
  j["t"] = std::move(t);
  Json rounds = Json::array();
  for (const auto& r : trace.rounds) {
    Json jr;
    jr["agent"] = inst.agent_id(r.agent);
    Json removed = Json::array();
    for (std::size_t v : r.removed) removed.push_back(detail::right_vertex_name(inst, v));
    jr["removed"] = std::move(removed);
    jr["weight"] = r.weight ? Json(*r.weight) : Json();
    jr["accepted"] = r.accepted;
    rounds.push_back(std::move(jr));
  }
  j["rounds"] = std::move(rounds);
  return j;
}

struct AllocationFile {
  Allocation allocation;
  std::size_t welfare = 0;
  std::optional<MechanismTrace> trace;

  bool operator==(const AllocationFile&) const = default;
};

inline std::string write_allocation(const Instance& inst, const Allocation& x,
                                    const MechanismTrace* trace = nullptr) {
  Json doc;
  doc["allocation"] = allocation_map_to_json(inst, x);
  doc["welfare"] = welfare(inst, x);
  if (trace) doc["trace"] = trace_to_json(inst, *trace);
  return detail::dump(doc);
}

inline MechanismTrace trace_from_json(const Instance& inst, const Json& j) {
  const std::string where = "allocation.trace";
  detail::only_keys(j, {"W", "permutation", "t", "rounds"}, where);
  MechanismTrace trace;
  const Json& w = detail::required(j, "W", where);
  if (!w.is_number_integer()) detail::bad_field(where + ".W", "expected an integer");
  trace.initial_weight = w.get<int>();
  const Json& perm = detail::required(j, "permutation", where);
  if (!perm.is_array()) detail::bad_field(where + ".permutation", "expected an array");
  for (const auto& p : perm) {
    trace.permutation.push_back(detail::parse_agent(
        inst, detail::string_field(p, where + ".permutation"), where + ".permutation"));
  }
  const Json& t = detail::required(j, "t", where);
  if (!t.is_object()) detail::bad_field(where + ".t", "expected an object");
  trace.t.assign(inst.agent_count(), 0);
  for (const auto& [key, value] : t.items()) {
    const AgentIndex a = detail::parse_agent(inst, key, where + ".t");
    if (!value.is_number_integer() || (value.get<int>() != 0 && value.get<int>() != 1)) {
      detail::bad_field(where + ".t." + key, "expected 0 or 1");
    }
    trace.t[a] = value.get<int>();
  }
  const Json& rounds = detail::required(j, "rounds", where);
  if (!rounds.is_array()) detail::bad_field(where + ".rounds", "expected an array");
  for (std::size_t i = 0; i < rounds.size(); ++i) {
    const std::string rw = where + ".rounds[" + std::to_string(i) + "]";
    detail::only_keys(rounds[i], {"agent", "removed", "weight", "accepted"}, rw);
    RefinementRound r;
    r.agent = detail::parse_agent(
        inst, detail::string_field(detail::required(rounds[i], "agent", rw), rw + ".agent"),
        rw + ".agent");
    const Json& removed = detail::required(rounds[i], "removed", rw);
    if (!removed.is_array()) detail::bad_field(rw + ".removed", "expected an array");
    for (const auto& v : removed) {
      r.removed.push_back(detail::parse_right_vertex(
          inst, detail::string_field(v, rw + ".removed"), rw + ".removed"));
    }
    const Json& weight = detail::required(rounds[i], "weight", rw);
    if (!weight.is_null()) {
      if (!weight.is_number_integer()) detail::bad_field(rw + ".weight", "expected an integer");
      r.weight = weight.get<int>();
    }
    const Json& accepted = detail::required(rounds[i], "accepted", rw);
    if (!accepted.is_boolean()) detail::bad_field(rw + ".accepted", "expected a boolean");
    r.accepted = accepted.get<bool>();
    trace.rounds.push_back(std::move(r));
  }
  return trace;
}

/// Parses an allocation file against `inst`. Every agent must appear; the
/// welfare field must match the recomputed welfare.
inline AllocationFile read_allocation(const Instance& inst, const std::string& text) {
  const Json doc = detail::parse_json(text, "allocation");
  detail::only_keys(doc, {"allocation", "welfare", "trace"}, "allocation");
  const Json& map = detail::required(doc, "allocation", "allocation");
  if (!map.is_object()) detail::bad_field("allocation.allocation", "expected an object");
  std::vector<HouseSlot> assignment(inst.agent_count());
  std::vector<char> seen(inst.agent_count(), 0);
  for (const auto& [key, value] : map.items()) {
    const std::string where = "allocation.allocation." + key;
    const AgentIndex a = detail::parse_agent(inst, key, where);
    seen[a] = 1;
    if (value.is_null()) continue;
    const std::string name = detail::string_field(value, where);
    const auto h = inst.find_house(name);
    if (!h) detail::bad_field(where, "unknown house '" + name + "'");
    assignment[a] = *h;
  }
  for (AgentIndex a = 0; a < inst.agent_count(); ++a) {
    if (!seen[a]) detail::bad_field("allocation.allocation." + inst.agent_id(a), "missing");
  }
  AllocationFile file;
  file.allocation = Allocation::validated(inst, std::move(assignment));
  const Json& w = detail::required(doc, "welfare", "allocation");
  if (!w.is_number_unsigned() && !w.is_number_integer()) {
    detail::bad_field("allocation.welfare", "expected an integer");
  }
  file.welfare = w.get<std::size_t>();
  if (file.welfare != welfare(inst, file.allocation)) {
    detail::bad_field("allocation.welfare", "does not match the allocation");
  }
  if (auto it = doc.find("trace"); it != doc.end()) file.trace = trace_from_json(inst, *it);
  return file;
}

inline Json witness_to_json(const Instance& inst, const Witness& w) {
  return std::visit(
      [&](const auto& v) -> Json {
        using T = std::decay_t<decltype(v)>;
        Json j;
        if constexpr (std::is_same_v<T, std::monostate>) {
          return Json();
        } else if constexpr (std::is_same_v<T, ViolatingAgent>) {
          j["agent"] = inst.agent_id(v.agent);
        } else if constexpr (std::is_same_v<T, BetterAllocation>) {
          j["allocation"] = allocation_map_to_json(inst, v.allocation);
          j["welfare"] = v.welfare;
        } else {
          Json members = Json::array();
          Json realloc = Json::object();
          for (std::size_t k = 0; k < v.coalition.size(); ++k) {
            members.push_back(inst.agent_id(v.coalition[k]));
            realloc[inst.agent_id(v.coalition[k])] = inst.house_id(v.reallocation[k]);
          }
          j["coalition"] = std::move(members);
          j["reallocation"] = std::move(realloc);
        }
        return j;
      },
      w);
}

inline Json manipulation_to_json(const Instance& inst, const Manipulation& m) {
  Json j;
  j["agent"] = inst.agent_id(m.agent);
  Json reported = Json::array();
  for (HouseIndex h : m.reported) reported.push_back(inst.house_id(h));
  j["reported"] = std::move(reported);
  j["gain"] = m.gain;
  return j;
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::parse_error, "cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::parse_error, "cannot write '" + path + "'");
  out << content;
}

}  // namespace tenantalloc
