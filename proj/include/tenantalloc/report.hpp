#pragma once

// Empirical property table: run both mechanisms on seeded random markets and
// count how often each property holds. Cells that are theorems must read
// 100%; for the others the first counterexample found is kept.

#include <array>
#include <cstddef>
#include <cstdint>
#include <iomanip>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "tenantalloc/gen.hpp"
#include "tenantalloc/mechanisms.hpp"
#include "tenantalloc/oracles.hpp"
#include "tenantalloc/properties.hpp"
#include "tenantalloc/random.hpp"

namespace tenantalloc {

struct ReportParams {
  std::size_t trials = 1000;
  std::uint64_t seed = 7;
  std::size_t max_agents = 6;
  std::size_t max_houses = 6;
  bool strategyproofness = false;
  SizeBudget budget{};
};

/// Row order of the table. Strategyproofness is a mechanism property and is
/// evaluated only when requested.
enum class Row { sir, ir, core, po, maxw_sir, maxw_ir, maxw, sp };

inline constexpr std::array<Row, 8> kRows = {Row::sir, Row::ir,      Row::core, Row::po,
                                             Row::maxw_sir, Row::maxw_ir, Row::maxw, Row::sp};

inline std::string_view row_label(Row r) {
  switch (r) {
    case Row::sir: return "S-IR";
    case Row::ir: return "IR";
    case Row::core: return "Core";
    case Row::po: return "Pareto optimal";
    case Row::maxw_sir: return "Max welfare s.t. S-IR";
    case Row::maxw_ir: return "Max welfare s.t. IR";
    case Row::maxw: return "Max welfare";
    case Row::sp: return "Strategyproof";
  }
  return "?";
}

inline std::string_view row_key(Row r) {
  switch (r) {
    case Row::sir: return "sir";
    case Row::ir: return "ir";
    case Row::core: return "core";
    case Row::po: return "po";
    case Row::maxw_sir: return "maxw-sir";
    case Row::maxw_ir: return "maxw-ir";
    case Row::maxw: return "maxw";
    case Row::sp: return "sp";
  }
  return "?";
}

inline std::optional<Property> row_property(Row r) {
  switch (r) {
    case Row::sir: return Property::sir;
    case Row::ir: return Property::ir;
    case Row::core: return Property::core;
    case Row::po: return Property::po;
    case Row::maxw_sir: return Property::maxw_sir;
    case Row::maxw_ir: return Property::maxw_ir;
    case Row::maxw: return Property::maxw;
    case Row::sp: return std::nullopt;
  }
  return std::nullopt;
}

/// The claimed pattern: true where the mechanism is proven to satisfy the
/// property.
inline bool claimed(Mechanism m, Row r) {
  switch (r) {
    case Row::sir: return m == Mechanism::msir;
    case Row::ir: return true;
    case Row::core: return m == Mechanism::msir;
    case Row::po: return m == Mechanism::mir;
    case Row::maxw_sir: return m == Mechanism::msir;
    case Row::maxw_ir: return m == Mechanism::mir;
    case Row::maxw: return m == Mechanism::mir;
    case Row::sp: return true;
  }
  return false;
}

struct Counterexample {
  std::string source;  // "trial <k>" or "fixture <name>"
  Instance instance;
  Allocation allocation;
  MechanismTrace trace;
  Witness witness;
  std::optional<Manipulation> manipulation;
};

struct Cell {
  std::size_t evaluated = 0;
  std::size_t passed = 0;
  std::optional<Counterexample> counterexample;

  double rate() const { return evaluated == 0 ? 1.0 : static_cast<double>(passed) / evaluated; }
  bool perfect() const { return passed == evaluated; }
};

struct Report {
  ReportParams params;
  /// cells[mechanism][row]
  std::array<std::array<Cell, kRows.size()>, 2> cells{};

  Cell& at(Mechanism m, Row r) { return cells[static_cast<std::size_t>(m)][static_cast<std::size_t>(r)]; }
  const Cell& at(Mechanism m, Row r) const {
    return cells[static_cast<std::size_t>(m)][static_cast<std::size_t>(r)];
  }

  bool evaluated(Row r) const { return r != Row::sp || params.strategyproofness; }

  /// Every claimed cell at 100%.
  bool claims_hold() const {
    for (Mechanism m : {Mechanism::msir, Mechanism::mir}) {
      for (Row r : kRows) {
        if (evaluated(r) && claimed(m, r) && !at(m, r).perfect()) return false;
      }
    }
    return true;
  }
};

/// Market parameters for trial k: sizes in [1, max], endowment probability
/// in [0, 1], acceptability probability in [0.05, 0.65]; all from one
/// SplitMix64 stream seeded with the report seed, five draws per trial.
inline GenParams trial_params(const ReportParams& p, SplitMix64& rng) {
  GenParams g;
  g.agents = 1 + static_cast<std::size_t>(rng.below(p.max_agents));
  g.houses = 1 + static_cast<std::size_t>(rng.below(p.max_houses));
  g.endow_prob = rng.unit();
  g.accept_prob = 0.05 + 0.6 * rng.unit();
  g.seed = rng.next();
  return g;
}

namespace detail {

inline void tally(Report& rep, Mechanism m, Row r, bool ok, const std::string& source,
                  const Instance& inst, const MechanismResult& run, Witness witness,
                  std::optional<Manipulation> manip = std::nullopt) {
  Cell& c = rep.at(m, r);
  ++c.evaluated;
  if (ok) {
    ++c.passed;
  } else if (!c.counterexample) {
    c.counterexample =
        Counterexample{source, inst, run.allocation, run.trace, std::move(witness), std::move(manip)};
  }
}

inline void evaluate_instance(Report& rep, const Instance& inst, const std::string& source,
                              bool count) {
  for (Mechanism m : {Mechanism::msir, Mechanism::mir}) {
    const auto run = run_mechanism(inst, m);
    for (Row r : kRows) {
      if (!rep.evaluated(r)) continue;
      Cell& c = rep.at(m, r);
      if (!count && c.counterexample) continue;
      if (const auto prop = row_property(r)) {
        auto v = evaluate(inst, run.allocation, *prop, rep.params.budget);
        if (count) {
          tally(rep, m, r, v.holds, source, inst, run, std::move(v.witness));
        } else if (!v.holds) {
          c.counterexample =
              Counterexample{source, inst, run.allocation, run.trace, std::move(v.witness), {}};
        }
      } else {
        auto manip = check_strategyproofness(inst, m, PermutationPolicy::identity(),
                                             rep.params.budget);
        if (count) {
          tally(rep, m, r, !manip, source, inst, run, {}, manip);
        } else if (manip) {
          c.counterexample = Counterexample{source, inst, run.allocation, run.trace, {}, manip};
        }
      }
    }
  }
}

}  // namespace detail

/// Small markets from the literature, used only to supply counterexamples
/// for unclaimed cells the random sample missed. They never enter the rates.
inline std::vector<std::pair<std::string, Instance>> reference_fixtures() {
  return {
      {"two-agent", Instance::from_indices(2, 2, {0, 1}, {{1}, {}})},
      {"four-agent-core",
       Instance::from_indices(4, 4, {0, 1, 2, 3}, {{2}, {3}, {3}, {2}})},
  };
}

inline Report run_report(const ReportParams& params) {
  if (params.max_agents == 0 || params.max_houses == 0) {
    throw Error(ErrorCode::invalid_params, "max agents and max houses must be positive");
  }
  detail::budget_check(params.max_agents <= params.budget.max_enum_agents, "max_enum_agents",
                       params.budget.max_enum_agents, params.max_agents);
  detail::budget_check(params.max_houses <= params.budget.max_enum_houses, "max_enum_houses",
                       params.budget.max_enum_houses, params.max_houses);
  detail::budget_check(params.max_agents <= params.budget.max_coalition_agents,
                       "max_coalition_agents", params.budget.max_coalition_agents,
                       params.max_agents);
  if (params.strategyproofness) {
    detail::budget_check(params.max_houses <= params.budget.max_misreport_houses,
                         "max_misreport_houses", params.budget.max_misreport_houses,
                         params.max_houses);
  }

  Report rep;
  rep.params = params;
  SplitMix64 rng(params.seed);
  for (std::size_t k = 0; k < params.trials; ++k) {
    const auto inst = random_instance(trial_params(params, rng));
    detail::evaluate_instance(rep, inst, "trial " + std::to_string(k), true);
  }
  for (const auto& [name, inst] : reference_fixtures()) {
    detail::evaluate_instance(rep, inst, "fixture " + name, false);
  }
  return rep;
}

inline std::string render_table(const Report& rep) {
  std::ostringstream out;
  out << "trials: " << rep.params.trials << "  seed: " << rep.params.seed
      << "  max agents: " << rep.params.max_agents << "  max houses: " << rep.params.max_houses
      << "\n\n";
  out << std::left << std::setw(24) << "property" << std::right << std::setw(10) << "MSIR"
      << std::setw(10) << "MIR" << std::setw(10) << "claimed" << "\n";
  for (Row r : kRows) {
    if (!rep.evaluated(r)) continue;
    out << std::left << std::setw(24) << row_label(r) << std::right;
    for (Mechanism m : {Mechanism::msir, Mechanism::mir}) {
      std::ostringstream cell;
      cell << std::fixed << std::setprecision(1) << 100.0 * rep.at(m, r).rate() << "%";
      out << std::setw(10) << cell.str();
    }
    std::string pattern = std::string(claimed(Mechanism::msir, r) ? "+" : "-") + " / " +
                          (claimed(Mechanism::mir, r) ? "+" : "-");
    out << std::setw(10) << pattern << "\n";
  }
  return out.str();
}

}  // namespace tenantalloc
