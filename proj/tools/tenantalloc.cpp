// tenantalloc: run, verify, generate and tabulate house allocations with
// existing tenants.
//
// Exit codes: 0 ok, 1 property failure, 2 input error, 3 internal error,
// 4 oracle budget exceeded.

#include <cstdint>
#include <filesystem>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "tenantalloc/error.hpp"
#include "tenantalloc/gen.hpp"
#include "tenantalloc/io.hpp"
#include "tenantalloc/mechanisms.hpp"
#include "tenantalloc/oracles.hpp"
#include "tenantalloc/properties.hpp"
#include "tenantalloc/report.hpp"

namespace ta = tenantalloc;

namespace {

constexpr int kOk = 0;
constexpr int kPropertyFailure = 1;
constexpr int kInputError = 2;
constexpr int kInternalError = 3;
constexpr int kBudgetExceeded = 4;

int exit_code_for(const ta::Error& e) {
  switch (e.code()) {
    case ta::ErrorCode::budget_exceeded: return kBudgetExceeded;
    case ta::ErrorCode::internal_error:
    case ta::ErrorCode::infeasible_input:
    case ta::ErrorCode::unbalanced_graph: return kInternalError;
    default: return kInputError;
  }
}

void emit(const std::string& path, const std::string& content) {
  if (path.empty() || path == "-") {
    std::cout << content;
  } else {
    ta::write_file(path, content);
  }
}

ta::PermutationPolicy parse_policy(const ta::Instance& inst, const std::string& choice) {
  if (choice == "identity") return ta::PermutationPolicy::identity();
  if (choice.rfind("seed:", 0) == 0) {
    const std::string digits = choice.substr(5);
    std::size_t pos = 0;
    std::uint64_t seed = 0;
    try {
      seed = std::stoull(digits, &pos);
    } catch (const std::exception&) {
      pos = 0;
    }
    if (digits.empty() || pos != digits.size() || digits[0] == '-') {
      throw ta::Error(ta::ErrorCode::invalid_permutation, "--permutation seed is not a u64");
    }
    return ta::PermutationPolicy::seeded(seed);
  }
  if (choice.rfind("file:", 0) == 0) {
    const auto doc = ta::detail::parse_json(ta::read_file(choice.substr(5)), "permutation");
    if (!doc.is_array()) {
      throw ta::Error(ta::ErrorCode::invalid_permutation, "permutation file must hold an array");
    }
    std::vector<ta::AgentIndex> order;
    for (const auto& v : doc) {
      order.push_back(
          ta::detail::parse_agent(inst, ta::detail::string_field(v, "permutation"), "permutation"));
    }
    auto policy = ta::PermutationPolicy::explicit_order(std::move(order));
    (void)ta::realize(policy, inst.agent_count());
    return policy;
  }
  throw ta::Error(ta::ErrorCode::invalid_permutation,
                  "--permutation must be identity, seed:<u64> or file:<path>");
}

std::vector<ta::Property> parse_properties(const std::string& list) {
  std::vector<ta::Property> out;
  std::stringstream ss(list);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.push_back(ta::parse_property(item));
  }
  if (out.empty()) throw ta::Error(ta::ErrorCode::parse_error, "--properties is empty");
  return out;
}

std::string describe(const ta::Instance& inst, const ta::PropertyVerdict& v) {
  std::ostringstream out;
  out << ta::to_string(v.property) << ": " << (v.holds ? "holds" : "fails");
  if (v.holds) return out.str();
  std::visit(
      [&](const auto& w) {
        using T = std::decay_t<decltype(w)>;
        if constexpr (std::is_same_v<T, ta::ViolatingAgent>) {
          out << " (agent " << inst.agent_id(w.agent) << " is worse off than allowed)";
        } else if constexpr (std::is_same_v<T, ta::BetterAllocation>) {
          out << (v.property == ta::Property::po ? " (dominated by an allocation with welfare "
                                                 : " (an allocation reaches welfare ")
              << w.welfare << ")";
        } else if constexpr (std::is_same_v<T, ta::CoalitionWitness>) {
          out << " (coalition {";
          for (std::size_t k = 0; k < w.coalition.size(); ++k) {
            out << (k ? "," : "") << inst.agent_id(w.coalition[k]);
          }
          out << "} blocks)";
        }
      },
      v.witness);
  return out.str();
}

int cmd_run(const std::string& input, const std::string& mechanism, const std::string& perm,
            const std::string& output) {
  const auto inst = ta::read_instance(ta::read_file(input));
  const auto variant = mechanism == "mir" ? ta::Mechanism::mir : ta::Mechanism::msir;
  const auto policy = parse_policy(inst, perm);
  const auto res = ta::run_mechanism(inst, variant, policy);
  emit(output, ta::write_allocation(inst, res.allocation, &res.trace));
  return kOk;
}

int cmd_verify(const std::string& instance_path, const std::string& allocation_path,
               const std::string& properties) {
  const auto inst = ta::read_instance(ta::read_file(instance_path));
  const auto file = ta::read_allocation(inst, ta::read_file(allocation_path));
  const auto props = parse_properties(properties);
  const auto report = ta::evaluate(inst, file.allocation, props, ta::SizeBudget::from_environment());
  for (const auto& v : report.verdicts) {
    if (!ta::witness_is_sound(inst, file.allocation, v)) {
      throw ta::Error(ta::ErrorCode::internal_error,
                      "witness for " + std::string(ta::to_string(v.property)) + " does not verify");
    }
    std::cout << describe(inst, v) << "\n";
    if (!v.holds) std::cout << "  witness: " << ta::witness_to_json(inst, v.witness).dump() << "\n";
  }
  return report.all_hold() ? kOk : kPropertyFailure;
}

int cmd_gen(const ta::GenParams& params, const std::string& output) {
  emit(output, ta::write_instance(ta::random_instance(params)));
  return kOk;
}

int cmd_report(ta::ReportParams params, const std::string& out_dir) {
  params.budget = ta::SizeBudget::from_environment();
  const auto rep = ta::run_report(params);
  std::cout << ta::render_table(rep);

  namespace fs = std::filesystem;
  fs::create_directories(out_dir);
  ta::Json summary;
  summary["trials"] = params.trials;
  summary["seed"] = params.seed;
  summary["max_agents"] = params.max_agents;
  summary["max_houses"] = params.max_houses;
  ta::Json rows = ta::Json::array();
  std::cout << "\ncounterexamples:\n";
  for (ta::Mechanism m : {ta::Mechanism::msir, ta::Mechanism::mir}) {
    for (ta::Row r : ta::kRows) {
      if (!rep.evaluated(r)) continue;
      const auto& cell = rep.at(m, r);
      ta::Json jr;
      jr["mechanism"] = ta::to_string(m);
      jr["property"] = ta::row_key(r);
      jr["claimed"] = ta::claimed(m, r);
      jr["evaluated"] = cell.evaluated;
      jr["passed"] = cell.passed;
      if (cell.counterexample) {
        const auto& ce = *cell.counterexample;
        const std::string stem = ta::to_string(m) + "-" + std::string(ta::row_key(r));
        const auto inst_path = (fs::path(out_dir) / (stem + "-instance.json")).string();
        const auto alloc_path = (fs::path(out_dir) / (stem + "-allocation.json")).string();
        const auto wit_path = (fs::path(out_dir) / (stem + "-witness.json")).string();
        ta::write_file(inst_path, ta::write_instance(ce.instance));
        ta::write_file(alloc_path, ta::write_allocation(ce.instance, ce.allocation, &ce.trace));
        const ta::Json wit = ce.manipulation ? ta::manipulation_to_json(ce.instance, *ce.manipulation)
                                             : ta::witness_to_json(ce.instance, ce.witness);
        ta::write_file(wit_path, wit.dump(2) + "\n");
        jr["counterexample"] = {{"source", ce.source},
                                {"instance", inst_path},
                                {"allocation", alloc_path},
                                {"witness", wit_path}};
        std::cout << "  " << ta::to_string(m) << " / " << ta::row_key(r) << " (" << ce.source
                  << "): " << inst_path << "\n";
      }
      rows.push_back(std::move(jr));
    }
  }
  summary["cells"] = std::move(rows);
  summary["claims_hold"] = rep.claims_hold();
  ta::write_file((fs::path(out_dir) / "summary.json").string(), summary.dump(2) + "\n");
  if (!rep.claims_hold()) {
    std::cout << "\nA claimed property failed on at least one instance.\n";
    return kPropertyFailure;
  }
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"House allocation with existing tenants under dichotomous preferences"};
  app.require_subcommand(1);

  std::string input, output, mechanism = "msir", permutation = "identity";
  auto* run = app.add_subcommand("run", "Run MSIR or MIR on an instance file");
  run->add_option("input", input, "Instance file")->required();
  run->add_option("--mechanism", mechanism, "msir or mir")
      ->check(CLI::IsMember({"msir", "mir"}));
  run->add_option("--permutation", permutation, "identity | seed:<u64> | file:<path>");
  run->add_option("--output", output, "Allocation file (default: stdout)");

  std::string alloc_path, properties = "ir,sir,po,core,maxw,maxw-ir,maxw-sir";
  auto* verify = app.add_subcommand("verify", "Check allocation properties");
  verify->add_option("instance", input, "Instance file")->required();
  verify->add_option("allocation", alloc_path, "Allocation file")->required();
  verify->add_option("--properties", properties,
                     "Comma list of ir,sir,po,core,strict-core,maxw,maxw-ir,maxw-sir");

  ta::GenParams gen_params;
  auto* gen = app.add_subcommand("gen", "Generate a random instance");
  gen->add_option("--agents", gen_params.agents, "Number of agents")->required();
  gen->add_option("--houses", gen_params.houses, "Number of houses")->required();
  gen->add_option("--endow-prob", gen_params.endow_prob, "Probability an agent owns a house");
  gen->add_option("--accept-prob", gen_params.accept_prob,
                  "Probability a house is acceptable to an agent");
  gen->add_option("--seed", gen_params.seed, "64-bit seed");
  gen->add_option("--output", output, "Instance file (default: stdout)");

  ta::ReportParams report_params;
  std::string sp = "off", out_dir = "report_counterexamples";
  auto* report = app.add_subcommand("report", "Tabulate property pass rates on random markets");
  report->add_option("--trials", report_params.trials, "Number of random instances");
  report->add_option("--seed", report_params.seed, "64-bit seed");
  report->add_option("--max-agents", report_params.max_agents, "Largest agent count");
  report->add_option("--max-houses", report_params.max_houses, "Largest house count");
  report->add_option("--sp", sp, "Include the strategyproofness sweep")
      ->check(CLI::IsMember({"on", "off"}));
  report->add_option("--out-dir", out_dir, "Directory for counterexample files");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kInputError;
  }

  try {
    if (*run) return cmd_run(input, mechanism, permutation, output);
    if (*verify) return cmd_verify(input, alloc_path, properties);
    if (*gen) return cmd_gen(gen_params, output);
    if (*report) {
      report_params.strategyproofness = sp == "on";
      return cmd_report(report_params, out_dir);
    }
  } catch (const ta::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_code_for(e);
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return kInternalError;
  }
  return kInternalError;
}
