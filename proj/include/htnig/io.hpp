#pragma once

// JSON artifacts: scenario configs, plan files, metrics.
//
// Scenario config:
//   {"name": "bridge" | "house" | "mini-bridge",
//    "origin": [x, y, z],                       optional, default [0,0,0]
//    "orientation": "north"|"east"|"south"|"west", optional, default "north"
//    "markers": {"blue": [x, y, z], ...},       optional, replaces default markers
//    "length": n, "width": n, "height": n}      optional dimension overrides
//
// Plan file:
//   {"scenario": <scenario config>,
//    "strategy": "low-level" | "teaching" | "high-level",
//    "costProfile": {"block", "blockAdjacent", "object", "teach"},
//    "actions": [{"kind": "ins-block", "params": [0, 1, 1], "cost": 10.0}, ...],
//    "totalCost": 150.0,
//    "traceDigest": "<16 hex digits>"}

#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "htnig/construction.hpp"
#include "htnig/htn.hpp"
#include "htnig/search.hpp"
#include "htnig/session.hpp"
#include "htnig/strategy.hpp"

namespace htnig::io {

using nlohmann::json;

struct FormatError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ScenarioConfig {
    std::string name = "bridge";
    construction::ScenarioOptions options;
};

json to_json(const ScenarioConfig& config);
ScenarioConfig scenario_config_from_json(const json& j);
construction::Scenario make_scenario(const ScenarioConfig& config);

json to_json(const strategy::CostProfile& profile);
strategy::CostProfile cost_profile_from_json(const json& j);
/// "block=10,blockAdjacent=5,object=2,teach=1"; unspecified keys keep `base`.
strategy::CostProfile apply_cost_overrides(strategy::CostProfile base, const std::string& overrides);

/// FNV-1a over a canonical pre-order rendering of the trace.
std::string trace_digest(const htn::DecompositionTrace& trace);

struct PlanEntry {
    std::string kind;
    htn::Args params;
    double cost = 0.0;

    bool operator==(const PlanEntry&) const = default;
};

struct PlanFile {
    ScenarioConfig scenario;
    std::string strategy;
    strategy::CostProfile cost_profile;
    std::vector<PlanEntry> actions;
    double total_cost = 0.0;
    std::string trace_digest;
};

PlanFile make_plan_file(const ScenarioConfig& scenario, const strategy::Strategy& strategy,
                        const search::Solution& solution);
json to_json(const PlanFile& plan);
PlanFile plan_file_from_json(const json& j);

/// Rebuilds a vocabulary action (put-block or ins-*) from its kind and params.
htn::PrimitiveAction action_from(const std::string& kind, const htn::Args& params);

/// The strategy a plan file was made with: default knowledge for its name,
/// profile from the file.
strategy::Strategy strategy_of(const PlanFile& plan);

/// Everything needed to validate or replay a plan file.
struct LoadedPlan {
    construction::Scenario scenario;
    strategy::Strategy strategy;
    htn::PlanningProblem problem;
    htn::Plan plan;  // actions and total cost as stored; no state trace
    std::optional<htn::DecompositionTrace> trace;  // recovered by plan recognition
};

LoadedPlan load(const PlanFile& plan);

struct PlanCheck {
    htn::ValidationReport report;
    bool digest_matches = false;
    bool entry_costs_match = false;

    bool ok() const { return report.ok() && digest_matches && entry_costs_match; }
};

PlanCheck check(const PlanFile& plan);

/// Solution record (plan with state trace, recovered trace) for a plan file
/// that passes check().
search::Solution to_solution(const LoadedPlan& loaded);

json to_json(const session::Metrics& metrics);

json read_json_file(const std::filesystem::path& path);
void write_json_file(const std::filesystem::path& path, const json& j);

}  // namespace htnig::io
