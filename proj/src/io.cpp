#include "htnig/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "htnig/instruction.hpp"

namespace htnig::io {

namespace {

json coord_json(const construction::Coord& c) { return json::array({c.x, c.y, c.z}); }

construction::Coord coord_from(const json& j, const std::string& what) {
    if (!j.is_array() || j.size() != 3 || !j[0].is_number_integer() || !j[1].is_number_integer() ||
        !j[2].is_number_integer()) {
        throw FormatError(what + ": expected [x, y, z] integers");
    }
    return {j[0].get<int>(), j[1].get<int>(), j[2].get<int>()};
}

template <typename T>
T required(const json& j, const char* key) {
    if (!j.contains(key)) throw FormatError(std::string("missing field '") + key + "'");
    try {
        return j.at(key).get<T>();
    } catch (const json::exception& e) {
        throw FormatError(std::string("bad field '") + key + "': " + e.what());
    }
}

json arg_json(const htn::Arg& a) {
    if (const auto* i = std::get_if<std::int64_t>(&a)) return *i;
    return std::get<std::string>(a);
}

htn::Arg arg_from(const json& j) {
    if (j.is_number_integer()) return j.get<std::int64_t>();
    if (j.is_string()) return j.get<std::string>();
    throw FormatError("action params must be integers or strings");
}

void render(const htn::TraceNode& node, std::string& out) {
    if (node.task) {
        out += htn::to_string(*node.task);
        if (!htn::is_primitive(*node.task)) {
            out += "[" + node.candidate_label + "#" + std::to_string(node.candidate_index) + "]";
        }
    } else {
        out += "root";
    }
    if (node.children.empty()) return;
    out += "{";
    for (std::size_t i = 0; i < node.children.size(); ++i) {
        if (i) out += ";";
        render(node.children[i], out);
    }
    out += "}";
}

}  // namespace

json to_json(const ScenarioConfig& config) {
    json j{{"name", config.name},
           {"origin", coord_json(config.options.origin)},
           {"orientation", std::string(construction::name(config.options.orientation))}};
    if (config.options.markers) {
        json m = json::object();
        for (const auto& [color, pos] : *config.options.markers) m[color] = coord_json(pos);
        j["markers"] = m;
    }
    if (config.options.length) j["length"] = *config.options.length;
    if (config.options.width) j["width"] = *config.options.width;
    if (config.options.height) j["height"] = *config.options.height;
    return j;
}

ScenarioConfig scenario_config_from_json(const json& j) {
    if (!j.is_object()) throw FormatError("scenario config must be a JSON object");
    ScenarioConfig c;
    c.name = required<std::string>(j, "name");
    if (j.contains("origin")) c.options.origin = coord_from(j["origin"], "origin");
    if (j.contains("orientation")) {
        auto h = construction::heading_from_name(required<std::string>(j, "orientation"));
        if (!h) throw FormatError("orientation must be north, east, south or west");
        c.options.orientation = *h;
    }
    if (j.contains("markers")) {
        if (!j["markers"].is_object()) throw FormatError("markers must be an object of color -> [x,y,z]");
        std::map<std::string, construction::Coord> markers;
        for (const auto& [color, pos] : j["markers"].items()) markers[color] = coord_from(pos, "marker " + color);
        c.options.markers = markers;
    }
    if (j.contains("length")) c.options.length = required<int>(j, "length");
    if (j.contains("width")) c.options.width = required<int>(j, "width");
    if (j.contains("height")) c.options.height = required<int>(j, "height");
    return c;
}

construction::Scenario make_scenario(const ScenarioConfig& config) {
    return construction::make_scenario(config.name, config.options);
}

json to_json(const strategy::CostProfile& p) {
    return {{"block", p.block}, {"blockAdjacent", p.block_adjacent}, {"object", p.object}, {"teach", p.teach}};
}

strategy::CostProfile cost_profile_from_json(const json& j) {
    if (!j.is_object()) throw FormatError("costProfile must be an object");
    strategy::CostProfile p;
    p.block = required<double>(j, "block");
    p.block_adjacent = required<double>(j, "blockAdjacent");
    p.object = required<double>(j, "object");
    p.teach = required<double>(j, "teach");
    return p;
}

strategy::CostProfile apply_cost_overrides(strategy::CostProfile base, const std::string& overrides) {
    std::stringstream ss(overrides);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty()) continue;
        const auto eq = item.find('=');
        if (eq == std::string::npos) throw FormatError("cost override '" + item + "' is not key=value");
        const std::string key = item.substr(0, eq);
        double value = 0.0;
        try {
            std::size_t used = 0;
            value = std::stod(item.substr(eq + 1), &used);
            if (used != item.size() - eq - 1) throw std::invalid_argument("trailing characters");
        } catch (const std::exception&) {
            throw FormatError("cost override '" + item + "' has no numeric value");
        }
        if (key == "block") {
            base.block = value;
        } else if (key == "blockAdjacent") {
            base.block_adjacent = value;
        } else if (key == "object") {
            base.object = value;
        } else if (key == "teach") {
            base.teach = value;
        } else {
            throw FormatError("unknown cost key '" + key + "'");
        }
    }
    base.check();
    return base;
}

std::string trace_digest(const htn::DecompositionTrace& trace) {
    std::string text;
    render(trace, text);
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char ch : text) {
        h ^= ch;
        h *= 0x100000001b3ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

PlanFile make_plan_file(const ScenarioConfig& scenario, const strategy::Strategy& strategy,
                        const search::Solution& solution) {
    PlanFile f;
    f.scenario = scenario;
    f.strategy = strategy.name;
    f.cost_profile = strategy.profile;
    const auto& plan = solution.plan;
    for (std::size_t i = 0; i < plan.actions.size(); ++i) {
        const auto& a = plan.actions[i];
        f.actions.push_back({a.name, a.args, strategy::cost_of(strategy.profile, plan.state_trace.at(i), a)});
    }
    f.total_cost = plan.total_cost;
    f.trace_digest = trace_digest(solution.trace);
    return f;
}

json to_json(const PlanFile& plan) {
    json actions = json::array();
    for (const auto& e : plan.actions) {
        json params = json::array();
        for (const auto& a : e.params) params.push_back(arg_json(a));
        actions.push_back({{"kind", e.kind}, {"params", params}, {"cost", e.cost}});
    }
    return {{"scenario", to_json(plan.scenario)},
            {"strategy", plan.strategy},
            {"costProfile", to_json(plan.cost_profile)},
            {"actions", actions},
            {"totalCost", plan.total_cost},
            {"traceDigest", plan.trace_digest}};
}

PlanFile plan_file_from_json(const json& j) {
    if (!j.is_object()) throw FormatError("plan file must be a JSON object");
    PlanFile f;
    if (!j.contains("scenario")) throw FormatError("missing field 'scenario'");
    f.scenario = scenario_config_from_json(j["scenario"]);
    f.strategy = required<std::string>(j, "strategy");
    if (!j.contains("costProfile")) throw FormatError("missing field 'costProfile'");
    f.cost_profile = cost_profile_from_json(j["costProfile"]);
    if (!j.contains("actions") || !j["actions"].is_array()) throw FormatError("'actions' must be an array");
    for (const auto& a : j["actions"]) {
        PlanEntry e;
        e.kind = required<std::string>(a, "kind");
        if (!a.contains("params") || !a["params"].is_array()) throw FormatError("action 'params' must be an array");
        for (const auto& p : a["params"]) e.params.push_back(arg_from(p));
        e.cost = required<double>(a, "cost");
        f.actions.push_back(std::move(e));
    }
    f.total_cost = required<double>(j, "totalCost");
    f.trace_digest = required<std::string>(j, "traceDigest");
    return f;
}

htn::PrimitiveAction action_from(const std::string& kind, const htn::Args& params) {
    htn::PrimitiveAction probe;
    probe.name = kind;
    probe.args = params;
    try {
        if (kind == "put-block") {
            if (auto c = construction::put_block_coord(probe)) return construction::put_block(*c);
        } else if (auto ins = instruction::as_instruction(probe)) {
            return instruction::to_action(*ins);
        }
    } catch (const std::exception& e) {
        throw FormatError("bad params for action '" + kind + "': " + e.what());
    }
    throw FormatError("unknown action '" + kind + htn::to_string(params) + "'");
}

strategy::Strategy strategy_of(const PlanFile& plan) {
    auto s = strategy::default_strategy(plan.strategy);
    s.profile = plan.cost_profile;
    return s;
}

LoadedPlan load(const PlanFile& file) {
    auto scenario = make_scenario(file.scenario);
    auto strategy = strategy_of(file);
    auto problem = instruction::build_instruction_problem(scenario, strategy);
    htn::Plan plan;
    for (const auto& e : file.actions) plan.actions.push_back(action_from(e.kind, e.params));
    plan.total_cost = file.total_cost;
    std::optional<htn::DecompositionTrace> trace;
    if (auto choices = search::derive(problem, plan.actions)) trace = search::replay_trace(problem, *choices);
    return {std::move(scenario), std::move(strategy), std::move(problem), std::move(plan), std::move(trace)};
}

PlanCheck check(const PlanFile& file) {
    const auto loaded = load(file);
    PlanCheck out;
    out.report = htn::validate_plan(loaded.problem, loaded.plan, loaded.trace ? &*loaded.trace : nullptr);
    if (!loaded.trace) {
        out.report.derivable = false;
        if (out.report.message.empty()) out.report.message = "no derivation produces this action sequence";
    }
    out.digest_matches = loaded.trace && trace_digest(*loaded.trace) == file.trace_digest;
    if (out.report.executable) {
        const auto full = htn::make_plan(loaded.problem, loaded.plan.actions);
        out.entry_costs_match = true;
        for (std::size_t i = 0; i < full.actions.size(); ++i) {
            const double c = loaded.problem.cost(full.state_trace[i], full.actions[i]);
            if (std::abs(c - file.actions[i].cost) > htn::kCostTolerance) out.entry_costs_match = false;
        }
    }
    return out;
}

search::Solution to_solution(const LoadedPlan& loaded) {
    if (!loaded.trace) throw FormatError("plan has no derivation");
    search::Solution s;
    s.plan = htn::make_plan(loaded.problem, loaded.plan.actions);
    s.trace = *loaded.trace;
    return s;
}

json to_json(const session::Metrics& m) {
    json per_steps = json::object();
    for (const auto& [k, v] : m.per_object_steps) per_steps[k] = v;
    json per_seconds = json::object();
    for (const auto& [k, v] : m.per_object_seconds) per_seconds[k] = v;
    return {{"successful", m.successful},
            {"timedOut", m.timed_out},
            {"durationSteps", m.duration_steps},
            {"durationSeconds", m.duration_seconds},
            {"mistakes", m.mistakes},
            {"placements", m.placements},
            {"perObjectSteps", per_steps},
            {"perObjectSeconds", per_seconds}};
}

json read_json_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw FormatError("cannot open " + path.string());
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        throw FormatError(path.string() + ": " + e.what());
    }
}

void write_json_file(const std::filesystem::path& path, const json& j) {
    std::ofstream out(path);
    if (!out) throw FormatError("cannot write " + path.string());
    out << j.dump(2) << "\n";
}

}  // namespace htnig::io
