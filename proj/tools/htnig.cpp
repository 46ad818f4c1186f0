// htnig: plan, validate, oracle, simulate and serve instruction plans.
// Exit codes: 0 success, 1 failure, 2 usage error.

#include <csignal>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "htnig/construction.hpp"
#include "htnig/instruction.hpp"
#include "htnig/io.hpp"
#include "htnig/realizer.hpp"
#include "htnig/search.hpp"
#include "htnig/server.hpp"
#include "htnig/session.hpp"
#include "htnig/strategy.hpp"

namespace fs = std::filesystem;
using namespace htnig;

namespace {

constexpr int kFailure = 1;
constexpr int kUsage = 2;

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A bundled scenario name, or a path to a JSON scenario config.
io::ScenarioConfig scenario_arg(const std::string& arg) {
    const auto& names = construction::scenario_names();
    if (std::find(names.begin(), names.end(), arg) != names.end()) return {arg, {}};
    if (!fs::exists(arg)) throw UsageError("--scenario: '" + arg + "' is neither a scenario name nor a file");
    return io::scenario_config_from_json(io::read_json_file(arg));
}

strategy::Strategy strategy_arg(const std::string& name, const std::string& overrides) {
    auto s = strategy::default_strategy(name);
    if (!overrides.empty()) {
        try {
            s.profile = io::apply_cost_overrides(s.profile, overrides);
        } catch (const std::exception& e) {
            throw UsageError(std::string("--cost-overrides: ") + e.what());
        }
    }
    return s;
}

search::Solution solve(const construction::Scenario& scenario, const strategy::Strategy& strategy) {
    const auto problem = instruction::build_instruction_problem(scenario, strategy);
    search::SearchConfig config;
    config.bound = instruction::instruction_bound(scenario, strategy.profile);
    return search::plan(problem, config);
}

void print_listing(const construction::Scenario& scenario, const htn::Plan& plan) {
    realizer::DiscourseState ds;
    ds.world = scenario.initial;
    std::size_t n = 0;
    for (const auto& a : plan.actions) {
        if (auto c = construction::put_block_coord(a)) {
            ds.world.occupied.insert(*c);
        } else if (auto ins = instruction::as_instruction(a)) {
            std::cout << std::setw(3) << ++n << "  " << std::left << std::setw(44) << instruction::to_string(*ins)
                      << std::right << realizer::realize(*ins, ds) << "\n";
            realizer::update(ds, *ins);
        }
    }
}

int cmd_plan(const std::string& scenario_name, const std::string& strategy_name, const std::string& overrides,
             const std::string& out) {
    const auto config = scenario_arg(scenario_name);
    const auto strategy = strategy_arg(strategy_name, overrides);
    const auto scenario = io::make_scenario(config);
    search::Solution solution;
    try {
        solution = solve(scenario, strategy);
    } catch (const search::NoSolution& e) {
        std::cerr << "htnig plan: " << e.what() << "\n";
        return kFailure;
    }
    print_listing(scenario, solution.plan);
    std::cout << "total cost " << solution.plan.total_cost << " (" << solution.stats.nodes << " nodes"
              << (solution.optimal ? ", optimal" : ", not proven optimal") << ")\n";
    if (!out.empty()) io::write_json_file(out, io::to_json(io::make_plan_file(config, strategy, solution)));
    return solution.optimal ? 0 : kFailure;
}

int cmd_validate(const std::string& path) {
    const auto file = io::plan_file_from_json(io::read_json_file(path));
    const auto result = io::check(file);
    const auto& r = result.report;
    std::cout << "executable    " << (r.executable ? "yes" : "no") << "\n"
              << "derivable     " << (r.derivable.value_or(false) ? "yes" : "no") << "\n"
              << "cost          " << r.cost << (r.cost_matches ? " (matches)" : " (MISMATCH)") << "\n"
              << "entry costs   " << (result.entry_costs_match ? "match" : "MISMATCH") << "\n"
              << "trace digest  " << (result.digest_matches ? "matches" : "MISMATCH") << "\n";
    if (!r.message.empty()) std::cout << "note          " << r.message << "\n";
    std::cout << (result.ok() ? "OK" : "INVALID") << "\n";
    return result.ok() ? 0 : kFailure;
}

int cmd_oracle(const std::string& scenario_name, const std::string& strategy_name, const std::string& overrides,
               double budget) {
    const auto scenario = io::make_scenario(scenario_arg(scenario_name));
    const auto strategy = strategy_arg(strategy_name, overrides);
    const auto problem = instruction::build_instruction_problem(scenario, strategy);
    try {
        std::cout << search::exhaustive_optimal(problem, static_cast<std::size_t>(budget)) << "\n";
    } catch (const search::BudgetExceeded& e) {
        std::cerr << "htnig oracle: " << e.what() << "\n";
        return kFailure;
    } catch (const search::NoSolution& e) {
        std::cerr << "htnig oracle: " << e.what() << "\n";
        return kFailure;
    }
    return 0;
}

session::FollowerScript follower_arg(const std::string& arg, std::uint64_t seed) {
    if (arg == "perfect") return session::FollowerScript::perfect();
    if (arg == "permuting") return session::FollowerScript::permuting(seed);
    if (arg.rfind("noisy:", 0) == 0) {
        try {
            std::size_t used = 0;
            const double p = std::stod(arg.substr(6), &used);
            if (used != arg.size() - 6) throw std::invalid_argument("trailing characters");
            return session::FollowerScript::noisy(p, seed);
        } catch (const std::exception&) {
            throw UsageError("--follower: noisy:p needs p in [0, 1]");
        }
    }
    throw UsageError("--follower must be perfect, permuting or noisy:p");
}

int cmd_simulate(const std::string& path, const std::string& follower, std::uint64_t seed, const std::string& log) {
    const auto script = follower_arg(follower, seed);
    const auto file = io::plan_file_from_json(io::read_json_file(path));
    if (!io::check(file).ok()) {
        std::cerr << "plan file does not validate: " << path << "\n";
        return kFailure;
    }
    const auto loaded = io::load(file);
    session::SessionOptions options;
    options.logical_time = true;
    auto s = session::Session::start(loaded.scenario, loaded.strategy, io::to_solution(loaded), options);
    const auto run = session::run_scripted(s, script);
    if (!log.empty()) {
        std::ofstream out(log);
        if (!out) throw io::FormatError("cannot write " + log);
        for (const auto& e : s.events()) out << session::to_jsonl(e) << "\n";
    }
    auto j = io::to_json(run.metrics);
    j["injectedErrors"] = run.injected_errors;
    std::cout << j.dump(2) << "\n";
    return run.metrics.successful ? 0 : kFailure;
}

server::HttpFrontend* g_frontend = nullptr;

extern "C" void on_signal(int) {
    if (g_frontend) g_frontend->stop();
}

int cmd_serve(std::optional<int> port, const std::string& host, const std::string& static_dir,
              const std::string& log_dir, double timeout) {
    if (!port) {
        const char* env = std::getenv("PORT");
        try {
            port = env ? std::stoi(env) : 8080;
        } catch (const std::exception&) {
            throw UsageError("PORT is not a number");
        }
    }
    server::HubOptions options;
    options.limits.max_seconds = timeout;
    if (!log_dir.empty()) {
        fs::create_directories(log_dir);
        options.log_dir = log_dir;
    }
    server::SessionHub hub(options);
    server::HttpFrontend frontend(hub, static_dir.empty() ? std::nullopt : std::optional<fs::path>(static_dir));
    int bound = 0;
    try {
        bound = frontend.bind(host, *port);
    } catch (const std::exception& e) {
        std::cerr << "htnig serve: " << e.what() << "\n";
        return kFailure;
    }
    g_frontend = &frontend;
    std::signal(SIGINT, on_signal);
    std::signal(SIGTERM, on_signal);
    std::cout << "listening on http://" << host << ":" << bound << std::endl;
    frontend.listen();
    g_frontend = nullptr;
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"HTN instruction planner for block construction"};
    app.require_subcommand(1);

    std::string scenario = "bridge", strategy_name = "high-level", overrides, out, plan_path, follower = "perfect", log;
    std::string host = "127.0.0.1", static_dir, log_dir;
    std::uint64_t seed = 0;
    double budget = 1e7, timeout = 600.0;
    std::optional<int> port;
    const auto strategies = CLI::IsMember(strategy::strategy_names());

    auto* plan = app.add_subcommand("plan", "compute an optimal instruction plan");
    plan->add_option("--scenario", scenario, "scenario name or JSON config file")->capture_default_str();
    plan->add_option("--strategy", strategy_name)->check(strategies)->capture_default_str();
    plan->add_option("--cost-overrides", overrides, "e.g. block=10,blockAdjacent=5,object=2,teach=1");
    plan->add_option("--out", out, "write the plan file here");

    auto* validate = app.add_subcommand("validate", "check a plan file");
    validate->add_option("--plan", plan_path)->required();

    auto* oracle = app.add_subcommand("oracle", "optimal cost by exhaustive enumeration (small scenarios)");
    oracle->add_option("--scenario", scenario)->capture_default_str();
    oracle->add_option("--strategy", strategy_name)->check(strategies)->capture_default_str();
    oracle->add_option("--cost-overrides", overrides);
    oracle->add_option("--budget", budget, "leaf budget")->capture_default_str();

    auto* simulate = app.add_subcommand("simulate", "run a plan file against a scripted follower");
    simulate->add_option("--plan", plan_path)->required();
    simulate->add_option("--follower", follower, "perfect | permuting | noisy:p")->capture_default_str();
    simulate->add_option("--seed", seed)->capture_default_str();
    simulate->add_option("--log", log, "write session events as JSONL");

    auto* serve = app.add_subcommand("serve", "run the session server");
    serve->add_option("--port", port, "defaults to $PORT, then 8080");
    serve->add_option("--host", host)->capture_default_str();
    serve->add_option("--static", static_dir, "directory served at /");
    serve->add_option("--log-dir", log_dir, "per-session JSONL logs");
    serve->add_option("--timeout", timeout, "session time limit in seconds")->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kUsage;
    }

    try {
        if (*plan) return cmd_plan(scenario, strategy_name, overrides, out);
        if (*validate) return cmd_validate(plan_path);
        if (*oracle) return cmd_oracle(scenario, strategy_name, overrides, budget);
        if (*simulate) return cmd_simulate(plan_path, follower, seed, log);
        if (*serve) return cmd_serve(port, host, static_dir, log_dir, timeout);
    } catch (const UsageError& e) {
        std::cerr << "htnig: " << e.what() << "\n";
        return kUsage;
    } catch (const std::exception& e) {
        std::cerr << "htnig: " << e.what() << "\n";
        return kFailure;
    }
    return kUsage;
}
