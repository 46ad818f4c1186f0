#include <doctest.h>

#include <set>

#include "htnig/construction.hpp"
#include "htnig/instruction.hpp"
#include "htnig/search.hpp"
#include "random_problem.hpp"
#include "support.hpp"

using namespace htnig;
using htn::Plan;

TEST_SUITE("search") {

TEST_CASE("empty network gives the empty optimal plan") {
    htn::PlanningProblem p;
    p.cost = [](const htn::State&, const htn::PrimitiveAction&) { return 1.0; };
    const auto sol = search::plan(p);
    CHECK(sol.plan.actions.empty());
    CHECK(sol.optimal);
    CHECK(search::exhaustive_optimal(p) == 0.0);
}

TEST_CASE("construction-only bridge covers the unoccupied target cells") {
    const auto scenario = construction::make_scenario("bridge");
    const auto sol = search::plan(construction::build_construction_problem(scenario));
    const auto placed = construction::placements(sol.plan);
    CHECK(placed.size() == 25);
    std::set<construction::Coord> expected = construction::target_shape(scenario);
    for (const auto& [color, c] : scenario.initial.markers) expected.erase(c);
    CHECK(std::set<construction::Coord>(placed.begin(), placed.end()) == expected);
}

TEST_CASE("no executable derivation raises NoSolution") {
    htn::PlanningProblem p;
    p.initial_network = {htn::PrimitiveAction{"x", {}, {{testing::rfact(0), true}}, {}, {}, {}}};
    p.cost = [](const htn::State&, const htn::PrimitiveAction&) { return 1.0; };
    CHECK_THROWS_AS(search::plan(p), search::NoSolution);
    CHECK_THROWS_AS(search::exhaustive_optimal(p), search::NoSolution);
}

TEST_CASE("depth limit and node budget") {
    const auto scenario = construction::make_scenario("mini-bridge");
    const auto problem = instruction::build_instruction_problem(scenario, strategy::default_strategy("teaching"));
    search::SearchConfig shallow;
    shallow.max_depth = 3;
    CHECK_THROWS_AS(search::plan(problem, shallow), search::DepthExceeded);

    search::SearchConfig budget;
    budget.max_nodes = 200;
    try {
        const auto sol = search::plan(problem, budget);
        CHECK_FALSE(sol.optimal);
    } catch (const search::NoSolution&) {
        // Budget ran out before the first plan; also acceptable.
    }
    CHECK_THROWS_AS(search::exhaustive_optimal(problem, 10), search::BudgetExceeded);
}

TEST_CASE("cost bound filters plans that are not strictly cheaper") {
    const auto scenario = construction::make_scenario("mini-bridge");
    const auto problem = instruction::build_instruction_problem(scenario, strategy::default_strategy("high-level"));
    const double best = search::plan(problem).plan.total_cost;
    search::SearchConfig config;
    config.cost_bound = best;
    CHECK_THROWS_AS(search::plan(problem, config), search::NoSolution);
    config.cost_bound = best + 0.5;
    CHECK(search::plan(problem, config).plan.total_cost == best);
}

TEST_CASE("mini-bridge oracle equivalence for every strategy") {
    const auto scenario = construction::make_scenario("mini-bridge");
    std::map<std::string, double> cost;
    for (const auto& name : strategy::strategy_names()) {
        CAPTURE(name);
        const auto strategy = strategy::default_strategy(name);
        const auto problem = instruction::build_instruction_problem(scenario, strategy);
        const auto sol = testing::solve(scenario, strategy);
        CHECK(sol.optimal);
        cost[name] = search::exhaustive_optimal(problem);
        CHECK(sol.plan.total_cost == cost[name]);
    }
    CHECK(cost["teaching"] < cost["low-level"]);
}

TEST_CASE("pruning soundness and bound admissibility") {
    for (const auto& scenario_name : {"mini-bridge", "bridge"}) {
        const auto scenario = construction::make_scenario(scenario_name);
        for (const auto& name : strategy::strategy_names()) {
            CAPTURE(scenario_name);
            CAPTURE(name);
            const auto strategy = strategy::default_strategy(name);
            const auto problem = instruction::build_instruction_problem(scenario, strategy);
            const double with_bound = testing::solve(scenario, strategy).plan.total_cost;
            // Branch-and-bound without the lower bound.
            CHECK(search::plan(problem).plan.total_cost == with_bound);
            if (std::string(scenario_name) == "mini-bridge") {
                search::SearchConfig off;
                off.branch_and_bound = false;
                CHECK(search::plan(problem, off).plan.total_cost == with_bound);
            }
        }
    }
}

TEST_CASE("anytime callback reports strictly decreasing costs") {
    const auto scenario = construction::make_scenario("bridge");
    const auto problem = instruction::build_instruction_problem(scenario, strategy::default_strategy("teaching"));
    std::vector<double> seen;
    search::SearchConfig config;
    config.on_improved = [&](const Plan& p) { seen.push_back(p.total_cost); };
    const auto sol = search::plan(problem, config);
    REQUIRE_FALSE(seen.empty());
    for (std::size_t i = 1; i < seen.size(); ++i) CHECK(seen[i] < seen[i - 1]);
    CHECK(seen.back() == sol.plan.total_cost);
}

TEST_CASE("determinism") {
    const auto a = testing::solve("house", "teaching");
    const auto b = testing::solve("house", "teaching");
    CHECK(a.plan.actions == b.plan.actions);
    CHECK(a.trace == b.trace);
    CHECK(a.plan.total_cost == b.plan.total_cost);
}

TEST_CASE("derive and replay_trace recover the planner's trace") {
    for (const auto& name : strategy::strategy_names()) {
        const auto scenario = construction::make_scenario("bridge");
        const auto strategy = strategy::default_strategy(name);
        const auto problem = instruction::build_instruction_problem(scenario, strategy);
        const auto sol = testing::solve(scenario, strategy);
        const auto choices = search::derive(problem, sol.plan.actions);
        REQUIRE(choices);
        CHECK(search::replay_trace(problem, *choices) == sol.trace);
        CHECK_THROWS_AS(search::replay_trace(problem, {}), std::invalid_argument);
    }
}

TEST_CASE("property: random problems agree with the oracle") {
    int solved = 0;
    for (std::uint64_t seed = 0; seed < 300; ++seed) {
        CAPTURE(seed);
        const auto p = testing::random_problem(seed);
        double oracle = 0.0;
        bool has_plan = true;
        try {
            oracle = search::exhaustive_optimal(p);
        } catch (const search::NoSolution&) {
            has_plan = false;
        }
        if (!has_plan) {
            CHECK_THROWS_AS(search::plan(p), search::NoSolution);
            continue;
        }
        ++solved;
        const auto sol = search::plan(p);
        CHECK(sol.optimal);
        CHECK(sol.plan.total_cost == doctest::Approx(oracle).epsilon(1e-12));
        search::SearchConfig off;
        off.branch_and_bound = false;
        CHECK(search::plan(p, off).plan.total_cost == doctest::Approx(oracle).epsilon(1e-12));
        CHECK(htn::validate_plan(p, sol.plan, &sol.trace).ok());
        CHECK(htn::trace_leaves(sol.trace) == sol.plan.actions);
    }
    CHECK(solved > 50);
}

}  // TEST_SUITE
