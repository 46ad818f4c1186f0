#include <doctest.h>

#include <algorithm>

#include "htnig/construction.hpp"
#include "htnig/htn.hpp"
#include "htnig/instruction.hpp"
#include "htnig/search.hpp"
#include "random_problem.hpp"

using namespace htnig;
using namespace htnig::htn;

TEST_SUITE("htn") {

TEST_CASE("applicability") {
    State empty;
    PrimitiveAction noop{"noop", {}, {}, {}, {}, {}};
    CHECK(is_applicable(empty, noop));

    auto railing = instruction::ins_object(construction::decode(construction::ObjectKind::railing,
                                                                {std::int64_t{0}, std::int64_t{1}, std::int64_t{0},
                                                                 std::string("south"), std::string("east"),
                                                                 std::int64_t{5}, std::int64_t{1}, std::int64_t{1}}));
    CHECK_FALSE(is_applicable(empty, railing));
    State knows;
    knows.insert(instruction::knows(construction::ObjectKind::railing));
    CHECK(is_applicable(knows, railing));

    State s;
    s.insert(construction::block_fact({0, 1, 0}));
    PrimitiveAction needs{"needs", {}, {{construction::block_fact({0, 1, 0}), true}}, {}, {}, {}};
    CHECK(is_applicable(s, needs));
    PrimitiveAction forbids{"forbids", {}, {{construction::block_fact({0, 1, 0}), false}}, {}, {}, {}};
    CHECK_FALSE(is_applicable(s, forbids));
}

TEST_CASE("apply_action") {
    State s;
    s.insert({"p", {}});
    const auto put = construction::put_block({1, 1, 2});
    const auto next = apply_action(s, put);
    CHECK(next.contains(construction::block_fact({1, 1, 2})));
    CHECK(next.contains(Fact{"p", {}}));
    CHECK(next.facts().size() == 2);

    PrimitiveAction noop{"noop", {}, {}, {}, {}, {}};
    CHECK(apply_action(s, noop) == s);

    const auto taught = apply_action(s, instruction::ins_teach_end(construction::ObjectKind::railing));
    CHECK(taught.contains(instruction::knows(construction::ObjectKind::railing)));

    PrimitiveAction blocked{"blocked", {}, {{Fact{"q", {}}, true}}, {}, {}, {}};
    CHECK_THROWS_AS(apply_action(s, blocked), PreconditionViolation);
}

TEST_CASE("apply_action updates and clears registers") {
    State s;
    const auto a = instruction::ins_block({2, 1, 3});
    const auto s1 = apply_action(s, a);
    REQUIRE(s1.reg(instruction::kLastBlock));
    CHECK(*s1.reg(instruction::kLastBlock) == RegisterValue{2, 1, 3});
    State k = s1;
    k.insert(instruction::knows(construction::ObjectKind::row));
    construction::ObjectInstance row;
    row.origin = {0, 1, 0};
    row.length = 2;
    const auto s2 = apply_action(k, instruction::ins_object(row));
    CHECK_FALSE(s2.reg(instruction::kLastBlock));
}

TEST_CASE("decompose") {
    const Task a = PrimitiveAction{"a", {}, {}, {}, {}, {}};
    const Task b = PrimitiveAction{"b", {}, {}, {}, {}, {}};
    const Task x = AbstractTask{"X", {}};
    const Task c = PrimitiveAction{"c", {}, {}, {}, {}, {}};
    const TaskNetwork net{a, x, b};

    CHECK(decompose(net, 1, {c, c}) == TaskNetwork{a, c, c, b});
    CHECK(decompose(net, 1, {}) == TaskNetwork{a, b});
    CHECK(net == TaskNetwork{a, x, b});
    CHECK_THROWS_AS(decompose(net, 0, {c}), NotAbstract);
    CHECK_THROWS_AS(decompose(net, 3, {c}), std::out_of_range);
}

TEST_CASE("bridge method expands into floor and two railings") {
    const auto scenario = construction::make_scenario("bridge");
    const auto problem = construction::build_construction_problem(scenario);
    REQUIRE(problem.initial_network.size() == 1);
    const auto& root = std::get<AbstractTask>(problem.initial_network[0]);
    CHECK(root.name == "build-bridge");
    const auto cands = problem.candidates(root);
    REQUIRE(cands.size() == 1);
    const auto net = decompose(problem.initial_network, 0, cands[0].subtasks);
    REQUIRE(net.size() == 3);
    std::vector<std::string> names;
    for (const auto& t : net) names.push_back(task_name(t));
    CHECK(names == std::vector<std::string>{"build-floor", "build-railing", "build-railing"});
}

TEST_CASE("validate_plan on the empty problem") {
    PlanningProblem p;
    p.cost = [](const State&, const PrimitiveAction&) { return 1.0; };
    Plan empty;
    const auto sol = search::plan(p);
    CHECK(sol.plan.actions.empty());
    CHECK(sol.plan.total_cost == 0.0);
    CHECK(sol.optimal);
    CHECK(validate_plan(p, empty, &sol.trace).ok());
}

TEST_CASE("validate_plan flags a reordered instruction plan as underivable") {
    const auto scenario = construction::make_scenario("mini-bridge");
    const auto strategy = strategy::default_strategy("low-level");
    const auto problem = instruction::build_instruction_problem(scenario, strategy);
    auto sol = search::plan(problem, {});
    auto actions = sol.plan.actions;
    // ins-block(c), put-block(c) -> put-block(c), ins-block(c)
    auto it = std::find_if(actions.begin(), actions.end(), [](const auto& a) { return a.name == "ins-block"; });
    REQUIRE(it != actions.end());
    std::iter_swap(it, it + 1);
    const auto swapped = make_plan(problem, actions);
    CHECK(validate_plan(problem, swapped).executable);
    CHECK_FALSE(search::derive(problem, swapped.actions).has_value());
    CHECK(validate_plan(problem, swapped, &sol.trace).derivable == false);
}

TEST_CASE("validate_plan reports cost mismatch and non-executable plans") {
    const auto scenario = construction::make_scenario("mini-bridge");
    const auto problem = instruction::build_instruction_problem(scenario, strategy::default_strategy("high-level"));
    auto sol = search::plan(problem, {});
    auto wrong = sol.plan;
    wrong.total_cost += 1.0;
    const auto r = validate_plan(problem, wrong, &sol.trace);
    CHECK(r.executable);
    CHECK_FALSE(r.cost_matches);

    // Leaves no longer match the trace.
    auto broken = sol.plan;
    broken.actions.erase(broken.actions.begin());
    CHECK_FALSE(validate_plan(problem, broken, &sol.trace).ok());
}

TEST_CASE("property: apply_action laws on random states") {
    std::mt19937_64 rng(7);
    for (int i = 0; i < 500; ++i) {
        const auto s = testing::random_state(rng, 6);
        const auto a = testing::random_action(rng, 0, 6);
        if (!is_applicable(s, a)) {
            CHECK_THROWS_AS(apply_action(s, a), PreconditionViolation);
            continue;
        }
        const auto r = apply_action(s, a);
        for (const auto& f : a.add) CHECK(r.contains(f));
        for (const auto& f : a.del) {
            if (r.contains(f)) CHECK(std::find(a.add.begin(), a.add.end(), f) != a.add.end());
        }
        for (const auto& f : s.facts()) {
            const bool deleted = std::find(a.del.begin(), a.del.end(), f) != a.del.end();
            if (!deleted) CHECK(r.contains(f));
        }
    }
}

}  // TEST_SUITE
