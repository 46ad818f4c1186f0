#include <doctest.h>

#include <random>

#include "htnig/realizer.hpp"
#include "support.hpp"

using namespace htnig;
using namespace htnig::realizer;
using construction::Coord;
using construction::ObjectKind;

namespace {

DiscourseState bridge_discourse() {
    DiscourseState ds;
    ds.world = construction::make_scenario("bridge").initial;
    return ds;
}

construction::ObjectInstance railing_at_blue() {
    construction::ObjectInstance r;
    r.kind = ObjectKind::railing;
    r.origin = {0, 1, 0};
    r.along = construction::Heading::south;
    r.length = 5;
    return r;
}

}  // namespace

TEST_SUITE("realizer") {

TEST_CASE("teach brackets") {
    const auto ds = bridge_discourse();
    CHECK(realize(instruction::TeachStart{ObjectKind::railing}, ds) == "Now I will teach you how to build a railing.");
    CHECK(realize(instruction::TeachEnd{ObjectKind::railing}, ds) == "That is how you build a railing.");
}

TEST_CASE("block references prefer the previous block, then markers, then coordinates") {
    auto ds = bridge_discourse();
    ds.last_instructed_block = Coord{1, 1, 1};
    CHECK(realize(instruction::InsBlock{{1, 2, 1}}, ds) == "Put a block on top of the previous block.");
    CHECK(realize(instruction::InsBlock{{1, 1, 2}}, ds) == "Put a block in front of the previous block.");
    CHECK(realize(instruction::InsBlock{{0, 2, 0}}, ds) == "Put a block on top of the blue block.");
    CHECK(realize(instruction::InsBlock{{3, 1, 4}}, ds) == "Put a block right of the black block.");
    CHECK(realize(instruction::InsBlock{{2, 4, 4}}, ds) == "Put a block at column 2, row 4, height 4.");
    ds.last_instructed_block.reset();
    CHECK(realize(instruction::InsBlock{{1, 2, 1}}, ds) == "Put a block at column 1, row 1, height 2.");
}

TEST_CASE("railing anchored at the blue marker") {
    const auto ds = bridge_discourse();
    CHECK(realize(instruction::InsObject{railing_at_blue()}, ds) ==
          "Build a railing from the top of the blue block to the top of the red block.");
}

TEST_CASE("single-cell objects use 'at'") {
    construction::ObjectInstance row;
    row.origin = {1, 1, 0};
    row.length = 1;
    CHECK(realize(instruction::InsObject{row}, bridge_discourse()) == "Build a row at the spot left of the yellow block.");
}

TEST_CASE("non-instruction actions cannot be realized") {
    CHECK_THROWS_AS(realize(construction::put_block({0, 1, 0}), bridge_discourse()), UnrealizableAction);
    CHECK(realize(instruction::ins_block({0, 2, 0}), bridge_discourse()) == "Put a block on top of the blue block.");
}

TEST_CASE("feedback texts and greeting") {
    CHECK(realize_feedback(FeedbackKind::wrong_block_remove) == "That block is not correct - please remove it.");
    CHECK(realize_feedback(FeedbackKind::replace_removed) == "That block was correct - please put it back.");
    CHECK(realize_feedback(FeedbackKind::all_done) == "Congratulations, you have built the whole structure!");
    CHECK_FALSE(realize_feedback(FeedbackKind::timeout).empty());
    CHECK_FALSE(realize_feedback(FeedbackKind::correct).empty());
    CHECK_FALSE(realize_feedback(FeedbackKind::object_complete).empty());
    CHECK(greeting("house") == "I will try to instruct you to build a house.");
    CHECK(greeting("mini-bridge") == "I will try to instruct you to build a bridge.");
}

TEST_CASE("discourse update") {
    auto ds = bridge_discourse();
    update(ds, instruction::InsBlock{{0, 2, 0}});
    CHECK(ds.last_instructed_block == std::optional<Coord>(Coord{0, 2, 0}));
    update(ds, instruction::InsObject{railing_at_blue()});
    CHECK_FALSE(ds.last_instructed_block);
    update(ds, instruction::TeachEnd{ObjectKind::row});
    CHECK(ds.taught_kinds.count(ObjectKind::row));
}

TEST_CASE("round trip: every sentence of every plan denotes its action's cells") {
    for (const auto& scenario_name : construction::scenario_names()) {
        for (const auto& strategy_name : strategy::strategy_names()) {
            const auto scenario = construction::make_scenario(scenario_name);
            const auto plan = testing::solve(scenario, strategy::default_strategy(strategy_name)).plan;
            DiscourseState ds;
            ds.world = scenario.initial;
            for (const auto& a : plan.actions) {
                if (auto c = construction::put_block_coord(a)) {
                    ds.world.occupied.insert(*c);
                    continue;
                }
                const auto ins = *instruction::as_instruction(a);
                const auto text = realize(ins, ds);
                CHECK(realize(ins, ds) == text);
                if (const auto* b = std::get_if<instruction::InsBlock>(&ins)) {
                    CHECK(resolve_block_sentence(text, ds) == std::optional<Coord>(b->cell));
                } else if (const auto* o = std::get_if<instruction::InsObject>(&ins)) {
                    const auto cells = construction::ordered_cells(o->object);
                    const auto ends = resolve_object_sentence(text, ds);
                    REQUIRE(ends);
                    CHECK(ends->first == cells.front());
                    CHECK(ends->second == cells.back());
                }
                update(ds, ins);
            }
        }
    }
}

TEST_CASE("round trip on random references") {
    std::mt19937_64 rng(11);
    std::uniform_int_distribution<int> coord(-3, 6);
    for (int i = 0; i < 2000; ++i) {
        auto ds = bridge_discourse();
        if (rng() & 1) ds.last_instructed_block = Coord{coord(rng), coord(rng), coord(rng)};
        const Coord target{coord(rng), coord(rng), coord(rng)};
        const auto block = block_reference(target, ds);
        CHECK(block.cell == target);
        CHECK(resolve_block_sentence("Put a block " + block.text + ".", ds) == std::optional<Coord>(target));
        const auto anchor = anchor_reference(target, ds);
        CHECK(resolve_anchor(anchor.text, ds) == std::optional<Coord>(target));
    }
    CHECK_FALSE(resolve_block_sentence("Put a block somewhere.", bridge_discourse()));
    CHECK_FALSE(resolve_anchor("the green block", bridge_discourse()));
}

}  // TEST_SUITE
