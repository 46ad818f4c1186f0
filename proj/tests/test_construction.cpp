#include <doctest.h>

#include <set>

#include "htnig/construction.hpp"
#include "htnig/instruction.hpp"
#include "support.hpp"

using namespace htnig;
using namespace htnig::construction;

namespace {

// Independent enumerations of the documented geometry.
std::set<Coord> bridge_cells_by_hand() {
    std::set<Coord> s;
    for (int x = 0; x <= 2; ++x)
        for (int z = 0; z <= 4; ++z) s.insert({x, 1, z});
    for (int x : {0, 2}) {
        s.insert({x, 2, 0});
        s.insert({x, 2, 4});
        for (int z = 0; z <= 4; ++z) s.insert({x, 3, z});
    }
    return s;
}

std::set<Coord> house_cells_by_hand() {
    std::set<Coord> s;
    for (int y = 1; y <= 2; ++y) {
        for (int i = 0; i <= 3; ++i) {
            s.insert({i, y, 0});      // wall A
            s.insert({4, y, i});      // wall B
            s.insert({i + 1, y, 4});  // wall C
            s.insert({0, y, i + 1});  // wall D
        }
    }
    for (int x = 0; x <= 3; ++x)
        for (int z = 0; z <= 3; ++z) s.insert({x, 3, z});
    return s;
}

std::set<Coord> rotated(const std::set<Coord>& cells, const Coord& pivot, int turns) {
    std::set<Coord> out;
    for (const auto& c : cells) out.insert(rotate_cw(c, pivot, turns));
    return out;
}

}  // namespace

TEST_SUITE("construction") {

TEST_CASE("unit row") {
    ObjectInstance row;
    row.kind = ObjectKind::row;
    row.origin = {0, 1, 0};
    row.along = Heading::south;
    row.length = 1;
    CHECK(cells(row) == std::set<Coord>{{0, 1, 0}});
}

TEST_CASE("railing: two posts and a five-block handrail, post-rail-post order") {
    ObjectInstance r;
    r.kind = ObjectKind::railing;
    r.origin = {0, 1, 0};
    r.along = Heading::south;
    r.length = 5;
    const auto order = ordered_cells(r);
    std::vector<Coord> expected{{0, 2, 0}, {0, 3, 0}, {0, 3, 1}, {0, 3, 2}, {0, 3, 3}, {0, 3, 4}, {0, 2, 4}};
    CHECK(order == expected);
    CHECK(cells(r).size() == 7);
    // Each block after the first rests against the previous one.
    for (std::size_t i = 1; i < order.size(); ++i) CHECK(face_adjacent(order[i - 1], order[i]));
}

TEST_CASE("target shapes match hand enumeration") {
    const auto bridge = make_scenario("bridge");
    CHECK(target_shape(bridge) == bridge_cells_by_hand());
    CHECK(target_shape(bridge).size() == 29);
    const auto house = make_scenario("house");
    CHECK(target_shape(house) == house_cells_by_hand());
    CHECK(target_shape(house).size() == 48);
    const auto mini = make_scenario("mini-bridge");
    CHECK(target_shape(mini).size() == 6 + 2 * 5);
}

TEST_CASE("bridge markers sit on the floor corners") {
    const auto s = make_scenario("bridge");
    const std::map<std::string, Coord> expected{
        {"blue", {0, 1, 0}}, {"yellow", {2, 1, 0}}, {"red", {0, 1, 4}}, {"black", {2, 1, 4}}};
    CHECK(s.initial.markers == expected);
    CHECK(s.initial.occupied.size() == 4);
    CHECK(s.initial.marker_at({2, 1, 4}) == std::optional<std::string>("black"));
    CHECK_FALSE(s.initial.marker_at({1, 1, 1}));
}

TEST_CASE("top-level part labels") {
    std::vector<std::string> labels;
    for (const auto& [label, obj] : top_level_parts(make_scenario("bridge"))) labels.push_back(label);
    CHECK(labels == std::vector<std::string>{"floor", "railing 1", "railing 2"});
    labels.clear();
    for (const auto& [label, obj] : top_level_parts(make_scenario("house"))) labels.push_back(label);
    CHECK(labels.size() == 8);
    CHECK(labels.front() == "wall 1");
    CHECK(labels.back() == "roof row 4");
}

TEST_CASE("sibling parts are disjoint") {
    for (const auto& name : scenario_names()) {
        const auto s = make_scenario(name);
        std::set<Coord> seen;
        for (const auto& [label, obj] : top_level_parts(s)) {
            for (const auto& c : cells(obj)) CHECK_MESSAGE(seen.insert(c).second, name << " " << label);
        }
        CHECK(seen == target_shape(s));
    }
}

TEST_CASE("construction plans place exactly the unoccupied target cells") {
    const std::map<std::string, std::size_t> expected{{"bridge", 25}, {"house", 44}, {"mini-bridge", 12}};
    for (const auto& name : scenario_names()) {
        const auto s = make_scenario(name);
        const auto sol = search::plan(build_construction_problem(s));
        CHECK(placements(sol.plan).size() == expected.at(name));
        for (const auto& c : target_shape(s)) CHECK(sol.plan.state_trace.back().contains(block_fact(c)));
    }
}

TEST_CASE("every placement rests on the ground or against an occupied cell") {
    for (const auto& name : scenario_names()) {
        for (const auto& strat : strategy::strategy_names()) {
            const auto s = make_scenario(name);
            const auto sol = testing::solve(s, strategy::default_strategy(strat));
            auto occupied = s.initial.occupied;
            for (const auto& c : placements(sol.plan)) {
                bool supported = c.y == 1;
                for (const auto& d : face_offsets()) supported = supported || occupied.count(c + d);
                CHECK_MESSAGE(supported, name << "/" << strat << " " << to_string(c));
                occupied.insert(c);
            }
        }
    }
}

TEST_CASE("rotation and translation equivariance") {
    for (const auto& name : scenario_names()) {
        const auto north = make_scenario(name);
        const auto base = target_shape(north);
        for (int turns = 1; turns < 4; ++turns) {
            ScenarioOptions o;
            o.orientation = rotate_cw(Heading::north, turns);
            const auto turned = make_scenario(name, o);
            CHECK(target_shape(turned) == rotated(base, {0, 0, 0}, turns));
            std::map<std::string, Coord> markers;
            for (const auto& [color, c] : north.initial.markers) markers[color] = rotate_cw(c, {0, 0, 0}, turns);
            CHECK(turned.initial.markers == markers);
        }
        ScenarioOptions shifted;
        shifted.origin = {10, 0, -7};
        std::set<Coord> moved;
        for (const auto& c : base) moved.insert(c + Coord{10, 0, -7});
        CHECK(target_shape(make_scenario(name, shifted)) == moved);
    }
}

TEST_CASE("rotated scenarios plan at the same cost") {
    for (const auto& strat : strategy::strategy_names()) {
        const auto s = strategy::default_strategy(strat);
        const double base = testing::solve(make_scenario("bridge"), s).plan.total_cost;
        ScenarioOptions o;
        o.orientation = Heading::west;
        o.origin = {3, 0, 3};
        CHECK(testing::solve(make_scenario("bridge", o), s).plan.total_cost == base);
    }
}

TEST_CASE("encode and decode round trip") {
    for (const auto& name : scenario_names()) {
        const auto s = make_scenario(name);
        for (const auto& [label, obj] : top_level_parts(s)) {
            CHECK(decode(obj.kind, encode(obj)) == obj);
            CHECK(build_task_object(build_task(obj)) == std::optional<ObjectInstance>(obj));
        }
    }
    CHECK(put_block_coord(put_block({1, 2, 3})) == std::optional<Coord>(Coord{1, 2, 3}));
}

TEST_CASE("invalid geometry and scenarios") {
    ObjectInstance row;
    row.length = 0;
    CHECK_THROWS_AS(check_geometry(row), InvalidGeometry);
    CHECK_THROWS_AS(make_scenario("castle"), std::invalid_argument);
    ScenarioOptions dup;
    dup.markers = std::map<std::string, Coord>{{"blue", {0, 1, 0}}, {"red", {0, 1, 0}}};
    CHECK_THROWS_AS(make_scenario("bridge", dup), InvalidGeometry);
    ScenarioOptions outside;
    outside.markers = std::map<std::string, Coord>{{"blue", {9, 9, 9}}};
    CHECK_THROWS_AS(make_scenario("bridge", outside), InvalidGeometry);
    ScenarioOptions flat;
    flat.width = 0;
    CHECK_THROWS_AS(make_scenario("bridge", flat), InvalidGeometry);
}

TEST_CASE("custom markers are skipped by the construction plan") {
    ScenarioOptions o;
    o.markers = std::map<std::string, Coord>{{"green", {1, 1, 2}}};
    const auto s = make_scenario("bridge", o);
    const auto sol = search::plan(build_construction_problem(s));
    const auto placed = placements(sol.plan);
    CHECK(placed.size() == 28);
    CHECK(std::find(placed.begin(), placed.end(), Coord{1, 1, 2}) == placed.end());
}

TEST_CASE("headings") {
    CHECK(rotate_cw(Heading::north) == Heading::east);
    CHECK(rotate_cw(Heading::west) == Heading::north);
    CHECK(opposite(Heading::east) == Heading::west);
    CHECK(step(Heading::south) == Coord{0, 0, 1});
    CHECK(step(Heading::east) == Coord{1, 0, 0});
    CHECK(heading_from_name("west") == std::optional<Heading>(Heading::west));
    CHECK_FALSE(heading_from_name("up"));
    for (auto h : {Heading::north, Heading::east, Heading::south, Heading::west}) {
        CHECK(rotate_cw(step(h), {0, 0, 0}) == step(rotate_cw(h)));
    }
}

}  // TEST_SUITE
