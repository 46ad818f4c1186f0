#pragma once

// Voxel world model and the pure construction-planning domain: block facts,
// put-block actions, build-X tasks with one canonical decomposition each.

#include <array>
#include <compare>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "htnig/htn.hpp"

namespace htnig::construction {

/// x = east, y = up, z = south.
struct Coord {
    int x = 0;
    int y = 0;
    int z = 0;

    auto operator<=>(const Coord&) const = default;
    bool operator==(const Coord&) const = default;

    Coord operator+(const Coord& o) const { return {x + o.x, y + o.y, z + o.z}; }
    Coord operator-(const Coord& o) const { return {x - o.x, y - o.y, z - o.z}; }
    Coord operator*(int k) const { return {x * k, y * k, z * k}; }
};

std::string to_string(const Coord& c);

inline constexpr Coord kUp{0, 1, 0};

/// The six face neighbours, in a fixed order.
const std::array<Coord, 6>& face_offsets();
bool face_adjacent(const Coord& a, const Coord& b);

/// Horizontal compass direction. North is -z, east is +x.
enum class Heading { north, east, south, west };

Coord step(Heading h);
Heading rotate_cw(Heading h, int quarter_turns = 1);
Heading opposite(Heading h);
std::string_view name(Heading h);
std::optional<Heading> heading_from_name(std::string_view s);

/// Quarter-turn clockwise (seen from above) about `pivot`.
Coord rotate_cw(const Coord& c, const Coord& pivot, int quarter_turns = 1);

enum class ObjectKind { row, floor, wall, railing, bridge, house };

std::string_view name(ObjectKind k);
std::optional<ObjectKind> kind_from_name(std::string_view s);
/// Scenario roots never carry knowledge and have no single-instruction form.
bool is_root(ObjectKind k);
/// Every kind that can be known by a follower.
const std::vector<ObjectKind>& learnable_kinds();

struct InvalidGeometry : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// A complex object. Which dimensions are meaningful depends on `kind`:
///   row      origin, along, length
///   floor    origin, along, across, length, width   (rows along `along`, stacked across)
///   wall     origin, along, length, height          (rows stacked upward)
///   railing  origin = floor cell at the start of the edge, along, length
///   bridge   origin = ground point below the first floor cell, along, across, length, width
///   house    origin = ground point below the first corner, along, across,
///            length = wall length, height = wall height
struct ObjectInstance {
    ObjectKind kind = ObjectKind::row;
    Coord origin;
    Heading along = Heading::south;
    Heading across = Heading::east;
    int length = 1;
    int width = 1;
    int height = 1;

    bool operator==(const ObjectInstance&) const = default;
};

std::string describe(const ObjectInstance& obj);
void check_geometry(const ObjectInstance& obj);

/// A sub-object or a single block.
using Part = std::variant<ObjectInstance, Coord>;

/// Immediate parts in canonical build order.
std::vector<Part> parts(const ObjectInstance& obj);

/// All cells in canonical build order (duplicate-free).
std::vector<Coord> ordered_cells(const ObjectInstance& obj);
std::set<Coord> cells(const ObjectInstance& obj);

/// Instance rotated a quarter-turn clockwise about `pivot`.
ObjectInstance rotate_cw(const ObjectInstance& obj, const Coord& pivot, int quarter_turns = 1);

htn::Args encode(const ObjectInstance& obj);
ObjectInstance decode(ObjectKind kind, const htn::Args& args);

struct WorldGrid {
    std::set<Coord> occupied;
    std::map<std::string, Coord> markers;

    bool is_occupied(const Coord& c) const { return occupied.count(c) != 0; }
    std::optional<std::string> marker_at(const Coord& c) const;
    bool operator==(const WorldGrid&) const = default;
};

struct ScenarioOptions {
    Coord origin{0, 0, 0};
    Heading orientation = Heading::north;
    std::optional<int> length;
    std::optional<int> width;
    std::optional<int> height;
    std::optional<std::map<std::string, Coord>> markers;
};

struct Scenario {
    std::string name;
    Coord origin;
    Heading orientation = Heading::north;
    WorldGrid initial;
    ObjectInstance root;
};

/// Known names: "bridge", "house", "mini-bridge".
Scenario make_scenario(const std::string& name, const ScenarioOptions& options = {});
const std::vector<std::string>& scenario_names();

std::set<Coord> target_shape(const Scenario& scenario);

/// The named top-level parts of the root ("floor", "railing 1", ...).
std::vector<std::pair<std::string, ObjectInstance>> top_level_parts(const Scenario& scenario);

// Fact and action vocabulary.
htn::Fact block_fact(const Coord& c);
htn::PrimitiveAction put_block(const Coord& c);
std::optional<Coord> put_block_coord(const htn::PrimitiveAction& a);
htn::AbstractTask build_task(const ObjectInstance& obj);
std::optional<ObjectInstance> build_task_object(const htn::AbstractTask& t);

/// Construction-only candidates for `obj`, skipping cells occupied in `initial`.
htn::TaskNetwork construction_network(const ObjectInstance& obj, const WorldGrid& initial);

/// Adds the build-X methods for every kind.
void add_construction_methods(std::vector<htn::Method>& methods, const WorldGrid& initial);

htn::State initial_state(const WorldGrid& world);

/// Unit cost per put-block.
htn::PlanningProblem build_construction_problem(const Scenario& scenario);

/// put-block coordinates of a plan, in order.
std::vector<Coord> placements(const htn::Plan& plan);

}  // namespace htnig::construction
