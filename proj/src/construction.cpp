#include "htnig/construction.hpp"

#include <algorithm>
#include <cstdlib>

namespace htnig::construction {

std::string to_string(const Coord& c) {
    return "(" + std::to_string(c.x) + "," + std::to_string(c.y) + "," + std::to_string(c.z) + ")";
}

const std::array<Coord, 6>& face_offsets() {
    static const std::array<Coord, 6> offsets{{
        {0, 1, 0}, {0, -1, 0}, {0, 0, 1}, {0, 0, -1}, {-1, 0, 0}, {1, 0, 0},
    }};
    return offsets;
}

bool face_adjacent(const Coord& a, const Coord& b) {
    const Coord d = a - b;
    return std::abs(d.x) + std::abs(d.y) + std::abs(d.z) == 1;
}

Coord step(Heading h) {
    switch (h) {
        case Heading::north: return {0, 0, -1};
        case Heading::east: return {1, 0, 0};
        case Heading::south: return {0, 0, 1};
        case Heading::west: return {-1, 0, 0};
    }
    return {};
}

Heading rotate_cw(Heading h, int quarter_turns) {
    const int n = ((static_cast<int>(h) + quarter_turns) % 4 + 4) % 4;
    return static_cast<Heading>(n);
}

Heading opposite(Heading h) { return rotate_cw(h, 2); }

std::string_view name(Heading h) {
    switch (h) {
        case Heading::north: return "north";
        case Heading::east: return "east";
        case Heading::south: return "south";
        case Heading::west: return "west";
    }
    return "?";
}

std::optional<Heading> heading_from_name(std::string_view s) {
    for (auto h : {Heading::north, Heading::east, Heading::south, Heading::west}) {
        if (name(h) == s) return h;
    }
    return std::nullopt;
}

Coord rotate_cw(const Coord& c, const Coord& pivot, int quarter_turns) {
    Coord d = c - pivot;
    const int n = ((quarter_turns % 4) + 4) % 4;
    for (int i = 0; i < n; ++i) d = {-d.z, d.y, d.x};
    return pivot + d;
}

std::string_view name(ObjectKind k) {
    switch (k) {
        case ObjectKind::row: return "row";
        case ObjectKind::floor: return "floor";
        case ObjectKind::wall: return "wall";
        case ObjectKind::railing: return "railing";
        case ObjectKind::bridge: return "bridge";
        case ObjectKind::house: return "house";
    }
    return "?";
}

std::optional<ObjectKind> kind_from_name(std::string_view s) {
    for (auto k : {ObjectKind::row, ObjectKind::floor, ObjectKind::wall, ObjectKind::railing, ObjectKind::bridge,
                   ObjectKind::house}) {
        if (name(k) == s) return k;
    }
    return std::nullopt;
}

bool is_root(ObjectKind k) { return k == ObjectKind::bridge || k == ObjectKind::house; }

const std::vector<ObjectKind>& learnable_kinds() {
    static const std::vector<ObjectKind> kinds{ObjectKind::row, ObjectKind::floor, ObjectKind::wall,
                                               ObjectKind::railing};
    return kinds;
}

namespace {

ObjectInstance make(ObjectKind kind, Coord origin, Heading along, int length) {
    ObjectInstance o;
    o.kind = kind;
    o.origin = origin;
    o.along = along;
    o.across = rotate_cw(along);
    o.length = length;
    return o;
}

ObjectInstance make_row(Coord origin, Heading along, int length) {
    return make(ObjectKind::row, origin, along, length);
}

}  // namespace

std::string describe(const ObjectInstance& obj) {
    std::string s = std::string(name(obj.kind)) + " at " + to_string(obj.origin) + " along " +
                    std::string(name(obj.along)) + " length " + std::to_string(obj.length);
    switch (obj.kind) {
        case ObjectKind::floor:
        case ObjectKind::bridge:
            s += " width " + std::to_string(obj.width) + " across " + std::string(name(obj.across));
            break;
        case ObjectKind::wall:
            s += " height " + std::to_string(obj.height);
            break;
        case ObjectKind::house:
            s += " height " + std::to_string(obj.height) + " across " + std::string(name(obj.across));
            break;
        default:
            break;
    }
    return s;
}

void check_geometry(const ObjectInstance& obj) {
    auto fail = [&](const std::string& why) { throw InvalidGeometry(describe(obj) + ": " + why); };
    if (obj.length < 1) fail("length must be positive");
    switch (obj.kind) {
        case ObjectKind::row:
            break;
        case ObjectKind::floor:
            if (obj.width < 1) fail("width must be positive");
            break;
        case ObjectKind::wall:
        case ObjectKind::house:
            if (obj.height < 1) fail("height must be positive");
            break;
        case ObjectKind::railing:
            if (obj.length < 2) fail("a railing needs length >= 2");
            break;
        case ObjectKind::bridge:
            if (obj.length < 2) fail("a bridge needs length >= 2");
            if (obj.width < 2) fail("a bridge needs width >= 2");
            break;
    }
    if ((obj.kind == ObjectKind::floor || obj.kind == ObjectKind::bridge || obj.kind == ObjectKind::house) &&
        obj.across != rotate_cw(obj.along) && obj.across != rotate_cw(obj.along, 3)) {
        fail("across must be perpendicular to along");
    }
}

std::vector<Part> parts(const ObjectInstance& obj) {
    check_geometry(obj);
    const Coord a = step(obj.along);
    const Coord c = step(obj.across);
    std::vector<Part> out;
    switch (obj.kind) {
        case ObjectKind::row:
            for (int i = 0; i < obj.length; ++i) out.emplace_back(obj.origin + a * i);
            break;
        case ObjectKind::floor:
            for (int w = 0; w < obj.width; ++w) out.emplace_back(make_row(obj.origin + c * w, obj.along, obj.length));
            break;
        case ObjectKind::wall:
            for (int h = 0; h < obj.height; ++h) out.emplace_back(make_row(obj.origin + kUp * h, obj.along, obj.length));
            break;
        case ObjectKind::railing:
            // post, handrail starting above that post, post under the last handrail block
            out.emplace_back(obj.origin + kUp);
            out.emplace_back(make_row(obj.origin + kUp * 2, obj.along, obj.length));
            out.emplace_back(obj.origin + kUp + a * (obj.length - 1));
            break;
        case ObjectKind::bridge: {
            const Coord deck = obj.origin + kUp;
            ObjectInstance floor = make(ObjectKind::floor, deck, obj.along, obj.length);
            floor.across = obj.across;
            floor.width = obj.width;
            out.emplace_back(floor);
            out.emplace_back(make(ObjectKind::railing, deck, obj.along, obj.length));
            out.emplace_back(make(ObjectKind::railing, deck + c * (obj.width - 1), obj.along, obj.length));
            break;
        }
        case ObjectKind::house: {
            // Pinwheel: each wall starts at a footprint corner and runs one cell short
            // of the next corner, so the four walls are disjoint.
            const int n = obj.length;
            const Coord base = obj.origin + kUp;
            const Coord corners[4] = {base, base + a * n, base + a * n + c * n, base + c * n};
            const Heading dirs[4] = {obj.along, obj.across, opposite(obj.along), opposite(obj.across)};
            for (int i = 0; i < 4; ++i) {
                ObjectInstance wall = make(ObjectKind::wall, corners[i], dirs[i], n);
                wall.height = obj.height;
                out.emplace_back(wall);
            }
            for (int v = 0; v < n; ++v) {
                out.emplace_back(make_row(base + kUp * obj.height + c * v, obj.along, n));
            }
            break;
        }
    }
    return out;
}

std::vector<Coord> ordered_cells(const ObjectInstance& obj) {
    std::vector<Coord> out;
    std::set<Coord> seen;
    for (const auto& p : parts(obj)) {
        if (const auto* cell = std::get_if<Coord>(&p)) {
            if (seen.insert(*cell).second) out.push_back(*cell);
        } else {
            for (const auto& cc : ordered_cells(std::get<ObjectInstance>(p))) {
                if (seen.insert(cc).second) out.push_back(cc);
            }
        }
    }
    return out;
}

std::set<Coord> cells(const ObjectInstance& obj) {
    const auto v = ordered_cells(obj);
    return {v.begin(), v.end()};
}

ObjectInstance rotate_cw(const ObjectInstance& obj, const Coord& pivot, int quarter_turns) {
    ObjectInstance r = obj;
    r.origin = rotate_cw(obj.origin, pivot, quarter_turns);
    r.along = rotate_cw(obj.along, quarter_turns);
    r.across = rotate_cw(obj.across, quarter_turns);
    return r;
}

htn::Args encode(const ObjectInstance& obj) {
    return {obj.origin.x, obj.origin.y, obj.origin.z,
            std::string(name(obj.along)), std::string(name(obj.across)),
            obj.length, obj.width, obj.height};
}

ObjectInstance decode(ObjectKind kind, const htn::Args& args) {
    if (args.size() != 8) throw std::invalid_argument("object args must have 8 entries");
    auto num = [&](std::size_t i) { return static_cast<int>(std::get<std::int64_t>(args.at(i))); };
    auto head = [&](std::size_t i) {
        auto h = heading_from_name(std::get<std::string>(args.at(i)));
        if (!h) throw std::invalid_argument("bad heading in object args");
        return *h;
    };
    ObjectInstance o;
    o.kind = kind;
    o.origin = {num(0), num(1), num(2)};
    o.along = head(3);
    o.across = head(4);
    o.length = num(5);
    o.width = num(6);
    o.height = num(7);
    return o;
}

std::optional<std::string> WorldGrid::marker_at(const Coord& c) const {
    for (const auto& [color, pos] : markers) {
        if (pos == c) return color;
    }
    return std::nullopt;
}

const std::vector<std::string>& scenario_names() {
    static const std::vector<std::string> names{"bridge", "house", "mini-bridge"};
    return names;
}

Scenario make_scenario(const std::string& scenario_name, const ScenarioOptions& options) {
    Scenario s;
    s.name = scenario_name;
    s.origin = options.origin;
    s.orientation = options.orientation;

    const int turns = static_cast<int>(options.orientation);  // north = 0
    const Heading u = rotate_cw(Heading::east, turns);
    const Heading v = rotate_cw(Heading::south, turns);
    const Coord du = step(u);
    const Coord dv = step(v);

    std::map<std::string, Coord> markers;
    if (scenario_name == "bridge" || scenario_name == "mini-bridge") {
        const bool mini = scenario_name == "mini-bridge";
        ObjectInstance root;
        root.kind = ObjectKind::bridge;
        root.origin = options.origin;
        root.along = v;
        root.across = u;
        root.length = options.length.value_or(mini ? 3 : 5);
        root.width = options.width.value_or(mini ? 2 : 3);
        root.height = 1;
        s.root = root;
        const Coord deck = options.origin + kUp;
        const int w = root.width - 1;
        const int l = root.length - 1;
        markers = {{"blue", deck}, {"yellow", deck + du * w}, {"red", deck + dv * l}, {"black", deck + du * w + dv * l}};
    } else if (scenario_name == "house") {
        ObjectInstance root;
        root.kind = ObjectKind::house;
        root.origin = options.origin;
        root.along = u;
        root.across = v;
        root.length = options.length.value_or(4);
        root.width = 1;
        root.height = options.height.value_or(2);
        s.root = root;
        const Coord base = options.origin + kUp;
        const int n = root.length;
        markers = {{"blue", base}, {"yellow", base + du * n}, {"red", base + dv * n}, {"black", base + du * n + dv * n}};
    } else {
        throw std::invalid_argument("unknown scenario '" + scenario_name + "'");
    }
    check_geometry(s.root);

    if (options.markers) markers = *options.markers;
    s.initial.markers = markers;
    for (const auto& [color, pos] : markers) {
        if (!s.initial.occupied.insert(pos).second) {
            throw InvalidGeometry("two markers share cell " + to_string(pos));
        }
    }
    const auto shape = cells(s.root);
    for (const auto& c : s.initial.occupied) {
        if (!shape.count(c)) throw InvalidGeometry("marker " + to_string(c) + " lies outside the target shape");
    }
    return s;
}

std::set<Coord> target_shape(const Scenario& scenario) {
    auto shape = cells(scenario.root);
    shape.insert(scenario.initial.occupied.begin(), scenario.initial.occupied.end());
    return shape;
}

std::vector<std::pair<std::string, ObjectInstance>> top_level_parts(const Scenario& scenario) {
    std::vector<ObjectInstance> objs;
    for (const auto& p : parts(scenario.root)) {
        if (const auto* o = std::get_if<ObjectInstance>(&p)) objs.push_back(*o);
    }
    std::map<ObjectKind, int> total;
    for (const auto& o : objs) ++total[o.kind];
    std::map<ObjectKind, int> seen;
    std::vector<std::pair<std::string, ObjectInstance>> out;
    for (const auto& o : objs) {
        std::string label(name(o.kind));
        if (scenario.root.kind == ObjectKind::house && o.kind == ObjectKind::row) label = "roof row";
        if (total[o.kind] > 1) label += " " + std::to_string(++seen[o.kind]);
        out.emplace_back(label, o);
    }
    return out;
}

htn::Fact block_fact(const Coord& c) { return {"block", {c.x, c.y, c.z}}; }

htn::PrimitiveAction put_block(const Coord& c) {
    htn::PrimitiveAction a;
    a.name = "put-block";
    a.args = {c.x, c.y, c.z};
    a.add = {block_fact(c)};
    return a;
}

namespace {

std::optional<Coord> coord_args(const htn::Args& args) {
    if (args.size() != 3) return std::nullopt;
    for (const auto& a : args) {
        if (!std::holds_alternative<std::int64_t>(a)) return std::nullopt;
    }
    auto n = [&](std::size_t i) { return static_cast<int>(std::get<std::int64_t>(args[i])); };
    return Coord{n(0), n(1), n(2)};
}

constexpr std::string_view kBuildPrefix = "build-";

}  // namespace

std::optional<Coord> put_block_coord(const htn::PrimitiveAction& a) {
    if (a.name != "put-block") return std::nullopt;
    return coord_args(a.args);
}

htn::AbstractTask build_task(const ObjectInstance& obj) {
    return {std::string(kBuildPrefix) + std::string(name(obj.kind)), encode(obj)};
}

std::optional<ObjectInstance> build_task_object(const htn::AbstractTask& t) {
    if (t.name.rfind(kBuildPrefix, 0) != 0) return std::nullopt;
    auto kind = kind_from_name(std::string_view(t.name).substr(kBuildPrefix.size()));
    if (!kind) return std::nullopt;
    return decode(*kind, t.args);
}

htn::TaskNetwork construction_network(const ObjectInstance& obj, const WorldGrid& initial) {
    htn::TaskNetwork net;
    for (const auto& p : parts(obj)) {
        if (const auto* cell = std::get_if<Coord>(&p)) {
            if (!initial.is_occupied(*cell)) net.emplace_back(put_block(*cell));
        } else {
            net.emplace_back(build_task(std::get<ObjectInstance>(p)));
        }
    }
    return net;
}

void add_construction_methods(std::vector<htn::Method>& methods, const WorldGrid& initial) {
    for (auto kind : {ObjectKind::row, ObjectKind::floor, ObjectKind::wall, ObjectKind::railing, ObjectKind::bridge,
                      ObjectKind::house}) {
        methods.push_back({std::string(kBuildPrefix) + std::string(name(kind)),
                           [kind, initial](const htn::AbstractTask& t) {
                               const auto obj = decode(kind, t.args);
                               return std::vector<htn::Candidate>{{"canonical", construction_network(obj, initial)}};
                           }});
    }
}

htn::State initial_state(const WorldGrid& world) {
    std::set<htn::Fact> facts;
    for (const auto& c : world.occupied) facts.insert(block_fact(c));
    return htn::State(std::move(facts));
}

htn::PlanningProblem build_construction_problem(const Scenario& scenario) {
    htn::PlanningProblem p;
    add_construction_methods(p.methods, scenario.initial);
    p.initial_network = {build_task(scenario.root)};
    p.initial_state = initial_state(scenario.initial);
    p.cost = [](const htn::State&, const htn::PrimitiveAction& a) { return a.name == "put-block" ? 1.0 : 0.0; };
    return p;
}

std::vector<Coord> placements(const htn::Plan& plan) {
    std::vector<Coord> out;
    for (const auto& a : plan.actions) {
        if (auto c = put_block_coord(a)) out.push_back(*c);
    }
    return out;
}

}  // namespace htnig::construction
