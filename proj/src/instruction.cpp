#include "htnig/instruction.hpp"

#include <algorithm>
#include <map>
#include <memory>

namespace htnig::instruction {

namespace {

constexpr std::string_view kInsPrefix = "ins-";
constexpr std::string_view kTeachStartPrefix = "ins-teach-start-";
constexpr std::string_view kTeachEndPrefix = "ins-teach-end-";
constexpr std::string_view kInsBuildPrefix = "ins-build-";

bool starts_with(std::string_view s, std::string_view prefix) { return s.substr(0, prefix.size()) == prefix; }

std::optional<ObjectKind> learnable_kind(std::string_view s) {
    auto k = construction::kind_from_name(s);
    if (!k || construction::is_root(*k)) return std::nullopt;
    return k;
}

htn::RegisterValue reg_value(const Coord& c) { return {c.x, c.y, c.z}; }

}  // namespace

htn::Fact knows(ObjectKind kind) { return {"knows", {std::string(construction::name(kind))}}; }

htn::PrimitiveAction ins_block(const Coord& c) {
    htn::PrimitiveAction a;
    a.name = "ins-block";
    a.args = {c.x, c.y, c.z};
    a.register_update = htn::RegisterUpdate{kLastBlock, reg_value(c)};
    return a;
}

htn::PrimitiveAction ins_object(const ObjectInstance& obj) {
    if (construction::is_root(obj.kind)) {
        throw std::invalid_argument("scenario roots have no single-instruction form");
    }
    htn::PrimitiveAction a;
    a.name = std::string(kInsPrefix) + std::string(construction::name(obj.kind));
    a.args = construction::encode(obj);
    a.precond = {{knows(obj.kind), true}};
    a.register_update = htn::RegisterUpdate{kLastBlock, std::nullopt};
    return a;
}

htn::PrimitiveAction ins_teach_start(ObjectKind kind) {
    htn::PrimitiveAction a;
    a.name = std::string(kTeachStartPrefix) + std::string(construction::name(kind));
    return a;
}

htn::PrimitiveAction ins_teach_end(ObjectKind kind, bool grants_knowledge) {
    htn::PrimitiveAction a;
    a.name = std::string(kTeachEndPrefix) + std::string(construction::name(kind));
    if (grants_knowledge) a.add = {knows(kind)};
    return a;
}

htn::PrimitiveAction to_action(const InstructionAction& ins) {
    return std::visit(
        [](const auto& v) -> htn::PrimitiveAction {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, InsBlock>) {
                return ins_block(v.cell);
            } else if constexpr (std::is_same_v<T, InsObject>) {
                return ins_object(v.object);
            } else if constexpr (std::is_same_v<T, TeachStart>) {
                return ins_teach_start(v.kind);
            } else {
                return ins_teach_end(v.kind);
            }
        },
        ins);
}

std::optional<InstructionAction> as_instruction(const htn::PrimitiveAction& a) {
    const std::string_view n = a.name;
    if (n == "ins-block") {
        if (a.args.size() != 3) return std::nullopt;
        auto num = [&](std::size_t i) { return static_cast<int>(std::get<std::int64_t>(a.args[i])); };
        return InsBlock{{num(0), num(1), num(2)}};
    }
    if (starts_with(n, kTeachStartPrefix)) {
        if (auto k = learnable_kind(n.substr(kTeachStartPrefix.size()))) return TeachStart{*k};
        return std::nullopt;
    }
    if (starts_with(n, kTeachEndPrefix)) {
        if (auto k = learnable_kind(n.substr(kTeachEndPrefix.size()))) return TeachEnd{*k};
        return std::nullopt;
    }
    if (starts_with(n, kInsPrefix)) {
        if (auto k = learnable_kind(n.substr(kInsPrefix.size()))) return InsObject{construction::decode(*k, a.args)};
    }
    return std::nullopt;
}

htn::AbstractTask ins_build_task(const ObjectInstance& obj) {
    return {std::string(kInsBuildPrefix) + std::string(construction::name(obj.kind)), construction::encode(obj)};
}

htn::AbstractTask ins_build_block_task(const Coord& c) {
    return {std::string(kInsBuildPrefix) + "block", {c.x, c.y, c.z}};
}

namespace {

// Decomposition L: every part instructed on its own.
htn::TaskNetwork by_parts(const ObjectInstance& obj, const construction::WorldGrid& initial) {
    htn::TaskNetwork net;
    for (const auto& p : construction::parts(obj)) {
        if (const auto* cell = std::get_if<Coord>(&p)) {
            if (!initial.is_occupied(*cell)) net.emplace_back(ins_build_block_task(*cell));
        } else {
            net.emplace_back(ins_build_task(std::get<ObjectInstance>(p)));
        }
    }
    return net;
}

std::vector<htn::Candidate> ins_build_candidates(const ObjectInstance& obj, const construction::WorldGrid& initial,
                                                 const ModelOptions& options) {
    std::vector<htn::Candidate> out;
    htn::TaskNetwork low = by_parts(obj, initial);
    out.push_back({"L", low});
    if (construction::is_root(obj.kind)) return out;

    out.push_back({"H", {ins_object(obj), construction::build_task(obj)}});

    htn::TaskNetwork teach;
    teach.reserve(low.size() + 2);
    teach.emplace_back(ins_teach_start(obj.kind));
    teach.insert(teach.end(), low.begin(), low.end());
    teach.emplace_back(ins_teach_end(obj.kind, options.teach_grants_knowledge));
    out.push_back({"T", std::move(teach)});
    return out;
}

using BoundKey = std::pair<std::string, htn::Args>;

double fill_bounds(const ObjectInstance& obj, const construction::WorldGrid& initial,
                   const strategy::CostProfile& profile, std::map<BoundKey, double>& table) {
    const auto task = ins_build_task(obj);
    BoundKey key{task.name, task.args};
    if (auto it = table.find(key); it != table.end()) return it->second;
    double by_parts_bound = 0.0;
    for (const auto& p : construction::parts(obj)) {
        if (const auto* cell = std::get_if<Coord>(&p)) {
            if (!initial.is_occupied(*cell)) {
                by_parts_bound += profile.block_adjacent;
                const auto t = ins_build_block_task(*cell);
                table[{t.name, t.args}] = profile.block_adjacent;
            }
        } else {
            by_parts_bound += fill_bounds(std::get<ObjectInstance>(p), initial, profile, table);
        }
    }
    // Any refinement either instructs every free cell by itself or uses at least one object instruction.
    const double bound =
        construction::is_root(obj.kind) ? by_parts_bound : std::min(by_parts_bound, profile.object);
    table[key] = bound;
    return bound;
}

}  // namespace

htn::PlanningProblem build_instruction_problem(const construction::Scenario& scenario,
                                               const strategy::Strategy& strategy, const ModelOptions& options) {
    strategy.profile.check();
    htn::PlanningProblem p;
    const construction::WorldGrid initial = scenario.initial;
    construction::add_construction_methods(p.methods, initial);

    p.methods.push_back({std::string(kInsBuildPrefix) + "block", [](const htn::AbstractTask& t) {
                             const Coord c{static_cast<int>(std::get<std::int64_t>(t.args.at(0))),
                                           static_cast<int>(std::get<std::int64_t>(t.args.at(1))),
                                           static_cast<int>(std::get<std::int64_t>(t.args.at(2)))};
                             return std::vector<htn::Candidate>{
                                 {"block", {ins_block(c), construction::put_block(c)}}};
                         }});
    for (auto kind : {ObjectKind::row, ObjectKind::floor, ObjectKind::wall, ObjectKind::railing, ObjectKind::bridge,
                      ObjectKind::house}) {
        p.methods.push_back({std::string(kInsBuildPrefix) + std::string(construction::name(kind)),
                             [kind, initial, options](const htn::AbstractTask& t) {
                                 return ins_build_candidates(construction::decode(kind, t.args), initial, options);
                             }});
    }

    p.initial_network = {ins_build_task(scenario.root)};
    p.initial_state = construction::initial_state(initial);
    for (auto k : strategy.initial_knowledge) {
        if (construction::is_root(k)) throw std::invalid_argument("scenario roots cannot be known");
        p.initial_state.insert(knows(k));
    }
    const auto profile = strategy.profile;
    p.cost = [profile](const htn::State& s, const htn::PrimitiveAction& a) { return strategy::cost_of(profile, s, a); };
    return p;
}

search::TaskBound instruction_bound(const construction::Scenario& scenario, const strategy::CostProfile& profile) {
    auto table = std::make_shared<std::map<BoundKey, double>>();
    fill_bounds(scenario.root, scenario.initial, profile, *table);
    return [table, profile](const htn::Task& task) -> double {
        if (const auto* abstract = std::get_if<htn::AbstractTask>(&task)) {
            auto it = table->find({abstract->name, abstract->args});
            return it == table->end() ? 0.0 : it->second;
        }
        const auto ins = as_instruction(std::get<htn::PrimitiveAction>(task));
        if (!ins) return 0.0;
        if (std::holds_alternative<InsBlock>(*ins)) return profile.block_adjacent;
        if (std::holds_alternative<InsObject>(*ins)) return profile.object;
        return profile.teach;
    };
}

std::vector<InstructionAction> instruction_actions(const htn::Plan& plan) {
    std::vector<InstructionAction> out;
    for (const auto& a : plan.actions) {
        if (auto ins = as_instruction(a)) out.push_back(*ins);
    }
    return out;
}

namespace {

void collect_labels(const htn::TraceNode& node, const std::string& task, std::vector<std::string>& out) {
    if (node.task && !htn::is_primitive(*node.task) && htn::task_name(*node.task) == task) {
        out.push_back(node.candidate_label);
    }
    for (const auto& c : node.children) collect_labels(c, task, out);
}

}  // namespace

std::vector<std::string> decompositions_used(const htn::DecompositionTrace& trace, ObjectKind kind) {
    std::vector<std::string> out;
    collect_labels(trace, std::string(kInsBuildPrefix) + std::string(construction::name(kind)), out);
    return out;
}

std::string to_string(const InstructionAction& ins) { return htn::to_string(to_action(ins)); }

}  // namespace htnig::instruction
