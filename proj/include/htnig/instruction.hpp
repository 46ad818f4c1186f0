#pragma once

// Instruction-planning model layered over the construction domain:
// knows(kind) facts, ins-* actions, teach brackets, the lastblock register and
// ins-build tasks with decompositions L (by parts), H (one instruction, then
// the construction task validates it) and T (by parts inside a teach bracket).

#include <optional>
#include <variant>
#include <vector>

#include "htnig/construction.hpp"
#include "htnig/htn.hpp"
#include "htnig/search.hpp"
#include "htnig/strategy.hpp"

namespace htnig::instruction {

using construction::Coord;
using construction::ObjectInstance;
using construction::ObjectKind;

inline constexpr const char* kLastBlock = "lastblock";

struct InsBlock {
    Coord cell;
    bool operator==(const InsBlock&) const = default;
};

struct InsObject {
    ObjectInstance object;
    bool operator==(const InsObject&) const = default;
};

struct TeachStart {
    ObjectKind kind;
    bool operator==(const TeachStart&) const = default;
};

struct TeachEnd {
    ObjectKind kind;
    bool operator==(const TeachEnd&) const = default;
};

using InstructionAction = std::variant<InsBlock, InsObject, TeachStart, TeachEnd>;

htn::Fact knows(ObjectKind kind);

htn::PrimitiveAction ins_block(const Coord& c);
htn::PrimitiveAction ins_object(const ObjectInstance& obj);
htn::PrimitiveAction ins_teach_start(ObjectKind kind);
/// With `grants_knowledge` false the action has no effect (used to test knowledge gating).
htn::PrimitiveAction ins_teach_end(ObjectKind kind, bool grants_knowledge = true);
htn::PrimitiveAction to_action(const InstructionAction& ins);

/// Decodes an ins-* action; nullopt for anything else (e.g. put-block).
std::optional<InstructionAction> as_instruction(const htn::PrimitiveAction& a);

htn::AbstractTask ins_build_task(const ObjectInstance& obj);
htn::AbstractTask ins_build_block_task(const Coord& c);

struct ModelOptions {
    bool teach_grants_knowledge = true;
};

htn::PlanningProblem build_instruction_problem(const construction::Scenario& scenario,
                                               const strategy::Strategy& strategy,
                                               const ModelOptions& options = {});

/// Admissible per-task lower bound for the instruction problem of `scenario`
/// under `profile`; plug into SearchConfig::bound.
search::TaskBound instruction_bound(const construction::Scenario& scenario, const strategy::CostProfile& profile);

/// The ins-* actions of a plan, in order.
std::vector<InstructionAction> instruction_actions(const htn::Plan& plan);

/// Labels ("L", "H", "T") chosen for every ins-build task of `kind` in the trace, in order.
std::vector<std::string> decompositions_used(const htn::DecompositionTrace& trace, ObjectKind kind);

std::string to_string(const InstructionAction& ins);

}  // namespace htnig::instruction
