#pragma once

// Template realization of instruction actions. Block references prefer the
// previously instructed block, then a neighbouring coloured marker, then
// absolute coordinates.

#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>

#include "htnig/construction.hpp"
#include "htnig/instruction.hpp"

namespace htnig::realizer {

using construction::Coord;

struct DiscourseState {
    std::optional<Coord> last_instructed_block;
    construction::WorldGrid world;
    std::set<construction::ObjectKind> taught_kinds;
};

struct UnrealizableAction : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// A reference phrase and the cell it denotes.
struct ReferringExpression {
    std::string text;
    Coord cell;
};

/// Reference used inside "Put a block ..." sentences, e.g. "on top of the previous block".
ReferringExpression block_reference(const Coord& target, const DiscourseState& ds);
/// Reference used as an object endpoint, e.g. "the top of the blue block".
ReferringExpression anchor_reference(const Coord& target, const DiscourseState& ds);

std::string realize(const instruction::InstructionAction& action, const DiscourseState& ds);
/// Throws UnrealizableAction for anything that is not an ins-* action.
std::string realize(const htn::PrimitiveAction& action, const DiscourseState& ds);

enum class FeedbackKind { correct, wrong_block_remove, replace_removed, object_complete, all_done, timeout };

std::string realize_feedback(FeedbackKind kind);
std::string greeting(const std::string& scenario_name);

/// Advances the discourse state past an issued instruction.
void update(DiscourseState& ds, const instruction::InstructionAction& action);

// Inverse of the templates: what cell(s) does a realized sentence denote?
std::optional<Coord> resolve_block_sentence(const std::string& sentence, const DiscourseState& ds);
std::optional<Coord> resolve_anchor(const std::string& phrase, const DiscourseState& ds);
/// Endpoints named by "Build a <kind> from A to B." / "Build a <kind> at A."
std::optional<std::pair<Coord, Coord>> resolve_object_sentence(const std::string& sentence, const DiscourseState& ds);

}  // namespace htnig::realizer
