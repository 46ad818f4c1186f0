#include "htnig/realizer.hpp"

#include <array>
#include <cstdio>
#include <string_view>

namespace htnig::realizer {

namespace {

struct Relation {
    Coord offset;           // target = reference + offset
    std::string_view block;  // "Put a block <block> the X block."
    std::string_view anchor; // "<anchor> the X block"
};

// Fixed compass: +z is "in front", -x is "left".
constexpr std::array<Relation, 6> kRelations{{
    {{0, 1, 0}, "on top of", "the top of"},
    {{0, -1, 0}, "below", "the bottom of"},
    {{0, 0, 1}, "in front of", "the spot in front of"},
    {{0, 0, -1}, "behind", "the spot behind"},
    {{-1, 0, 0}, "left of", "the spot left of"},
    {{1, 0, 0}, "right of", "the spot right of"},
}};

constexpr std::string_view kPutPrefix = "Put a block ";
constexpr std::string_view kBuildPrefix = "Build a ";
constexpr std::string_view kPrevious = "the previous block";

std::string absolute(const Coord& c) {
    return "column " + std::to_string(c.x) + ", row " + std::to_string(c.z) + ", height " + std::to_string(c.y);
}

std::optional<Coord> parse_absolute(std::string_view s) {
    Coord c;
    char tail = 0;
    const std::string str(s);
    if (std::sscanf(str.c_str(), "column %d, row %d, height %d%c", &c.x, &c.z, &c.y, &tail) != 3) return std::nullopt;
    return c;
}

std::string marker_phrase(const std::string& color) { return "the " + color + " block"; }

// "the blue block" -> its cell.
std::optional<Coord> parse_marker(std::string_view s, const DiscourseState& ds) {
    for (const auto& [color, pos] : ds.world.markers) {
        if (s == marker_phrase(color)) return pos;
    }
    return std::nullopt;
}

bool consume(std::string_view& s, std::string_view prefix) {
    if (s.substr(0, prefix.size()) != prefix) return false;
    s.remove_prefix(prefix.size());
    return true;
}

bool consume_suffix(std::string_view& s, std::string_view suffix) {
    if (s.size() < suffix.size() || s.substr(s.size() - suffix.size()) != suffix) return false;
    s.remove_suffix(suffix.size());
    return true;
}

std::string object_word(construction::ObjectKind k) { return std::string(construction::name(k)); }

}  // namespace

ReferringExpression block_reference(const Coord& target, const DiscourseState& ds) {
    if (ds.last_instructed_block) {
        for (const auto& r : kRelations) {
            if (*ds.last_instructed_block + r.offset == target) {
                return {std::string(r.block) + " " + std::string(kPrevious), target};
            }
        }
    }
    for (const auto& r : kRelations) {
        for (const auto& [color, pos] : ds.world.markers) {
            if (pos + r.offset == target) return {std::string(r.block) + " " + marker_phrase(color), target};
        }
    }
    return {"at " + absolute(target), target};
}

ReferringExpression anchor_reference(const Coord& target, const DiscourseState& ds) {
    if (auto color = ds.world.marker_at(target)) return {marker_phrase(*color), target};
    for (const auto& r : kRelations) {
        for (const auto& [color, pos] : ds.world.markers) {
            if (pos + r.offset == target) return {std::string(r.anchor) + " " + marker_phrase(color), target};
        }
    }
    return {absolute(target), target};
}

std::string realize(const instruction::InstructionAction& action, const DiscourseState& ds) {
    using namespace instruction;
    if (const auto* b = std::get_if<InsBlock>(&action)) {
        return std::string(kPutPrefix) + block_reference(b->cell, ds).text + ".";
    }
    if (const auto* o = std::get_if<InsObject>(&action)) {
        const auto cells = construction::ordered_cells(o->object);
        const std::string kind = object_word(o->object.kind);
        const auto from = anchor_reference(cells.front(), ds).text;
        if (cells.size() == 1) return std::string(kBuildPrefix) + kind + " at " + from + ".";
        return std::string(kBuildPrefix) + kind + " from " + from + " to " + anchor_reference(cells.back(), ds).text + ".";
    }
    if (const auto* t = std::get_if<TeachStart>(&action)) {
        return "Now I will teach you how to build a " + object_word(t->kind) + ".";
    }
    return "That is how you build a " + object_word(std::get<TeachEnd>(action).kind) + ".";
}

std::string realize(const htn::PrimitiveAction& action, const DiscourseState& ds) {
    const auto ins = instruction::as_instruction(action);
    if (!ins) throw UnrealizableAction("not an instruction action: " + htn::to_string(action));
    return realize(*ins, ds);
}

std::string realize_feedback(FeedbackKind kind) {
    switch (kind) {
        case FeedbackKind::correct: return "Correct.";
        case FeedbackKind::wrong_block_remove: return "That block is not correct - please remove it.";
        case FeedbackKind::replace_removed: return "That block was correct - please put it back.";
        case FeedbackKind::object_complete: return "Great, that part is finished.";
        case FeedbackKind::all_done: return "Congratulations, you have built the whole structure!";
        case FeedbackKind::timeout: return "Time is up. Thank you for playing.";
    }
    return "";
}

std::string greeting(const std::string& scenario_name) {
    std::string what = scenario_name == "mini-bridge" ? "bridge" : scenario_name;
    return "I will try to instruct you to build a " + what + ".";
}

void update(DiscourseState& ds, const instruction::InstructionAction& action) {
    using namespace instruction;
    if (const auto* b = std::get_if<InsBlock>(&action)) {
        ds.last_instructed_block = b->cell;
    } else if (std::holds_alternative<InsObject>(action)) {
        ds.last_instructed_block.reset();
    } else if (const auto* t = std::get_if<TeachEnd>(&action)) {
        ds.taught_kinds.insert(t->kind);
    }
}

std::optional<Coord> resolve_block_sentence(const std::string& sentence, const DiscourseState& ds) {
    std::string_view s = sentence;
    if (!consume(s, kPutPrefix) || !consume_suffix(s, ".")) return std::nullopt;
    if (consume(s, "at ")) return parse_absolute(s);
    for (const auto& r : kRelations) {
        std::string_view rest = s;
        if (!consume(rest, r.block) || !consume(rest, " ")) continue;
        if (rest == kPrevious) {
            if (!ds.last_instructed_block) return std::nullopt;
            return *ds.last_instructed_block + r.offset;
        }
        if (auto m = parse_marker(rest, ds)) return *m + r.offset;
        return std::nullopt;
    }
    return std::nullopt;
}

std::optional<Coord> resolve_anchor(const std::string& phrase, const DiscourseState& ds) {
    if (auto m = parse_marker(phrase, ds)) return m;
    for (const auto& r : kRelations) {
        std::string_view rest = phrase;
        if (!consume(rest, r.anchor) || !consume(rest, " ")) continue;
        if (auto m = parse_marker(rest, ds)) return *m + r.offset;
    }
    return parse_absolute(phrase);
}

std::optional<std::pair<Coord, Coord>> resolve_object_sentence(const std::string& sentence, const DiscourseState& ds) {
    std::string_view s = sentence;
    if (!consume(s, kBuildPrefix) || !consume_suffix(s, ".")) return std::nullopt;
    const auto space = s.find(' ');
    if (space == std::string_view::npos) return std::nullopt;
    s.remove_prefix(space + 1);
    if (consume(s, "at ")) {
        auto c = resolve_anchor(std::string(s), ds);
        if (!c) return std::nullopt;
        return std::pair{*c, *c};
    }
    if (!consume(s, "from ")) return std::nullopt;
    const auto to = s.find(" to ");
    if (to == std::string_view::npos) return std::nullopt;
    auto a = resolve_anchor(std::string(s.substr(0, to)), ds);
    auto b = resolve_anchor(std::string(s.substr(to + 4)), ds);
    if (!a || !b) return std::nullopt;
    return std::pair{*a, *b};
}

}  // namespace htnig::realizer
