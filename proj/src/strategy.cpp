#include "htnig/strategy.hpp"

#include "htnig/instruction.hpp"

namespace htnig::strategy {

void CostProfile::check() const {
    if (block < 0 || block_adjacent < 0 || object < 0 || teach < 0) {
        throw std::invalid_argument("cost profile entries must be nonnegative");
    }
    if (block_adjacent > block) {
        throw std::invalid_argument("adjacent block cost must not exceed the plain block cost");
    }
}

CostProfile CostProfile::scaled(double factor) const {
    return {block * factor, block_adjacent * factor, object * factor, teach * factor};
}

const std::vector<std::string>& strategy_names() {
    static const std::vector<std::string> names{"low-level", "teaching", "high-level"};
    return names;
}

Strategy default_strategy(std::string_view name) {
    if (name == "low-level") {
        return {"low-level", {}, {10.0, 5.0, 1000.0, 1000.0}};
    }
    if (name == "teaching") {
        return {"teaching", {}, {10.0, 5.0, 2.0, 1.0}};
    }
    if (name == "high-level") {
        const auto& kinds = construction::learnable_kinds();
        return {"high-level", {kinds.begin(), kinds.end()}, {10.0, 5.0, 2.0, 1.0}};
    }
    throw UnknownStrategy("unknown strategy '" + std::string(name) + "'");
}

double cost_of(const CostProfile& profile, const htn::State& state, const htn::PrimitiveAction& action) {
    const auto ins = instruction::as_instruction(action);
    if (!ins) return 0.0;
    if (const auto* block = std::get_if<instruction::InsBlock>(&*ins)) {
        if (const auto last = state.reg(instruction::kLastBlock); last && last->size() == 3) {
            const construction::Coord prev{static_cast<int>((*last)[0]), static_cast<int>((*last)[1]),
                                           static_cast<int>((*last)[2])};
            if (construction::face_adjacent(prev, block->cell)) return profile.block_adjacent;
        }
        return profile.block;
    }
    if (std::holds_alternative<instruction::InsObject>(*ins)) return profile.object;
    return profile.teach;
}

}  // namespace htnig::strategy
