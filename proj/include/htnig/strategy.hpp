#pragma once

#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "htnig/construction.hpp"
#include "htnig/htn.hpp"

namespace htnig::strategy {

/// Costs of instruction actions. Construction actions are free.
struct CostProfile {
    double block = 10.0;
    double block_adjacent = 5.0;
    double object = 2.0;
    double teach = 1.0;

    /// Throws std::invalid_argument unless all fields are >= 0 and block_adjacent <= block.
    void check() const;
    CostProfile scaled(double factor) const;
    bool operator==(const CostProfile&) const = default;
};

struct Strategy {
    std::string name;
    std::set<construction::ObjectKind> initial_knowledge;
    CostProfile profile;
};

struct UnknownStrategy : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

const std::vector<std::string>& strategy_names();

/// "low-level", "teaching" or "high-level".
Strategy default_strategy(std::string_view name);

/// put-block: 0. ins-block: `block_adjacent` when face-adjacent to the
/// lastblock register, else `block`. Object instructions: `object`. Each
/// teach bracket action: `teach`.
double cost_of(const CostProfile& profile, const htn::State& state, const htn::PrimitiveAction& action);

}  // namespace htnig::strategy
