#pragma once

#include <random>

#include "htnig/construction.hpp"
#include "htnig/instruction.hpp"
#include "htnig/search.hpp"
#include "htnig/strategy.hpp"

namespace testing {

inline htnig::search::Solution solve(const htnig::construction::Scenario& scenario,
                                     const htnig::strategy::Strategy& strategy,
                                     const htnig::instruction::ModelOptions& model = {}) {
    const auto problem = htnig::instruction::build_instruction_problem(scenario, strategy, model);
    htnig::search::SearchConfig config;
    config.bound = htnig::instruction::instruction_bound(scenario, strategy.profile);
    return htnig::search::plan(problem, config);
}

inline htnig::search::Solution solve(const std::string& scenario, const std::string& strategy) {
    return solve(htnig::construction::make_scenario(scenario), htnig::strategy::default_strategy(strategy));
}

template <typename Variant, typename Alt>
std::size_t count_of(const std::vector<Variant>& xs) {
    std::size_t n = 0;
    for (const auto& x : xs) n += std::holds_alternative<Alt>(x);
    return n;
}

}  // namespace testing
