#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <stdexcept>

#include "htnig/htn.hpp"

namespace htnig::search {

using htn::DecompositionTrace;
using htn::Plan;
using htn::PlanningProblem;
using htn::Task;

/// Lower bound on the cost any refinement of a single task can contribute.
/// Must be admissible: never above the true cost of the cheapest refinement
/// in any context.
using TaskBound = std::function<double(const Task&)>;

struct SearchConfig {
    /// Only plans strictly cheaper than this are reported.
    std::optional<double> cost_bound;
    std::size_t max_depth = 10'000;
    /// Stops the search (and drops the optimality flag) after this many node visits.
    std::optional<std::size_t> max_nodes;
    std::function<void(const Plan&)> on_improved;
    bool branch_and_bound = true;
    TaskBound bound;
};

struct SearchStats {
    std::size_t nodes = 0;
    std::size_t improvements = 0;
    std::size_t pruned = 0;
    bool depth_limited = false;
};

struct Solution {
    Plan plan;
    DecompositionTrace trace;
    bool optimal = false;
    SearchStats stats;
};

struct NoSolution : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct DepthExceeded : NoSolution {
    using NoSolution::NoSolution;
};

struct BudgetExceeded : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Cost-optimal progression search: depth-first over the front task of the
/// network, branching on method candidates in declaration order, pruning by
/// the incumbent cost. Ties keep the first plan found.
Solution plan(const PlanningProblem& problem, const SearchConfig& config = {});

/// Rebuilds a derivation tree from the candidate indices chosen at each
/// abstract task, in progression order.
DecompositionTrace replay_trace(const PlanningProblem& problem, const std::vector<std::size_t>& choices);

/// Plan recognition: finds a derivation of the initial network whose
/// primitive leaves are exactly `actions`, each applicable in turn. Returns the
/// candidate choices (first match in declaration order), or nullopt.
std::optional<std::vector<std::size_t>> derive(const PlanningProblem& problem,
                                               const std::vector<htn::PrimitiveAction>& actions);

/// Minimum plan cost by unpruned enumeration of every derivation. Test oracle;
/// throws BudgetExceeded once more than `leaf_budget` derivation leaves
/// (complete or dead) have been visited, NoSolution if none is executable.
double exhaustive_optimal(const PlanningProblem& problem, std::size_t leaf_budget = 10'000'000);

}  // namespace htnig::search
