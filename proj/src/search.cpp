#include "htnig/search.hpp"

#include <limits>

namespace htnig::search {

using htn::AbstractTask;
using htn::Candidate;
using htn::Fact;
using htn::PrimitiveAction;
using htn::State;
using htn::TaskNetwork;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kImprovement = 1e-9;

struct StopSearch {};

class Searcher {
public:
    Searcher(const PlanningProblem& problem, const SearchConfig& config)
        : problem_(problem), config_(config), state_(problem.initial_state) {
        best_cost_ = config.cost_bound.value_or(kInf);
        for (auto it = problem.initial_network.rbegin(); it != problem.initial_network.rend(); ++it) {
            push(&*it);
        }
    }

    void run() {
        try {
            visit(0, 0.0);
        } catch (const StopSearch&) {
            stopped_ = true;
        }
    }

    bool found() const { return best_actions_.has_value(); }
    bool exhausted() const { return !stopped_ && !stats_.depth_limited; }
    const std::vector<PrimitiveAction>& best_actions() const { return *best_actions_; }
    const std::vector<std::size_t>& best_choices() const { return best_choices_; }
    const SearchStats& stats() const { return stats_; }

private:
    double bound_of(const Task* t) const { return config_.bound ? config_.bound(*t) : 0.0; }

    void push(const Task* t) {
        pending_.push_back(t);
        pending_bound_ += bound_of(t);
    }

    const Task* pop() {
        const Task* t = pending_.back();
        pending_.pop_back();
        pending_bound_ -= bound_of(t);
        return t;
    }

    void visit(std::size_t depth, double cost) {
        ++stats_.nodes;
        if (config_.max_nodes && stats_.nodes > *config_.max_nodes) throw StopSearch{};
        if (config_.branch_and_bound && cost + pending_bound_ > best_cost_ - kImprovement) {
            ++stats_.pruned;
            return;
        }
        if (pending_.empty()) {
            if (cost < best_cost_ - kImprovement) record(cost);
            return;
        }
        if (depth >= config_.max_depth) {
            stats_.depth_limited = true;
            return;
        }

        const Task* task = pop();
        if (const auto* action = std::get_if<PrimitiveAction>(task)) {
            if (htn::is_applicable(state_, *action)) {
                const double step = problem_.cost(state_, *action);
                expand_primitive(*action, depth, cost + step);
            }
        } else {
            const auto& abstract = std::get<AbstractTask>(*task);
            if (!problem_.has_method(abstract.name)) {
                throw std::invalid_argument("no method for abstract task " + htn::to_string(abstract));
            }
            const std::vector<Candidate> cands = problem_.candidates(abstract);
            for (std::size_t i = 0; i < cands.size(); ++i) {
                const auto& subtasks = cands[i].subtasks;
                for (auto it = subtasks.rbegin(); it != subtasks.rend(); ++it) push(&*it);
                choices_.push_back(i);
                visit(depth + 1, cost);
                choices_.pop_back();
                for (std::size_t k = 0; k < subtasks.size(); ++k) pop();
            }
        }
        push(task);
    }

    // Applies in place, recurses, then undoes.
    void expand_primitive(const PrimitiveAction& action, std::size_t depth, double cost) {
        std::vector<Fact> removed;
        std::vector<Fact> added;
        for (const auto& f : action.del) {
            if (state_.erase(f)) removed.push_back(f);
        }
        for (const auto& f : action.add) {
            if (state_.insert(f)) added.push_back(f);
        }
        std::optional<std::optional<htn::RegisterValue>> old_reg;
        if (action.register_update) {
            old_reg = state_.reg(action.register_update->name);
            state_.set_reg(action.register_update->name, action.register_update->value);
        }
        actions_.push_back(&action);

        visit(depth + 1, cost);

        actions_.pop_back();
        if (old_reg) state_.set_reg(action.register_update->name, *old_reg);
        for (const auto& f : added) state_.erase(f);
        for (auto& f : removed) state_.insert(std::move(f));
    }

    void record(double cost) {
        best_cost_ = cost;
        std::vector<PrimitiveAction> actions;
        actions.reserve(actions_.size());
        for (const auto* a : actions_) actions.push_back(*a);
        best_actions_ = std::move(actions);
        best_choices_ = choices_;
        ++stats_.improvements;
        if (config_.on_improved) config_.on_improved(htn::make_plan(problem_, *best_actions_));
    }

    const PlanningProblem& problem_;
    const SearchConfig& config_;
    State state_;
    std::vector<const Task*> pending_;  // back() is the next task
    double pending_bound_ = 0.0;
    std::vector<const PrimitiveAction*> actions_;
    std::vector<std::size_t> choices_;

    double best_cost_ = kInf;
    std::optional<std::vector<PrimitiveAction>> best_actions_;
    std::vector<std::size_t> best_choices_;
    SearchStats stats_;
    bool stopped_ = false;
};

struct Replayer {
    const PlanningProblem& problem;
    const std::vector<std::size_t>& choices;
    std::size_t next = 0;

    htn::TraceNode node_for(const Task& task) {
        htn::TraceNode node;
        node.task = task;
        if (const auto* abstract = std::get_if<AbstractTask>(&task)) {
            if (next >= choices.size()) throw std::invalid_argument("replay_trace: ran out of choices");
            const std::size_t index = choices[next++];
            auto cands = problem.candidates(*abstract);
            if (index >= cands.size()) throw std::invalid_argument("replay_trace: candidate index out of range");
            node.candidate_index = index;
            node.candidate_label = cands[index].label;
            for (const auto& sub : cands[index].subtasks) node.children.push_back(node_for(sub));
        }
        return node;
    }
};

// Unpruned enumeration over whole networks, using only the pure core operations.
struct Enumerator {
    const PlanningProblem& problem;
    std::size_t budget;
    std::size_t leaves = 0;
    double best = kInf;

    void leaf() {
        if (++leaves > budget) throw BudgetExceeded("exhaustive_optimal: leaf budget exhausted");
    }

    void run(const State& state, const TaskNetwork& network, double cost) {
        if (network.empty()) {
            leaf();
            best = std::min(best, cost);
            return;
        }
        const Task& front = network.front();
        if (const auto* action = std::get_if<PrimitiveAction>(&front)) {
            if (!htn::is_applicable(state, *action)) {
                leaf();
                return;
            }
            TaskNetwork rest(network.begin() + 1, network.end());
            run(htn::apply_action(state, *action), rest, cost + problem.cost(state, *action));
            return;
        }
        const auto cands = problem.candidates(std::get<AbstractTask>(front));
        if (cands.empty()) leaf();
        for (const auto& c : cands) run(state, htn::decompose(network, 0, c.subtasks), cost);
    }
};

struct Recognizer {
    const PlanningProblem& problem;
    const std::vector<PrimitiveAction>& actions;
    std::vector<std::size_t> choices;

    bool run(const State& state, const TaskNetwork& network, std::size_t pos) {
        if (network.empty()) return pos == actions.size();
        const Task& front = network.front();
        if (const auto* action = std::get_if<PrimitiveAction>(&front)) {
            if (pos >= actions.size() || !(*action == actions[pos]) || !htn::is_applicable(state, *action)) {
                return false;
            }
            TaskNetwork rest(network.begin() + 1, network.end());
            return run(htn::apply_action(state, *action), rest, pos + 1);
        }
        const auto cands = problem.candidates(std::get<AbstractTask>(front));
        for (std::size_t i = 0; i < cands.size(); ++i) {
            choices.push_back(i);
            if (run(state, htn::decompose(network, 0, cands[i].subtasks), pos)) return true;
            choices.pop_back();
        }
        return false;
    }
};

}  // namespace

std::optional<std::vector<std::size_t>> derive(const PlanningProblem& problem,
                                               const std::vector<PrimitiveAction>& actions) {
    Recognizer r{problem, actions, {}};
    if (!r.run(problem.initial_state, problem.initial_network, 0)) return std::nullopt;
    return r.choices;
}

DecompositionTrace replay_trace(const PlanningProblem& problem, const std::vector<std::size_t>& choices) {
    Replayer r{problem, choices};
    DecompositionTrace root;
    for (const auto& t : problem.initial_network) root.children.push_back(r.node_for(t));
    if (r.next != choices.size()) throw std::invalid_argument("replay_trace: unused choices");
    return root;
}

Solution plan(const PlanningProblem& problem, const SearchConfig& config) {
    Searcher searcher(problem, config);
    searcher.run();
    if (!searcher.found()) {
        if (searcher.stats().depth_limited) {
            throw DepthExceeded("no plan found within depth " + std::to_string(config.max_depth));
        }
        throw NoSolution("no executable derivation of the initial task network");
    }
    Solution solution;
    solution.plan = htn::make_plan(problem, searcher.best_actions());
    solution.trace = replay_trace(problem, searcher.best_choices());
    solution.optimal = searcher.exhausted();
    solution.stats = searcher.stats();
    return solution;
}

double exhaustive_optimal(const PlanningProblem& problem, std::size_t leaf_budget) {
    Enumerator e{problem, leaf_budget};
    e.run(problem.initial_state, problem.initial_network, 0.0);
    if (e.best == kInf) throw NoSolution("exhaustive_optimal: no executable derivation");
    return e.best;
}

}  // namespace htnig::search
