#pragma once

// Totally-ordered HTN formalism: facts, states, primitive actions, abstract
// tasks, methods, task networks, plans and their validation.

#include <compare>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace htnig::htn {

using Arg = std::variant<std::int64_t, std::string>;
using Args = std::vector<Arg>;

std::string to_string(const Arg& arg);
std::string to_string(const Args& args);

struct Fact {
    std::string name;
    Args args;

    auto operator<=>(const Fact&) const = default;
    bool operator==(const Fact&) const = default;
};

std::string to_string(const Fact& fact);

struct Literal {
    Fact fact;
    bool positive = true;

    bool operator==(const Literal&) const = default;
};

/// Value held in a register slot (e.g. the coordinates of the last instructed block).
using RegisterValue = std::vector<std::int64_t>;

/// Assignment to one register. An empty `value` clears the slot.
struct RegisterUpdate {
    std::string name;
    std::optional<RegisterValue> value;

    bool operator==(const RegisterUpdate&) const = default;
};

/// A set of facts plus a small bank of named registers. Registers never take
/// part in precondition checks; they are visible to cost functions only.
class State {
public:
    State() = default;
    explicit State(std::set<Fact> facts) : facts_(std::move(facts)) {}

    const std::set<Fact>& facts() const { return facts_; }
    const std::map<std::string, RegisterValue>& registers() const { return registers_; }

    bool contains(const Fact& fact) const { return facts_.count(fact) != 0; }
    std::optional<RegisterValue> reg(const std::string& name) const;

    /// Returns true if the fact was newly inserted.
    bool insert(Fact fact) { return facts_.insert(std::move(fact)).second; }
    /// Returns true if the fact was present.
    bool erase(const Fact& fact) { return facts_.erase(fact) != 0; }
    void set_reg(const std::string& name, std::optional<RegisterValue> value);

    bool operator==(const State&) const = default;

private:
    std::set<Fact> facts_;
    std::map<std::string, RegisterValue> registers_;
};

struct PrimitiveAction {
    std::string name;
    Args args;
    std::vector<Literal> precond;
    std::vector<Fact> add;
    std::vector<Fact> del;
    std::optional<RegisterUpdate> register_update;

    bool operator==(const PrimitiveAction&) const = default;
};

std::string to_string(const PrimitiveAction& action);

struct AbstractTask {
    std::string name;
    Args args;

    bool operator==(const AbstractTask&) const = default;
};

std::string to_string(const AbstractTask& task);

using Task = std::variant<AbstractTask, PrimitiveAction>;
using TaskNetwork = std::vector<Task>;

inline bool is_primitive(const Task& t) { return std::holds_alternative<PrimitiveAction>(t); }
const std::string& task_name(const Task& t);
std::string to_string(const Task& t);

/// One way of refining a method head. `label` names the choice (e.g. "L", "H", "T").
struct Candidate {
    std::string label;
    TaskNetwork subtasks;

    bool operator==(const Candidate&) const = default;
};

/// Lifted method: expands a head instance into its candidate networks. The
/// generator sees only the task's parameters, never the current state.
struct Method {
    std::string head;
    std::function<std::vector<Candidate>(const AbstractTask&)> expand;
};

using CostFunction = std::function<double(const State&, const PrimitiveAction&)>;

struct PlanningProblem {
    std::vector<Method> methods;
    TaskNetwork initial_network;
    State initial_state;
    CostFunction cost;

    /// All candidates for `task` across every method with a matching head,
    /// in declaration order.
    std::vector<Candidate> candidates(const AbstractTask& task) const;
    bool has_method(const std::string& head) const;
};

struct Plan {
    std::vector<PrimitiveAction> actions;
    std::vector<State> state_trace;
    double total_cost = 0.0;
};

/// Derivation tree. The root node has no task; its children are the initial
/// network. Internal nodes hold an abstract task plus the chosen candidate;
/// leaves hold primitive actions.
struct TraceNode {
    std::optional<Task> task;
    std::string candidate_label;
    std::size_t candidate_index = 0;
    std::vector<TraceNode> children;

    bool operator==(const TraceNode&) const = default;
};

using DecompositionTrace = TraceNode;

/// In-order primitive leaves of a trace.
std::vector<PrimitiveAction> trace_leaves(const DecompositionTrace& trace);

struct PreconditionViolation : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct NotAbstract : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

bool is_applicable(const State& state, const PrimitiveAction& action);

/// Progression: (state \ del) u add, then the register update.
State apply_action(const State& state, const PrimitiveAction& action);

/// Replaces network[index] by `candidate`. The input network is untouched.
TaskNetwork decompose(const TaskNetwork& network, std::size_t index, const TaskNetwork& candidate);

/// Builds the full plan record (state trace and cost) for an action sequence.
/// Throws PreconditionViolation if some action is not applicable.
Plan make_plan(const PlanningProblem& problem, std::vector<PrimitiveAction> actions);

struct ValidationReport {
    bool executable = false;
    std::optional<bool> derivable;
    double cost = 0.0;
    bool cost_matches = false;
    std::string message;

    bool ok() const { return executable && derivable.value_or(true) && cost_matches; }
};

ValidationReport validate_plan(const PlanningProblem& problem,
                               const Plan& plan,
                               const DecompositionTrace* trace = nullptr);

inline constexpr double kCostTolerance = 1e-9;

}  // namespace htnig::htn
