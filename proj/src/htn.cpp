#include "htnig/htn.hpp"

#include <cmath>
#include <sstream>

namespace htnig::htn {

std::string to_string(const Arg& arg) {
    if (const auto* i = std::get_if<std::int64_t>(&arg)) {
        return std::to_string(*i);
    }
    return std::get<std::string>(arg);
}

std::string to_string(const Args& args) {
    std::string out = "(";
    for (std::size_t i = 0; i < args.size(); ++i) {
        if (i) out += ",";
        out += to_string(args[i]);
    }
    return out + ")";
}

std::string to_string(const Fact& fact) { return fact.name + to_string(fact.args); }
std::string to_string(const PrimitiveAction& action) { return action.name + to_string(action.args); }
std::string to_string(const AbstractTask& task) { return task.name + to_string(task.args); }

const std::string& task_name(const Task& t) {
    return std::visit([](const auto& v) -> const std::string& { return v.name; }, t);
}

std::string to_string(const Task& t) {
    return std::visit([](const auto& v) { return to_string(v); }, t);
}

std::optional<RegisterValue> State::reg(const std::string& name) const {
    auto it = registers_.find(name);
    if (it == registers_.end()) return std::nullopt;
    return it->second;
}

void State::set_reg(const std::string& name, std::optional<RegisterValue> value) {
    if (value) {
        registers_[name] = std::move(*value);
    } else {
        registers_.erase(name);
    }
}

std::vector<Candidate> PlanningProblem::candidates(const AbstractTask& task) const {
    std::vector<Candidate> out;
    for (const auto& m : methods) {
        if (m.head != task.name) continue;
        auto cands = m.expand(task);
        out.insert(out.end(), std::make_move_iterator(cands.begin()), std::make_move_iterator(cands.end()));
    }
    return out;
}

bool PlanningProblem::has_method(const std::string& head) const {
    for (const auto& m : methods) {
        if (m.head == head) return true;
    }
    return false;
}

bool is_applicable(const State& state, const PrimitiveAction& action) {
    for (const auto& lit : action.precond) {
        if (state.contains(lit.fact) != lit.positive) return false;
    }
    return true;
}

State apply_action(const State& state, const PrimitiveAction& action) {
    if (!is_applicable(state, action)) {
        throw PreconditionViolation("action not applicable: " + to_string(action));
    }
    State next = state;
    for (const auto& f : action.del) next.erase(f);
    for (const auto& f : action.add) next.insert(f);
    if (action.register_update) {
        next.set_reg(action.register_update->name, action.register_update->value);
    }
    return next;
}

TaskNetwork decompose(const TaskNetwork& network, std::size_t index, const TaskNetwork& candidate) {
    if (index >= network.size()) {
        throw std::out_of_range("decompose: index " + std::to_string(index) + " out of range");
    }
    if (is_primitive(network[index])) {
        throw NotAbstract("decompose: task at index " + std::to_string(index) + " is primitive");
    }
    TaskNetwork out;
    out.reserve(network.size() - 1 + candidate.size());
    out.insert(out.end(), network.begin(), network.begin() + static_cast<std::ptrdiff_t>(index));
    out.insert(out.end(), candidate.begin(), candidate.end());
    out.insert(out.end(), network.begin() + static_cast<std::ptrdiff_t>(index) + 1, network.end());
    return out;
}

Plan make_plan(const PlanningProblem& problem, std::vector<PrimitiveAction> actions) {
    Plan plan;
    plan.state_trace.reserve(actions.size() + 1);
    plan.state_trace.push_back(problem.initial_state);
    for (const auto& a : actions) {
        const State& s = plan.state_trace.back();
        plan.total_cost += problem.cost(s, a);
        plan.state_trace.push_back(apply_action(s, a));
    }
    plan.actions = std::move(actions);
    return plan;
}

namespace {

void collect_leaves(const TraceNode& node, std::vector<PrimitiveAction>& out) {
    if (node.task && is_primitive(*node.task)) {
        out.push_back(std::get<PrimitiveAction>(*node.task));
        return;
    }
    for (const auto& child : node.children) collect_leaves(child, out);
}

std::vector<Task> child_tasks(const TraceNode& node) {
    std::vector<Task> out;
    out.reserve(node.children.size());
    for (const auto& c : node.children) {
        if (!c.task) return {};
        out.push_back(*c.task);
    }
    return out;
}

// Checks that every internal node refines its task with a declared candidate.
bool check_node(const PlanningProblem& problem, const TraceNode& node, std::string& why) {
    if (!node.task) {
        why = "non-root node without task";
        return false;
    }
    if (is_primitive(*node.task)) {
        if (!node.children.empty()) {
            why = "primitive node with children: " + to_string(*node.task);
            return false;
        }
        return true;
    }
    const auto& abstract = std::get<AbstractTask>(*node.task);
    const auto cands = problem.candidates(abstract);
    if (node.candidate_index >= cands.size()) {
        why = "no candidate " + std::to_string(node.candidate_index) + " for " + to_string(abstract);
        return false;
    }
    const auto& chosen = cands[node.candidate_index];
    if (chosen.label != node.candidate_label || chosen.subtasks != child_tasks(node)) {
        why = "children do not match candidate " + node.candidate_label + " of " + to_string(abstract);
        return false;
    }
    for (const auto& c : node.children) {
        if (!check_node(problem, c, why)) return false;
    }
    return true;
}

}  // namespace

std::vector<PrimitiveAction> trace_leaves(const DecompositionTrace& trace) {
    std::vector<PrimitiveAction> out;
    collect_leaves(trace, out);
    return out;
}

ValidationReport validate_plan(const PlanningProblem& problem, const Plan& plan, const DecompositionTrace* trace) {
    ValidationReport report;
    report.executable = true;

    State s = problem.initial_state;
    double cost = 0.0;
    for (std::size_t i = 0; i < plan.actions.size(); ++i) {
        const auto& a = plan.actions[i];
        if (!is_applicable(s, a)) {
            report.executable = false;
            report.message = "step " + std::to_string(i) + ": " + to_string(a) + " not applicable";
            break;
        }
        cost += problem.cost(s, a);
        s = apply_action(s, a);
    }
    report.cost = cost;
    report.cost_matches = report.executable && std::abs(cost - plan.total_cost) <= kCostTolerance;
    if (report.executable && !report.cost_matches) {
        std::ostringstream os;
        os << "cost mismatch: recomputed " << cost << ", plan says " << plan.total_cost;
        report.message = os.str();
    }

    if (trace) {
        std::string why;
        bool ok = !trace->task.has_value() && child_tasks(*trace) == problem.initial_network;
        if (!ok) why = "trace root does not match the initial network";
        for (const auto& c : trace->children) {
            if (!ok) break;
            ok = check_node(problem, c, why);
        }
        if (ok && trace_leaves(*trace) != plan.actions) {
            ok = false;
            why = "trace leaves differ from plan actions";
        }
        report.derivable = ok;
        if (!ok && report.message.empty()) report.message = why;
    }
    return report;
}

}  // namespace htnig::htn
