#include "htnig/session.hpp"

#include <algorithm>
#include <chrono>
#include <random>

#include <json.hpp>

namespace htnig::session {

using instruction::InsBlock;
using instruction::InsObject;

std::string_view name(EventKind k) {
    switch (k) {
        case EventKind::instruction_issued: return "instruction-issued";
        case EventKind::block_placed: return "block-placed";
        case EventKind::block_removed: return "block-removed";
        case EventKind::mistake: return "mistake";
        case EventKind::removal_requested: return "removal-requested";
        case EventKind::object_complete: return "object-complete";
        case EventKind::success: return "success";
        case EventKind::timeout: return "timeout";
    }
    return "?";
}

std::string_view name(Feedback f) {
    switch (f) {
        case Feedback::correct: return "correct";
        case Feedback::mistake: return "mistake";
        case Feedback::remove: return "remove";
        case Feedback::replace: return "replace";
        case Feedback::object_complete: return "object-complete";
        case Feedback::success: return "success";
        case Feedback::timeout: return "timeout";
    }
    return "?";
}

std::string to_jsonl(const SessionEvent& e) {
    nlohmann::json payload = nlohmann::json::object();
    if (e.cell) {
        payload["x"] = e.cell->x;
        payload["y"] = e.cell->y;
        payload["z"] = e.cell->z;
    }
    if (e.instruction) payload["id"] = *e.instruction;
    if (!e.text.empty()) payload["text"] = e.text;
    nlohmann::json j{{"ts", e.ts}, {"kind", std::string(name(e.kind))}, {"payload", payload}};
    return j.dump();
}

Session Session::start(const construction::Scenario& scenario, const strategy::Strategy& strategy,
                       const search::Solution& solution, SessionOptions options) {
    const auto problem = instruction::build_instruction_problem(scenario, strategy);
    const auto report = htn::validate_plan(problem, solution.plan, &solution.trace);
    if (!report.ok()) throw InvalidPlan("plan rejected: " + report.message);

    Session s;
    s.scenario_ = scenario;
    s.target_ = construction::target_shape(scenario);
    s.world_ = scenario.initial;
    s.discourse_.world = scenario.initial;
    s.limits_ = options.limits;
    s.logical_time_ = options.logical_time;
    if (options.clock) {
        s.clock_ = std::move(options.clock);
    } else {
        const auto t0 = std::chrono::steady_clock::now();
        s.clock_ = [t0] { return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count(); };
    }

    for (const auto& a : solution.plan.actions) {
        if (auto ins = instruction::as_instruction(a)) {
            s.queue_.push_back(*ins);
            s.expected_.emplace_back();
        } else if (auto c = construction::put_block_coord(a)) {
            if (s.expected_.empty()) throw InvalidPlan("put-block before any instruction");
            s.expected_.back().push_back(*c);
        }
    }

    for (const auto& [label, obj] : construction::top_level_parts(scenario)) {
        PartProgress p;
        p.label = label;
        for (const auto& c : construction::cells(obj)) {
            if (!scenario.initial.is_occupied(c)) p.cells.insert(c);
        }
        s.parts_.push_back(std::move(p));
    }
    // Instructions without cells (teach brackets) belong to the part of the next instruction that has some.
    s.part_of_.assign(s.queue_.size(), s.parts_.empty() ? 0 : s.parts_.size() - 1);
    std::optional<std::size_t> next_part;
    for (std::size_t i = s.queue_.size(); i-- > 0;) {
        if (!s.expected_[i].empty()) {
            for (std::size_t p = 0; p < s.parts_.size(); ++p) {
                if (s.parts_[p].cells.count(s.expected_[i].front())) next_part = p;
            }
        }
        if (next_part) s.part_of_[i] = *next_part;
    }

    FeedbackDecision opening;
    s.issue_current(opening, realizer::greeting(scenario.name) + " ");
    s.opening_ = std::move(opening.messages);
    return s;
}

double Session::now() const { return logical_time_ ? static_cast<double>(steps_) : clock_(); }

void Session::log(EventKind kind, std::optional<Coord> cell, std::optional<std::size_t> ins, std::string text) {
    events_.push_back({now(), kind, cell, ins, std::move(text)});
}

void Session::feedback(FeedbackDecision& out, Feedback kind, realizer::FeedbackKind text_kind) {
    out.messages.push_back({MessageType::feedback, cursor_, kind, realizer::realize_feedback(text_kind)});
}

void Session::issue_current(FeedbackDecision& out, const std::string& prefix) {
    std::string lead = prefix;
    while (cursor_ < queue_.size()) {
        const auto& ins = queue_[cursor_];
        discourse_.world = world_;
        const std::string text = lead + realizer::realize(ins, discourse_);
        lead.clear();
        realizer::update(discourse_, ins);

        log(EventKind::instruction_issued, std::nullopt, cursor_, text);
        current_instruction_ = {MessageType::instruction, cursor_, Feedback::correct, text};
        out.messages.push_back(current_instruction_);

        if (!parts_.empty()) {
            auto& part = parts_[part_of_[cursor_]];
            if (!part.started_at) {
                part.started_at = now();
                part.started_step = steps_;
            }
        }

        scope_.clear();
        if (const auto* b = std::get_if<InsBlock>(&ins)) {
            scope_.insert(b->cell);
        } else if (const auto* o = std::get_if<InsObject>(&ins)) {
            scope_ = construction::cells(o->object);
        }
        for (auto it = scope_.begin(); it != scope_.end();) {
            it = world_.is_occupied(*it) ? scope_.erase(it) : std::next(it);
        }
        if (!scope_.empty()) return;
        ++cursor_;  // purely verbal, or nothing left to place
    }
    finish(out);
}

void Session::advance(FeedbackDecision& out) {
    ++cursor_;
    issue_current(out);
}

void Session::finish(FeedbackDecision& out) {
    if (world_.occupied == target_) {
        succeeded_ = true;
        ended_at_ = now();
        log(EventKind::success);
        feedback(out, Feedback::success, realizer::FeedbackKind::all_done);
        return;
    }
    // Queue exhausted but the structure is incomplete: everything missing becomes expected.
    for (const auto& c : target_) {
        if (!world_.is_occupied(c)) scope_.insert(c);
    }
}

void Session::check_parts(FeedbackDecision& out) {
    for (auto& part : parts_) {
        if (part.complete) continue;
        const bool done = std::all_of(part.cells.begin(), part.cells.end(),
                                      [&](const Coord& c) { return world_.is_occupied(c); });
        if (!done) continue;
        part.complete = true;
        part_steps_[part.label] = steps_ - part.started_step.value_or(0);
        part_seconds_[part.label] = now() - part.started_at.value_or(0.0);
        log(EventKind::object_complete, std::nullopt, std::nullopt, part.label);
        feedback(out, Feedback::object_complete, realizer::FeedbackKind::object_complete);
    }
}

void Session::ensure_live() const {
    if (terminated()) throw SessionTerminated("session already terminated");
}

bool Session::budget_exhausted() const {
    if (limits_.max_steps && steps_ >= *limits_.max_steps) return true;
    if (limits_.max_seconds && now() >= *limits_.max_seconds) return true;
    return false;
}

void Session::terminate_timeout(FeedbackDecision& out) {
    timed_out_ = true;
    ended_at_ = now();
    log(EventKind::timeout);
    feedback(out, Feedback::timeout, realizer::FeedbackKind::timeout);
}

FeedbackDecision Session::check_timeout() {
    FeedbackDecision out;
    if (!terminated() && budget_exhausted()) terminate_timeout(out);
    return out;
}

FeedbackDecision Session::place(const Coord& c) {
    ensure_live();
    FeedbackDecision out;
    if (budget_exhausted()) {
        terminate_timeout(out);
        return out;
    }
    ++steps_;
    if (world_.is_occupied(c)) return out;

    world_.occupied.insert(c);
    out.world_changed = true;
    log(EventKind::block_placed, c);

    if (!pending_.empty() || !scope_.count(c)) {
        ++mistakes_;
        log(EventKind::mistake, c);
        pending_.push_back(c);
        log(EventKind::removal_requested, pending_.front());
        feedback(out, Feedback::remove, realizer::FeedbackKind::wrong_block_remove);
        return out;
    }

    scope_.erase(c);
    ++placements_;
    feedback(out, Feedback::correct, realizer::FeedbackKind::correct);
    check_parts(out);
    if (scope_.empty()) advance(out);
    return out;
}

FeedbackDecision Session::remove(const Coord& c) {
    ensure_live();
    FeedbackDecision out;
    if (budget_exhausted()) {
        terminate_timeout(out);
        return out;
    }
    ++steps_;
    if (!world_.is_occupied(c) || world_.marker_at(c)) return out;

    world_.occupied.erase(c);
    out.world_changed = true;
    log(EventKind::block_removed, c);

    if (auto it = std::find(pending_.begin(), pending_.end(), c); it != pending_.end()) {
        pending_.erase(it);
        if (pending_.empty()) {
            // back to the original plan
            log(EventKind::instruction_issued, std::nullopt, cursor_, current_instruction_.text);
            out.messages.push_back(current_instruction_);
        } else {
            log(EventKind::removal_requested, pending_.front());
            feedback(out, Feedback::remove, realizer::FeedbackKind::wrong_block_remove);
        }
    } else if (target_.count(c)) {
        scope_.insert(c);
        feedback(out, Feedback::replace, realizer::FeedbackKind::replace_removed);
    }
    return out;
}

Metrics Session::metrics() const {
    Metrics m;
    m.successful = succeeded_;
    m.timed_out = timed_out_;
    m.duration_steps = steps_;
    m.duration_seconds = ended_at_.value_or(now());
    m.mistakes = mistakes_;
    m.placements = placements_;
    m.per_object_steps = part_steps_;
    m.per_object_seconds = part_seconds_;
    return m;
}

FollowerScript FollowerScript::noisy(double p, std::uint64_t seed) {
    if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("error probability must lie in [0, 1]");
    return {Policy::noisy, p, seed};
}

ScriptedRun run_scripted(Session& session, const FollowerScript& script, std::size_t max_events) {
    std::mt19937_64 rng(script.seed);
    ScriptedRun run;
    bool rolled = false;
    std::size_t events = 0;

    auto pick_from_scope = [&]() -> Coord {
        const auto& scope = session.scope();
        if (scope.empty()) throw std::logic_error("live session with empty scope");
        if (script.policy == FollowerScript::Policy::permuting) {
            std::uniform_int_distribution<std::size_t> d(0, scope.size() - 1);
            return *std::next(scope.begin(), static_cast<std::ptrdiff_t>(d(rng)));
        }
        if (session.cursor() < session.queue().size()) {
            for (const auto& c : session.expected_cells(session.cursor())) {
                if (scope.count(c)) return c;
            }
        }
        return *scope.begin();
    };

    while (!session.terminated()) {
        if (++events > max_events) throw NonTermination("scripted follower exceeded the event budget");
        if (!session.pending_removals().empty()) {
            session.remove(session.pending_removals().front());
            continue;
        }
        const Coord next = pick_from_scope();
        if (script.policy == FollowerScript::Policy::noisy && !rolled) {
            rolled = true;
            std::bernoulli_distribution err(script.error_probability);
            if (err(rng)) {
                std::vector<Coord> wrong;
                for (const auto& off : construction::face_offsets()) {
                    const Coord w = next + off;
                    if (w.y >= 1 && !session.world().is_occupied(w) && !session.scope().count(w)) wrong.push_back(w);
                }
                if (!wrong.empty()) {
                    std::uniform_int_distribution<std::size_t> d(0, wrong.size() - 1);
                    session.place(wrong[d(rng)]);
                    ++run.injected_errors;
                    continue;
                }
            }
        }
        session.place(next);
        rolled = false;
    }
    run.metrics = session.metrics();
    return run;
}

}  // namespace htnig::session
