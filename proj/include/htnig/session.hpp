#pragma once

// Live instruction delivery: one instruction at a time, any-order acceptance
// inside the current instruction's scope, remove-and-recover on mistakes.

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "htnig/construction.hpp"
#include "htnig/instruction.hpp"
#include "htnig/realizer.hpp"
#include "htnig/search.hpp"
#include "htnig/strategy.hpp"

namespace htnig::session {

using construction::Coord;

enum class EventKind {
    instruction_issued,
    block_placed,
    block_removed,
    mistake,
    removal_requested,
    object_complete,
    success,
    timeout,
};

std::string_view name(EventKind k);

struct SessionEvent {
    double ts = 0.0;
    EventKind kind = EventKind::instruction_issued;
    std::optional<Coord> cell;
    std::optional<std::size_t> instruction;
    std::string text;
};

/// Serialized as one JSON object {ts, kind, payload}.
std::string to_jsonl(const SessionEvent& e);

enum class MessageType { instruction, feedback };

/// Wire-level feedback kinds.
enum class Feedback { correct, mistake, remove, replace, object_complete, success, timeout };

std::string_view name(Feedback f);

struct Message {
    MessageType type = MessageType::instruction;
    std::size_t id = 0;  // instruction index, for instruction messages
    Feedback feedback = Feedback::correct;
    std::string text;

    bool operator==(const Message&) const = default;
};

struct FeedbackDecision {
    std::vector<Message> messages;
    bool world_changed = false;
};

struct Metrics {
    bool successful = false;
    bool timed_out = false;
    std::size_t duration_steps = 0;
    double duration_seconds = 0.0;
    std::size_t mistakes = 0;
    std::size_t placements = 0;
    std::map<std::string, std::size_t> per_object_steps;
    std::map<std::string, double> per_object_seconds;
};

struct Limits {
    std::optional<std::size_t> max_steps;
    std::optional<double> max_seconds;
};

/// Seconds since session start.
using Clock = std::function<double()>;

struct SessionOptions {
    Limits limits;
    /// Defaults to a steady wall clock, or to the follower-event count when
    /// `logical_time` is set (fully deterministic logs).
    Clock clock;
    bool logical_time = false;
};

struct InvalidPlan : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct SessionTerminated : std::logic_error {
    using std::logic_error::logic_error;
};

class Session {
public:
    /// Validates the solution against the scenario/strategy instruction problem,
    /// then issues the greeting and the first instruction.
    static Session start(const construction::Scenario& scenario, const strategy::Strategy& strategy,
                         const search::Solution& solution, SessionOptions options = {});

    FeedbackDecision place(const Coord& c);
    FeedbackDecision remove(const Coord& c);
    /// Applies the time/step budget; emits a timeout if it is exhausted.
    FeedbackDecision check_timeout();

    /// Messages produced by start().
    const std::vector<Message>& opening() const { return opening_; }

    const construction::Scenario& scenario() const { return scenario_; }
    const construction::WorldGrid& world() const { return world_; }
    const std::set<Coord>& scope() const { return scope_; }
    const std::vector<Coord>& pending_removals() const { return pending_; }
    std::size_t cursor() const { return cursor_; }
    const std::vector<instruction::InstructionAction>& queue() const { return queue_; }
    /// Cells the plan places under instruction `i`, in plan order.
    const std::vector<Coord>& expected_cells(std::size_t i) const { return expected_.at(i); }
    const std::set<Coord>& target() const { return target_; }
    std::size_t mistakes() const { return mistakes_; }
    const std::vector<SessionEvent>& events() const { return events_; }
    bool terminated() const { return succeeded_ || timed_out_; }
    bool succeeded() const { return succeeded_; }
    bool timed_out() const { return timed_out_; }

    Metrics metrics() const;

private:
    Session() = default;

    double now() const;
    void log(EventKind kind, std::optional<Coord> cell = {}, std::optional<std::size_t> ins = {}, std::string text = {});
    void issue_current(FeedbackDecision& out, const std::string& prefix = {});
    void advance(FeedbackDecision& out);
    void finish(FeedbackDecision& out);
    void terminate_timeout(FeedbackDecision& out);
    void check_parts(FeedbackDecision& out);
    void ensure_live() const;
    bool budget_exhausted() const;
    void feedback(FeedbackDecision& out, Feedback kind, realizer::FeedbackKind text_kind);

    construction::Scenario scenario_;
    std::set<Coord> target_;
    std::vector<instruction::InstructionAction> queue_;
    std::vector<std::vector<Coord>> expected_;
    std::vector<std::size_t> part_of_;  // instruction -> top-level part

    struct PartProgress {
        std::string label;
        std::set<Coord> cells;
        std::optional<double> started_at;
        std::optional<std::size_t> started_step;
        bool complete = false;
    };
    std::vector<PartProgress> parts_;

    std::size_t cursor_ = 0;
    std::set<Coord> scope_;
    construction::WorldGrid world_;
    std::vector<Coord> pending_;
    std::size_t mistakes_ = 0;
    std::size_t placements_ = 0;
    std::size_t steps_ = 0;
    bool succeeded_ = false;
    bool timed_out_ = false;
    std::vector<SessionEvent> events_;
    std::map<std::string, std::size_t> part_steps_;
    std::map<std::string, double> part_seconds_;
    realizer::DiscourseState discourse_;
    std::vector<Message> opening_;
    Message current_instruction_;
    std::optional<double> ended_at_;

    Limits limits_;
    Clock clock_;
    bool logical_time_ = false;
};

struct FollowerScript {
    enum class Policy { perfect, permuting, noisy };
    Policy policy = Policy::perfect;
    double error_probability = 0.0;
    std::uint64_t seed = 0;

    static FollowerScript perfect() { return {}; }
    static FollowerScript permuting(std::uint64_t seed) { return {Policy::permuting, 0.0, seed}; }
    /// Throws std::invalid_argument unless p is in [0, 1].
    static FollowerScript noisy(double p, std::uint64_t seed);
};

struct NonTermination : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ScriptedRun {
    Metrics metrics;
    std::size_t injected_errors = 0;
};

/// Drives a fresh session to termination with a simulated follower.
ScriptedRun run_scripted(Session& session, const FollowerScript& script, std::size_t max_events = 1'000'000);

}  // namespace htnig::session
