#pragma once

// Session wire protocol and its HTTP binding.
//
// client -> server
//   {"type":"start","scenario":"bridge","strategy":"teaching"}
//   {"type":"place","x":0,"y":2,"z":0}
//   {"type":"remove","x":0,"y":2,"z":0}
// server -> client
//   {"type":"instruction","id":n,"text":"..."}
//   {"type":"feedback","kind":"correct|mistake|remove|replace|object-complete|success|timeout","text":"..."}
//   {"type":"world","blocks":[{"x":0,"y":1,"z":0,"color":"blue"}, ...]}
//
// HTTP routes
//   POST /api/session              start message   -> {"session": id, "messages": [...]}
//   POST /api/session/<id>         place/remove    -> {"messages": [...]}
//   GET  /api/session/<id>/messages?since=k        -> {"messages": [...], "next": n}

#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "htnig/session.hpp"

namespace htnig::server {

using nlohmann::json;

struct ProtocolError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct UnknownSession : std::out_of_range {
    using std::out_of_range::out_of_range;
};

json to_json(const session::Message& m);
json world_snapshot(const construction::WorldGrid& world);

struct HubOptions {
    session::Limits limits{std::nullopt, 600.0};
    /// When set, every session appends its events to <log_dir>/<id>.jsonl.
    std::optional<std::filesystem::path> log_dir;
};

/// Owns the live sessions. Event handling for one session is serialized by a
/// per-session lock; distinct sessions proceed independently.
class SessionHub {
public:
    explicit SessionHub(HubOptions options = {});

    struct Started {
        std::string id;
        std::vector<json> messages;
    };

    Started start(const json& request);
    std::vector<json> handle(const std::string& id, const json& request);
    /// Every message sent on this session from index `since` on.
    std::vector<json> poll(const std::string& id, std::size_t since, std::size_t* next = nullptr);

    std::size_t size() const;
    /// Snapshot of a session's metrics.
    session::Metrics metrics(const std::string& id);

private:
    struct Entry {
        std::mutex mutex;
        std::optional<session::Session> session;
        std::vector<json> outbox;
        std::size_t logged = 0;
    };

    std::shared_ptr<Entry> find(const std::string& id) const;
    const search::Solution& solution_for(const std::string& scenario, const std::string& strategy);
    std::vector<json> emit(Entry& entry, const session::FeedbackDecision& decision, const std::string& id);
    void flush_log(Entry& entry, const std::string& id);

    HubOptions options_;
    mutable std::mutex mutex_;
    std::map<std::string, std::shared_ptr<Entry>> sessions_;
    std::size_t next_id_ = 1;
    std::mutex plans_mutex_;
    std::map<std::pair<std::string, std::string>, search::Solution> plans_;
};

/// HTTP binding of a hub. Optionally serves a static client directory at "/".
class HttpFrontend {
public:
    explicit HttpFrontend(SessionHub& hub, std::optional<std::filesystem::path> static_dir = std::nullopt);
    ~HttpFrontend();
    HttpFrontend(const HttpFrontend&) = delete;
    HttpFrontend& operator=(const HttpFrontend&) = delete;

    /// Binds `port` (0 picks a free one) and returns the bound port. Throws
    /// std::runtime_error if the port is taken.
    int bind(const std::string& host, int port);
    /// Serves until stop() is called.
    void listen();
    void stop();

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

}  // namespace htnig::server
