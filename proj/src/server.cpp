#include "htnig/server.hpp"

#include <algorithm>
#include <fstream>

#include <httplib.h>

#include "htnig/instruction.hpp"

namespace htnig::server {

json to_json(const session::Message& m) {
    if (m.type == session::MessageType::instruction) {
        return {{"type", "instruction"}, {"id", m.id}, {"text", m.text}};
    }
    return {{"type", "feedback"}, {"kind", std::string(session::name(m.feedback))}, {"text", m.text}};
}

json world_snapshot(const construction::WorldGrid& world) {
    json blocks = json::array();
    for (const auto& c : world.occupied) {
        blocks.push_back({{"x", c.x}, {"y", c.y}, {"z", c.z}, {"color", world.marker_at(c).value_or("none")}});
    }
    return {{"type", "world"}, {"blocks", blocks}};
}

namespace {

std::string string_field(const json& j, const char* key) {
    if (!j.contains(key) || !j[key].is_string()) throw ProtocolError(std::string("'") + key + "' must be a string");
    return j[key].get<std::string>();
}

construction::Coord coord_field(const json& j) {
    for (const char* k : {"x", "y", "z"}) {
        if (!j.contains(k) || !j[k].is_number_integer()) throw ProtocolError(std::string("'") + k + "' must be an integer");
    }
    return {j["x"].get<int>(), j["y"].get<int>(), j["z"].get<int>()};
}

template <typename Names>
bool known(const Names& names, const std::string& n) {
    return std::find(names.begin(), names.end(), n) != names.end();
}

}  // namespace

SessionHub::SessionHub(HubOptions options) : options_(std::move(options)) {}

std::size_t SessionHub::size() const {
    std::lock_guard lock(mutex_);
    return sessions_.size();
}

std::shared_ptr<SessionHub::Entry> SessionHub::find(const std::string& id) const {
    std::lock_guard lock(mutex_);
    auto it = sessions_.find(id);
    if (it == sessions_.end()) throw UnknownSession("unknown session '" + id + "'");
    return it->second;
}

const search::Solution& SessionHub::solution_for(const std::string& scenario_name, const std::string& strategy_name) {
    std::lock_guard lock(plans_mutex_);
    const auto key = std::pair{scenario_name, strategy_name};
    if (auto it = plans_.find(key); it != plans_.end()) return it->second;
    const auto scenario = construction::make_scenario(scenario_name);
    const auto strategy = strategy::default_strategy(strategy_name);
    const auto problem = instruction::build_instruction_problem(scenario, strategy);
    search::SearchConfig config;
    config.bound = instruction::instruction_bound(scenario, strategy.profile);
    return plans_.emplace(key, search::plan(problem, config)).first->second;
}

void SessionHub::flush_log(Entry& entry, const std::string& id) {
    if (!options_.log_dir || !entry.session) return;
    const auto& events = entry.session->events();
    if (entry.logged == events.size()) return;
    std::ofstream out(*options_.log_dir / (id + ".jsonl"), std::ios::app);
    for (; entry.logged < events.size(); ++entry.logged) out << session::to_jsonl(events[entry.logged]) << "\n";
}

std::vector<json> SessionHub::emit(Entry& entry, const session::FeedbackDecision& decision, const std::string& id) {
    std::vector<json> out;
    for (const auto& m : decision.messages) out.push_back(to_json(m));
    if (decision.world_changed) out.push_back(world_snapshot(entry.session->world()));
    entry.outbox.insert(entry.outbox.end(), out.begin(), out.end());
    flush_log(entry, id);
    return out;
}

SessionHub::Started SessionHub::start(const json& request) {
    if (!request.is_object() || string_field(request, "type") != "start") {
        throw ProtocolError("expected a start message");
    }
    const auto scenario_name = string_field(request, "scenario");
    const auto strategy_name = string_field(request, "strategy");
    if (!known(construction::scenario_names(), scenario_name)) throw ProtocolError("unknown scenario '" + scenario_name + "'");
    if (!known(strategy::strategy_names(), strategy_name)) throw ProtocolError("unknown strategy '" + strategy_name + "'");

    const auto& solution = solution_for(scenario_name, strategy_name);
    auto entry = std::make_shared<Entry>();
    session::SessionOptions opts;
    opts.limits = options_.limits;
    entry->session.emplace(session::Session::start(construction::make_scenario(scenario_name),
                                                   strategy::default_strategy(strategy_name), solution, opts));
    std::string id;
    {
        std::lock_guard lock(mutex_);
        id = "s" + std::to_string(next_id_++);
        sessions_[id] = entry;
    }
    std::lock_guard lock(entry->mutex);
    session::FeedbackDecision opening{entry->session->opening(), true};
    return {id, emit(*entry, opening, id)};
}

std::vector<json> SessionHub::handle(const std::string& id, const json& request) {
    auto entry = find(id);
    if (!request.is_object()) throw ProtocolError("message must be a JSON object");
    const auto type = string_field(request, "type");
    if (type != "place" && type != "remove") throw ProtocolError("expected place or remove, got '" + type + "'");
    const auto cell = coord_field(request);

    std::lock_guard lock(entry->mutex);
    const auto decision = type == "place" ? entry->session->place(cell) : entry->session->remove(cell);
    return emit(*entry, decision, id);
}

std::vector<json> SessionHub::poll(const std::string& id, std::size_t since, std::size_t* next) {
    auto entry = find(id);
    std::lock_guard lock(entry->mutex);
    emit(*entry, entry->session->check_timeout(), id);
    std::vector<json> out;
    for (std::size_t i = since; i < entry->outbox.size(); ++i) out.push_back(entry->outbox[i]);
    if (next) *next = entry->outbox.size();
    return out;
}

session::Metrics SessionHub::metrics(const std::string& id) {
    auto entry = find(id);
    std::lock_guard lock(entry->mutex);
    return entry->session->metrics();
}

struct HttpFrontend::Impl {
    httplib::Server server;
};

namespace {

void reply(httplib::Response& res, int status, const json& body) {
    res.status = status;
    res.set_content(body.dump(), "application/json");
}

template <typename F>
void guarded(httplib::Response& res, F&& f) {
    try {
        f();
    } catch (const json::exception& e) {
        reply(res, 400, {{"error", std::string("malformed JSON: ") + e.what()}});
    } catch (const ProtocolError& e) {
        reply(res, 400, {{"error", e.what()}});
    } catch (const UnknownSession& e) {
        reply(res, 404, {{"error", e.what()}});
    } catch (const session::SessionTerminated& e) {
        reply(res, 409, {{"error", e.what()}});
    } catch (const std::exception& e) {
        reply(res, 500, {{"error", e.what()}});
    }
}

}  // namespace

HttpFrontend::HttpFrontend(SessionHub& hub, std::optional<std::filesystem::path> static_dir)
    : impl_(std::make_unique<Impl>()) {
    auto& srv = impl_->server;
    auto* hubp = &hub;
    // No SO_REUSEPORT, so a port held by another server is reported as taken.
    srv.set_socket_options([](socket_t sock) {
        int yes = 1;
        setsockopt(sock, SOL_SOCKET, SO_REUSEADDR, reinterpret_cast<const void*>(&yes), sizeof(yes));
    });
    srv.Post("/api/session", [hubp](const httplib::Request& req, httplib::Response& res) {
        guarded(res, [&] {
            auto started = hubp->start(json::parse(req.body));
            reply(res, 200, {{"session", started.id}, {"messages", started.messages}});
        });
    });
    srv.Post(R"(/api/session/([A-Za-z0-9]+))", [hubp](const httplib::Request& req, httplib::Response& res) {
        guarded(res, [&] { reply(res, 200, {{"messages", hubp->handle(req.matches[1], json::parse(req.body))}}); });
    });
    srv.Get(R"(/api/session/([A-Za-z0-9]+)/messages)", [hubp](const httplib::Request& req, httplib::Response& res) {
        guarded(res, [&] {
            std::size_t since = 0;
            if (req.has_param("since")) since = std::stoul(req.get_param_value("since"));
            std::size_t next = 0;
            auto msgs = hubp->poll(req.matches[1], since, &next);
            reply(res, 200, {{"messages", msgs}, {"next", next}});
        });
    });
    if (static_dir) srv.set_mount_point("/", static_dir->string());
}

HttpFrontend::~HttpFrontend() = default;

int HttpFrontend::bind(const std::string& host, int port) {
    int bound = port;
    if (port == 0) {
        bound = impl_->server.bind_to_any_port(host);
    } else if (!impl_->server.bind_to_port(host, port)) {
        bound = -1;
    }
    if (bound < 0) throw std::runtime_error("cannot bind " + host + ":" + std::to_string(port) + " (port in use?)");
    return bound;
}

void HttpFrontend::listen() { impl_->server.listen_after_bind(); }

void HttpFrontend::stop() { impl_->server.stop(); }

}  // namespace htnig::server
