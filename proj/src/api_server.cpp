#include "firesim/api_server.hpp"

#include <chrono>
#include <stdexcept>

#include <httplib.h>

namespace firesim {

namespace {

constexpr LogicalMs kMaxStepTicks = 100'000'000;

void reply_json(httplib::Response& res, const json& body, int status = 200) {
    res.status = status;
    res.set_content(body.dump(), "application/json");
}

void reply_error(httplib::Response& res, int status, const std::string& message) {
    reply_json(res, json{{"error", message}}, status);
}

json parse_body(const httplib::Request& req) {
    json body = json::parse(req.body.empty() ? std::string("{}") : req.body);
    if (!body.is_object()) throw std::invalid_argument("request body must be a JSON object");
    return body;
}

/// POST /api/env {sensor: "Temp1".."Smoke2", value}
Action env_action(const json& body) {
    const auto sensor = sensor_from_string(body.at("sensor").get<std::string>());
    if (!sensor) throw std::invalid_argument("unknown sensor");
    const double value = body.at("value").get<double>();
    const int which = (*sensor == SensorId::Temp1 || *sensor == SensorId::Smoke1) ? 1 : 2;
    env::EnvState probe;
    if (is_temperature(*sensor)) {
        probe.set_temp(which, value);
        return SetTemp{which, value};
    }
    probe.set_smoke(which, value);
    return SetSmoke{which, value};
}

/// POST /api/button {kind: "pw_mode"|"commit"|"threshold", latch, select?, range?}
Action button_action(json body) {
    const std::string kind = body.at("kind").get<std::string>();
    body.erase("kind");
    if (kind == "pw_mode") body["op"] = "press_pw_mode";
    else if (kind == "commit") body["op"] = "commit_password";
    else if (kind == "threshold") body["op"] = "set_threshold_local";
    else throw std::invalid_argument("unknown button kind '" + kind + "'");
    return event_from_json(body).action;
}

}  // namespace

ApiServer::ApiServer(SystemConfig config, ApiOptions options)
    : system_(std::move(config)), options_(std::move(options)), http_(std::make_unique<httplib::Server>()) {
    system_.trace().set_listener([this](const TraceEvent&) { events_cv_.notify_all(); });
    install_routes();
}

ApiServer::~ApiServer() { stop(); }

void ApiServer::step_locked(LogicalMs ticks) { system_.step(ticks); }

void ApiServer::install_routes() {
    auto& srv = *http_;

    auto guarded = [](auto handler) {
        return [handler](const httplib::Request& req, httplib::Response& res) {
            try {
                handler(req, res);
            } catch (const json::exception& e) {
                reply_error(res, 400, e.what());
            } catch (const std::invalid_argument& e) {
                reply_error(res, 400, e.what());
            } catch (const std::domain_error& e) {
                reply_error(res, 400, e.what());
            } catch (const ScenarioError& e) {
                reply_error(res, 400, e.what());
            } catch (const std::exception& e) {
                reply_error(res, 500, e.what());
            }
        };
    };

    auto queue = [this](Action a, httplib::Response& res) {
        std::lock_guard lock(mutex_);
        const std::string op(op_name(a));
        system_.submit(std::move(a));
        reply_json(res, json{{"queued", op}, {"now", system_.now()}}, 202);
    };

    srv.Post("/api/env", guarded([queue](const httplib::Request& req, httplib::Response& res) {
                 queue(env_action(parse_body(req)), res);
             }));

    srv.Post("/api/button", guarded([queue](const httplib::Request& req, httplib::Response& res) {
                 queue(button_action(parse_body(req)), res);
             }));

    srv.Post("/api/sms", guarded([this, queue](const httplib::Request& req, httplib::Response& res) {
                 const json body = parse_body(req);
                 gsm::SmsMessage msg;
                 msg.from = body.at("from").get<std::string>();
                 msg.text = body.at("text").get<std::string>();
                 msg.to = with_system([](System& s) { return s.modem().server_number(); });
                 gsm::validate(msg);
                 queue(SendSms{msg.from, msg.text}, res);
             }));

    srv.Post("/api/step", guarded([this](const httplib::Request& req, httplib::Response& res) {
                 const json body = parse_body(req);
                 const LogicalMs ticks = body.value("ticks", LogicalMs{1});
                 if (ticks < 0 || ticks > kMaxStepTicks) throw std::invalid_argument("ticks out of range");
                 std::lock_guard lock(mutex_);
                 step_locked(ticks);
                 reply_json(res, json{{"now", system_.now()}});
             }));

    srv.Get("/api/state", guarded([this](const httplib::Request&, httplib::Response& res) {
                std::lock_guard lock(mutex_);
                reply_json(res, system_.state_json());
            }));

    srv.Get("/api/events", guarded([this](const httplib::Request& req, httplib::Response& res) {
                const std::uint64_t since =
                    req.has_param("since") ? std::stoull(req.get_param_value("since")) : 0;
                std::lock_guard lock(mutex_);
                json events = json::array();
                for (const auto& e : system_.trace().since(since)) events.push_back(e.to_json());
                reply_json(res, json{{"events", events}, {"last_seq", system_.trace().last_seq()}});
            }));

    srv.Get("/api/scenario", guarded([this](const httplib::Request&, httplib::Response& res) {
                std::lock_guard lock(mutex_);
                Scenario s{"api_log", system_.applied_log()};
                json body = to_json(s);
                body["now"] = system_.now();
                reply_json(res, body);
            }));

    srv.Get("/api/config", guarded([this](const httplib::Request&, httplib::Response& res) {
                std::lock_guard lock(mutex_);
                reply_json(res, to_json(system_.config()));
            }));

    srv.Get("/api/stream", [this](const httplib::Request& req, httplib::Response& res) {
        std::uint64_t start = 0;
        if (req.has_param("since")) start = std::stoull(req.get_param_value("since"));
        auto cursor = std::make_shared<std::uint64_t>(start);
        res.set_header("Cache-Control", "no-cache");
        res.set_chunked_content_provider(
            "text/event-stream", [this, cursor](std::size_t, httplib::DataSink& sink) {
                std::string chunk;
                {
                    std::unique_lock lock(mutex_);
                    events_cv_.wait_for(lock, std::chrono::milliseconds(200), [&] {
                        return stopping_.load() || system_.trace().last_seq() > *cursor;
                    });
                    if (stopping_) return false;
                    for (const auto& e : system_.trace().since(*cursor)) {
                        chunk += "id: " + std::to_string(e.seq) + "\nevent: trace\ndata: " + e.canonical() + "\n\n";
                        *cursor = e.seq;
                    }
                }
                if (chunk.empty()) chunk = ": keep-alive\n\n";
                return sink.write(chunk.data(), chunk.size());
            });
    });

    if (!options_.static_dir.empty()) srv.set_mount_point("/", options_.static_dir);
}

void ApiServer::start_pacer() {
    if (options_.pace <= 0.0) return;
    pacer_thread_ = std::thread([this] {
        using clock = std::chrono::steady_clock;
        const auto t0 = clock::now();
        LogicalMs done = 0;
        while (!stopping_) {
            std::this_thread::sleep_for(std::chrono::milliseconds(10));
            const double elapsed = std::chrono::duration<double>(clock::now() - t0).count();
            const auto due = static_cast<LogicalMs>(elapsed * options_.pace);
            if (due > done) {
                std::lock_guard lock(mutex_);
                step_locked(due - done);
                done = due;
            }
        }
    });
}

int ApiServer::start(const std::string& host, int port) {
    const int bound = port == 0 ? http_->bind_to_any_port(host) : (http_->bind_to_port(host, port) ? port : -1);
    if (bound < 0) throw std::runtime_error("cannot bind " + host + ":" + std::to_string(port));
    server_thread_ = std::thread([this] { http_->listen_after_bind(); });
    http_->wait_until_ready();
    start_pacer();
    return bound;
}

void ApiServer::serve_forever(const std::string& host, int port) {
    if (!http_->bind_to_port(host, port)) {
        throw std::runtime_error("cannot bind " + host + ":" + std::to_string(port));
    }
    start_pacer();
    http_->listen_after_bind();
}

void ApiServer::stop() {
    if (stopping_.exchange(true)) return;
    events_cv_.notify_all();
    http_->stop();
    if (server_thread_.joinable()) server_thread_.join();
    if (pacer_thread_.joinable()) pacer_thread_.join();
}

}  // namespace firesim
