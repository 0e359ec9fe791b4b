#pragma once

#include <atomic>
#include <condition_variable>
#include <memory>
#include <mutex>
#include <string>
#include <thread>

#include "firesim/system.hpp"

namespace httplib {
class Server;
}

namespace firesim {

struct ApiOptions {
    /// Logical ticks per wall-clock second; 0 leaves the clock to POST /api/step.
    double pace = 0.0;
    /// Directory served at "/" (operator console assets); empty disables it.
    std::string static_dir;
};

/// HTTP/JSON control surface over one System.
///
/// Mutations are queued into the system and applied at the start of the next
/// tick; reads take a snapshot under the lock. The pacer, when enabled, is
/// the only other writer and advances the clock between requests.
class ApiServer {
public:
    explicit ApiServer(SystemConfig config, ApiOptions options = {});
    ~ApiServer();
    ApiServer(const ApiServer&) = delete;
    ApiServer& operator=(const ApiServer&) = delete;

    /// Binds (port 0 picks a free one), starts serving on a background
    /// thread, and returns the bound port. Throws std::runtime_error on failure.
    int start(const std::string& host = "127.0.0.1", int port = 0);
    /// Blocks serving on the calling thread.
    void serve_forever(const std::string& host, int port);
    void stop();

    /// Runs `f(System&)` under the state lock.
    template <typename F>
    auto with_system(F&& f) {
        std::lock_guard lock(mutex_);
        return f(system_);
    }

private:
    void install_routes();
    void start_pacer();
    void step_locked(LogicalMs ticks);

    std::mutex mutex_;
    std::condition_variable events_cv_;
    System system_;
    ApiOptions options_;
    std::unique_ptr<httplib::Server> http_;
    std::thread server_thread_;
    std::thread pacer_thread_;
    std::atomic<bool> stopping_{false};
};

}  // namespace firesim
