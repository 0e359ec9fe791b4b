#pragma once

#include <deque>
#include <optional>
#include <string>
#include <vector>

#include "firesim/config.hpp"
#include "firesim/envmodel.hpp"
#include "firesim/firmware.hpp"
#include "firesim/gateway.hpp"
#include "firesim/gsm.hpp"
#include "firesim/scenario.hpp"
#include "firesim/serialnet.hpp"
#include "firesim/trace.hpp"

namespace firesim {

struct ExpectationFailure {
    LogicalMs t;
    std::string message;
};

/// The whole simulated installation on one logical timeline.
///
/// Each 1 ms tick runs, in this order:
///   1. scenario events due now, then queued commands (API submissions)
///   2. link deliveries: COM1 bytes to the firmware, COM15 bytes to the modem
///   3. firmware main loop, on every 10th ms
///   4. gateway pollers that are due, then its modem channel
///   5. network and modem timers (SMS delivery, rings, call ends)
class System {
public:
    explicit System(SystemConfig config = default_config());
    System(const System&) = delete;
    System& operator=(const System&) = delete;

    /// Adds events to the pending schedule. Events earlier than now fire on the next tick.
    void schedule(const std::vector<ScenarioEvent>& events);
    /// Queues an action for the next tick (t = now).
    void submit(Action action);

    /// Advances exactly n ticks; returns the new now.
    LogicalMs step(LogicalMs n);
    LogicalMs now() const { return now_; }

    const Trace& trace() const { return trace_; }
    Trace& trace() { return trace_; }

    /// Every action applied so far, stamped with the tick it was applied on.
    /// Replaying it as a scenario reproduces the run.
    const std::vector<ScenarioEvent>& applied_log() const { return applied_; }

    const std::optional<ExpectationFailure>& first_failure() const { return first_failure_; }
    std::size_t expectations_checked() const { return expectations_checked_; }
    std::size_t pending_expectations() const;

    /// Snapshot served as GET /api/state.
    json state_json() const;

    const env::EnvState& env() const { return env_; }
    const fw::Firmware& firmware() const { return firmware_; }
    const gw::Gateway& gateway() const { return gateway_; }
    const gsm::Modem& modem() const { return modem_; }
    const gsm::Network& network() const { return network_; }
    const serial::PortRegistry& ports() const { return ports_; }
    const SystemConfig& config() const { return config_; }

private:
    void tick();
    void apply(const ScenarioEvent& e);
    void check(const Expect& x);

    SystemConfig config_;
    LogicalMs now_ = 0;
    Trace trace_;
    env::EnvState env_;
    fw::Firmware firmware_;
    serial::PortRegistry ports_;
    gsm::Network network_;
    gsm::Modem modem_;
    gw::Gateway gateway_;

    std::vector<ScenarioEvent> scheduled_;  // sorted by t
    std::size_t next_scheduled_ = 0;
    std::deque<Action> submitted_;
    std::vector<ScenarioEvent> applied_;
    std::optional<ExpectationFailure> first_failure_;
    std::size_t expectations_checked_ = 0;
};

struct RunResult {
    std::string trace_jsonl;
    std::optional<ExpectationFailure> failure;
    std::size_t expectations_checked = 0;
    bool ok() const { return !failure; }
};

/// Fresh system, scenario scheduled, ticks 0..duration-1. Expectations still
/// pending at the end count as failures.
RunResult run(const Scenario& scenario, LogicalMs duration_ms, const SystemConfig& config = default_config());

}  // namespace firesim
