#pragma once

#include <cstdint>
#include <deque>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "firesim/serialnet.hpp"
#include "firesim/trace.hpp"
#include "firesim/types.hpp"

namespace firesim::gw {

inline constexpr std::size_t kMaxPasswordLength = 10;

struct GatewayConfig {
    std::vector<std::string> destinations;
    std::string server_password;
    LogicalMs mcu_poll_ms = 50;
    LogicalMs sms_poll_ms = 2000;
    LogicalMs at_gap_ms = 100;
    /// A command with no final result code after this long counts as ERROR.
    LogicalMs at_timeout_ms = 5000;
    /// Longest wait for NO CARRIER after a successful ATD.
    LogicalMs call_timeout_ms = 60'000;
    std::map<SensorId, int> sensor_outbox_slot{
        {SensorId::Temp1, 1}, {SensorId::Temp2, 2}, {SensorId::Smoke1, 3}, {SensorId::Smoke2, 4}};

    /// Throws std::invalid_argument on the first violated constraint.
    void validate() const;
};

struct RemoteCommand {
    std::string password;
    char cmd;

    friend bool operator==(const RemoteCommand&, const RemoteCommand&) = default;
};

/// 'A'..'P' and 'R'; note there is no 'Q'.
bool is_remote_command_char(char c);

/// "<password> <C>": exactly two single-space separated tokens, a 1-10
/// character password and one command character.
std::optional<RemoteCommand> parse_remote_command(std::string_view text);

/// A complete modem reply: everything up to and including the final result
/// code line (OK, ERROR or NO CARRIER).
struct AtResponse {
    enum class Final : std::uint8_t { Ok, Error, NoCarrier };
    Final final = Final::Error;
    std::vector<std::string> lines;  ///< non-empty lines before the final code
    std::string raw;                 ///< exact bytes consumed
};

/// Removes and returns the first complete response block from `buffer`.
/// A "+CMGR:" header makes the following line message text, even if it
/// reads "OK".
std::optional<AtResponse> take_response(std::string& buffer);

struct CmgrRecord {
    std::string status;
    std::string from;
    std::string timestamp;
    std::string text;
};

/// Extracts the message from a +CMGR reply; nullopt for an empty slot.
std::optional<CmgrRecord> parse_cmgr(const AtResponse& response);

enum class GatewayStatus : std::uint8_t { Starting, Ready, Failed };

std::string_view to_string(GatewayStatus s);

class Gateway;

/// A unit of modem work. The channel runs one job at a time, one command at
/// a time, so response blocks can never interleave.
class ModemJob {
public:
    virtual ~ModemJob() = default;
    virtual std::string_view name() const = 0;
    /// Next command line (without CR), or nullopt when the job is finished.
    virtual std::optional<std::string> next_command(Gateway& gw) = 0;
    virtual void on_response(Gateway& gw, const std::string& command, const AtResponse& response,
                             LogicalMs now) = 0;
};

/// The server program: MCU poller, SMS poller, alert latching and fan-out,
/// remote command execution. All modem traffic goes through one serialized
/// channel owned by this class.
class Gateway {
public:
    Gateway(GatewayConfig config, serial::PortRegistry& ports, Trace& trace);

    /// Runs pollers that are due at `now`, then services the modem channel.
    void tick(LogicalMs now);

    /// Reads COM1 and latches/dispatches newly alerting sensors.
    void poll_mcu(LogicalMs now);
    /// Queues a CMGR sweep over every SIM slot unless one is already pending.
    void poll_sms(LogicalMs now);

    /// Caller has verified the password. 'A'..'P' go to the MCU, 'R' clears
    /// the latch set.
    void execute_command(const RemoteCommand& rc, LogicalMs now);

    /// Handles the text of a received SMS: parse, authenticate, execute.
    void handle_remote_text(const std::string& from, const std::string& text, LogicalMs now);

    GatewayStatus status() const { return status_; }
    const std::set<SensorId>& latched() const { return latched_; }
    const GatewayConfig& config() const { return config_; }
    bool channel_idle() const;

    // Used by jobs.
    void mark_ready(LogicalMs now);
    void mark_failed(LogicalMs now, std::string reason);
    Trace& trace() { return trace_; }

private:
    enum class ChannelState : std::uint8_t { Idle, AwaitingResponse, AwaitingCallEnd };

    void enqueue(std::unique_ptr<ModemJob> job);
    void service_channel(LogicalMs now);
    void send(const std::string& command, LogicalMs now);
    void complete_exchange(const AtResponse& response, LogicalMs now);

    GatewayConfig config_;
    serial::SerialPort& mcu_;
    serial::SerialPort& modem_;
    Trace& trace_;

    GatewayStatus status_ = GatewayStatus::Starting;
    std::set<SensorId> latched_;
    LogicalMs next_mcu_poll_ = 0;
    LogicalMs next_sms_poll_ = 0;
    bool started_ = false;

    std::deque<std::unique_ptr<ModemJob>> jobs_;
    ChannelState channel_ = ChannelState::Idle;
    std::string in_flight_;
    LogicalMs in_flight_since_ = 0;
    LogicalMs next_tx_at_ = 0;
    std::string rx_buffer_;
};

}  // namespace firesim::gw
