#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <queue>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "firesim/trace.hpp"
#include "firesim/types.hpp"

namespace firesim::gsm {

inline constexpr std::size_t kSimSlots = 10;
inline constexpr std::size_t kOutboxSlots = 8;
inline constexpr std::size_t kMaxSmsText = 160;
inline constexpr LogicalMs kNetworkDelayMs = 500;
inline constexpr LogicalMs kRingDurationMs = 10'000;

// Result codes, GSM 07.05 text-mode framing.
inline constexpr std::string_view kOk = "\r\nOK\r\n";
inline constexpr std::string_view kError = "\r\nERROR\r\n";
inline constexpr std::string_view kNoCarrier = "\r\nNO CARRIER\r\n";

/// 8-13 digits, optionally prefixed with '+'.
bool is_valid_number(std::string_view number);

/// Logical ms rendered as "yy/MM/dd,hh:mm:ss+00" counted from 2010-01-01 00:00:00.
std::string format_timestamp(LogicalMs t);

enum class SmsStatus : std::uint8_t { Unread, Read };

struct SmsMessage {
    std::string from;
    std::string to;
    std::string text;
    SmsStatus status = SmsStatus::Unread;
    LogicalMs received_at = 0;
};

/// Throws std::invalid_argument if the message violates the text or number rules.
void validate(const SmsMessage& msg);

struct RingRecord {
    LogicalMs t;
    std::string caller;
};

struct Handset {
    std::string number;
    std::vector<SmsMessage> inbox;
    std::vector<RingRecord> ring_log;
};

struct CallIdle {};
struct CallDialing {
    std::string number;
    LogicalMs ends_at;
};
using CallState = std::variant<CallIdle, CallDialing>;

struct ModemState {
    bool text_mode = false;
    std::optional<std::string> preferred_store;
    std::array<std::optional<SmsMessage>, kSimSlots> sim_inbox;
    std::array<std::optional<std::string>, kOutboxSlots> phone_outbox;
    CallState call_state = CallIdle{};
    int next_message_ref = 1;
};

struct ModemConfig {
    std::string server_number = "01700000000";
    /// Outbox slot (1-based) -> stored text.
    std::map<int, std::string> outbox;
};

class Modem;

/// Virtual mobile network: destination handsets plus the timers for SMS
/// delivery and ringing. Every hop takes kNetworkDelayMs.
class Network {
public:
    explicit Network(Trace& trace) : trace_(trace) {}

    Handset& register_handset(const std::string& number);
    const Handset* handset(std::string_view number) const;
    const std::map<std::string, Handset, std::less<>>& handsets() const { return handsets_; }

    /// Outbound from the server modem. Returns false if the number is unknown
    /// (the submission still succeeds at the modem; delivery is dropped).
    bool submit_sms(SmsMessage msg, LogicalMs now);
    bool place_call(const std::string& caller, const std::string& callee, LogicalMs now);

    /// A remote handset texting the server modem.
    void send_to_server(SmsMessage msg, LogicalMs now);

    /// Fires every timer due at or before now, in (time, submission) order.
    void advance(LogicalMs now, Modem& modem);

    std::optional<LogicalMs> next_due() const;

private:
    enum class Kind : std::uint8_t { DeliverSms, Ring, Inbound };
    struct Timer {
        LogicalMs due;
        std::uint64_t order;
        Kind kind;
        SmsMessage msg;  // for Ring: from = caller, to = callee
    };
    struct Later {
        bool operator()(const Timer& a, const Timer& b) const {
            return a.due != b.due ? a.due > b.due : a.order > b.order;
        }
    };

    void schedule(LogicalMs due, Kind kind, SmsMessage msg);

    Trace& trace_;
    std::map<std::string, Handset, std::less<>> handsets_;
    std::priority_queue<Timer, std::vector<Timer>, Later> timers_;
    std::uint64_t next_order_ = 0;
};

/// The server mobile: line-buffered AT command interpreter over a byte
/// stream, SIM inbox, phone outbox and a single voice-call slot.
class Modem {
public:
    Modem(ModemConfig config, Network& network, Trace& trace);

    /// Consumes bytes from the host; returns the response bytes for every
    /// complete CR-terminated line, in order. Partial lines are buffered.
    std::string feed(std::string_view bytes, LogicalMs now);

    /// Call-state timers. Returns unsolicited result codes ("NO CARRIER")
    /// for calls that ended at or before now.
    std::string advance(LogicalMs now);

    /// Stores an inbound message in the lowest free SIM slot (1-based).
    /// When the SIM is full the message is dropped and SIM_FULL is traced.
    std::optional<int> network_deliver_inbound(SmsMessage msg, LogicalMs now);

    const ModemState& state() const { return state_; }
    const std::string& server_number() const { return config_.server_number; }

    // Individual commands. Each returns a complete response block.
    std::string at_cmgf(std::string_view arg);
    std::string at_cpms(std::string_view store);
    std::string at_cmgr(int slot);
    std::string at_cmss(int slot, std::string_view number, LogicalMs now);
    std::string at_cmgd(int slot);
    std::string at_dial(std::string_view number, LogicalMs now);

private:
    std::string execute(std::string_view line, LogicalMs now);

    ModemConfig config_;
    Network& network_;
    Trace& trace_;
    ModemState state_;
    std::string line_buffer_;
};

}  // namespace firesim::gsm
