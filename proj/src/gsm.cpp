#include "firesim/gsm.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <chrono>
#include <cstdio>
#include <stdexcept>

namespace firesim::gsm {

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

std::string_view unquote(std::string_view s) {
    s = trim(s);
    if (s.size() >= 2 && s.front() == '"' && s.back() == '"') {
        s = trim(s.substr(1, s.size() - 2));
    }
    return s;
}

std::optional<int> parse_int(std::string_view s) {
    s = trim(s);
    int v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size() || s.empty()) return std::nullopt;
    return v;
}

/// Upper-cases everything outside double quotes so command verbs match
/// regardless of case while quoted arguments are kept verbatim.
std::string normalize(std::string_view line) {
    std::string out;
    bool quoted = false;
    for (char c : line) {
        if (c == '"') quoted = !quoted;
        out.push_back(quoted ? c : static_cast<char>(std::toupper(static_cast<unsigned char>(c))));
    }
    return out;
}

bool consume(std::string_view& s, std::string_view prefix) {
    if (s.substr(0, prefix.size()) != prefix) return false;
    s.remove_prefix(prefix.size());
    return true;
}

std::string status_text(SmsStatus s) { return s == SmsStatus::Unread ? "REC UNREAD" : "REC READ"; }

}  // namespace

bool is_valid_number(std::string_view number) {
    if (!number.empty() && number.front() == '+') number.remove_prefix(1);
    if (number.size() < 8 || number.size() > 13) return false;
    return std::all_of(number.begin(), number.end(),
                       [](char c) { return std::isdigit(static_cast<unsigned char>(c)); });
}

std::string format_timestamp(LogicalMs t) {
    using namespace std::chrono;
    const sys_time<milliseconds> epoch = sys_days{year{2010} / January / 1};
    const auto at = epoch + milliseconds{t};
    const auto day = floor<days>(at);
    const year_month_day ymd{day};
    const hh_mm_ss hms{floor<seconds>(at - day)};
    char buf[32];
    std::snprintf(buf, sizeof buf, "%02d/%02u/%02u,%02d:%02d:%02d+00",
                  static_cast<int>(ymd.year()) % 100, static_cast<unsigned>(ymd.month()),
                  static_cast<unsigned>(ymd.day()), static_cast<int>(hms.hours().count()),
                  static_cast<int>(hms.minutes().count()), static_cast<int>(hms.seconds().count()));
    return buf;
}

void validate(const SmsMessage& msg) {
    if (msg.text.size() > kMaxSmsText) {
        throw std::invalid_argument("SMS text exceeds 160 characters");
    }
    if (msg.text.find_first_of("\r\n") != std::string::npos) {
        throw std::invalid_argument("SMS text must not contain CR or LF");
    }
    if (!is_valid_number(msg.from)) throw std::invalid_argument("invalid originator number: " + msg.from);
    if (!is_valid_number(msg.to)) throw std::invalid_argument("invalid destination number: " + msg.to);
}

// --- Network ---------------------------------------------------------------

Handset& Network::register_handset(const std::string& number) {
    if (!is_valid_number(number)) throw std::invalid_argument("invalid handset number: " + number);
    auto [it, inserted] = handsets_.try_emplace(number);
    if (inserted) it->second.number = number;
    return it->second;
}

const Handset* Network::handset(std::string_view number) const {
    auto it = handsets_.find(number);
    return it == handsets_.end() ? nullptr : &it->second;
}

void Network::schedule(LogicalMs due, Kind kind, SmsMessage msg) {
    timers_.push(Timer{due, next_order_++, kind, std::move(msg)});
}

bool Network::submit_sms(SmsMessage msg, LogicalMs now) {
    const bool known = handsets_.find(msg.to) != handsets_.end();
    schedule(now + kNetworkDelayMs, Kind::DeliverSms, std::move(msg));
    return known;
}

bool Network::place_call(const std::string& caller, const std::string& callee, LogicalMs now) {
    const bool known = handsets_.find(callee) != handsets_.end();
    SmsMessage call;
    call.from = caller;
    call.to = callee;
    schedule(now + kNetworkDelayMs, Kind::Ring, std::move(call));
    return known;
}

void Network::send_to_server(SmsMessage msg, LogicalMs now) {
    schedule(now + kNetworkDelayMs, Kind::Inbound, std::move(msg));
}

std::optional<LogicalMs> Network::next_due() const {
    if (timers_.empty()) return std::nullopt;
    return timers_.top().due;
}

void Network::advance(LogicalMs now, Modem& modem) {
    while (!timers_.empty() && timers_.top().due <= now) {
        Timer timer = timers_.top();
        timers_.pop();
        auto it = handsets_.find(timer.msg.to);
        switch (timer.kind) {
            case Kind::DeliverSms:
                if (it == handsets_.end()) {
                    trace_.emit(timer.due, "SMS_DROPPED", {{"to", timer.msg.to}, {"text", timer.msg.text}});
                } else {
                    timer.msg.received_at = timer.due;
                    trace_.emit(timer.due, "SMS_DELIVERED",
                                {{"from", timer.msg.from}, {"to", timer.msg.to}, {"text", timer.msg.text}});
                    it->second.inbox.push_back(std::move(timer.msg));
                }
                break;
            case Kind::Ring:
                if (it == handsets_.end()) {
                    trace_.emit(timer.due, "CALL_FAILED", {{"to", timer.msg.to}});
                } else {
                    trace_.emit(timer.due, "RING", {{"from", timer.msg.from}, {"to", timer.msg.to}});
                    it->second.ring_log.push_back({timer.due, timer.msg.from});
                }
                break;
            case Kind::Inbound:
                modem.network_deliver_inbound(std::move(timer.msg), timer.due);
                break;
        }
    }
}

// --- Modem -----------------------------------------------------------------

Modem::Modem(ModemConfig config, Network& network, Trace& trace)
    : config_(std::move(config)), network_(network), trace_(trace) {
    if (!is_valid_number(config_.server_number)) {
        throw std::invalid_argument("invalid server number: " + config_.server_number);
    }
    for (const auto& [slot, text] : config_.outbox) {
        if (slot < 1 || slot > static_cast<int>(kOutboxSlots)) {
            throw std::invalid_argument("outbox slot out of range: " + std::to_string(slot));
        }
        if (text.size() > kMaxSmsText) throw std::invalid_argument("outbox text exceeds 160 characters");
        state_.phone_outbox[static_cast<std::size_t>(slot - 1)] = text;
    }
}

std::string Modem::feed(std::string_view bytes, LogicalMs now) {
    std::string out;
    for (char c : bytes) {
        if (c == '\n') continue;
        if (c != '\r') {
            line_buffer_.push_back(c);
            continue;
        }
        std::string line = std::move(line_buffer_);
        line_buffer_.clear();
        if (trim(line).empty()) continue;
        out += execute(line, now);
    }
    return out;
}

std::string Modem::execute(std::string_view raw, LogicalMs now) {
    const std::string line = normalize(trim(raw));
    std::string_view s = line;
    if (!consume(s, "AT")) return std::string(kError);
    if (s.empty()) return std::string(kOk);

    if (consume(s, "+CMGF=")) return at_cmgf(s);
    if (consume(s, "+CPMS=")) return at_cpms(s.substr(0, s.find(',')));
    if (consume(s, "+CMGR=")) {
        auto slot = parse_int(s);
        return slot ? at_cmgr(*slot) : std::string(kError);
    }
    if (consume(s, "+CMGD=")) {
        auto slot = parse_int(s);
        return slot ? at_cmgd(*slot) : std::string(kError);
    }
    if (consume(s, "+CMSS=")) {
        const auto comma = s.find(',');
        if (comma == std::string_view::npos) return std::string(kError);
        auto slot = parse_int(s.substr(0, comma));
        if (!slot) return std::string(kError);
        return at_cmss(*slot, unquote(s.substr(comma + 1)), now);
    }
    if (consume(s, "D")) {
        s = trim(s);
        // Voice calls only: the dial string must end with ';'.
        if (s.empty() || s.back() != ';') return std::string(kError);
        return at_dial(trim(s.substr(0, s.size() - 1)), now);
    }
    return std::string(kError);
}

std::string Modem::at_cmgf(std::string_view arg) {
    // PDU mode is not supported.
    if (trim(arg) != "1") return std::string(kError);
    state_.text_mode = true;
    return std::string(kOk);
}

std::string Modem::at_cpms(std::string_view store) {
    if (unquote(store) != "SM") return std::string(kError);
    state_.preferred_store = "SM";
    return std::string(kOk);
}

std::string Modem::at_cmgr(int slot) {
    if (slot < 1 || slot > static_cast<int>(kSimSlots)) return std::string(kError);
    auto& entry = state_.sim_inbox[static_cast<std::size_t>(slot - 1)];
    if (!entry) return std::string(kOk);
    std::string out = "\r\n+CMGR: \"" + status_text(entry->status) + "\",\"" + entry->from + "\",,\"" +
                      format_timestamp(entry->received_at) + "\"\r\n" + entry->text + "\r\n";
    out += kOk;
    entry->status = SmsStatus::Read;
    return out;
}

std::string Modem::at_cmss(int slot, std::string_view number, LogicalMs now) {
    if (!state_.text_mode) return std::string(kError);
    if (slot < 1 || slot > static_cast<int>(kOutboxSlots)) return std::string(kError);
    const auto& text = state_.phone_outbox[static_cast<std::size_t>(slot - 1)];
    if (!text || !is_valid_number(number)) return std::string(kError);

    SmsMessage msg;
    msg.from = config_.server_number;
    msg.to = std::string(number);
    msg.text = *text;
    network_.submit_sms(std::move(msg), now);

    const int ref = state_.next_message_ref;
    state_.next_message_ref = ref % 255 + 1;
    return "\r\n+CMSS: " + std::to_string(ref) + "\r\n" + std::string(kOk);
}

std::string Modem::at_cmgd(int slot) {
    if (slot < 1 || slot > static_cast<int>(kSimSlots)) return std::string(kError);
    state_.sim_inbox[static_cast<std::size_t>(slot - 1)].reset();
    return std::string(kOk);
}

std::string Modem::at_dial(std::string_view number, LogicalMs now) {
    if (std::holds_alternative<CallDialing>(state_.call_state)) return std::string(kError);
    if (!is_valid_number(number)) return std::string(kError);
    const std::string callee(number);
    const bool known = network_.place_call(config_.server_number, callee, now);
    // Unknown numbers fail at the network and the call drops once the
    // attempt would have reached the handset.
    const LogicalMs ends_at = now + kNetworkDelayMs + (known ? kRingDurationMs : 0);
    state_.call_state = CallDialing{callee, ends_at};
    return std::string(kOk);
}

std::string Modem::advance(LogicalMs now) {
    if (auto* call = std::get_if<CallDialing>(&state_.call_state); call && now >= call->ends_at) {
        trace_.emit(now, "CALL_ENDED", {{"to", call->number}});
        state_.call_state = CallIdle{};
        return std::string(kNoCarrier);
    }
    return {};
}

std::optional<int> Modem::network_deliver_inbound(SmsMessage msg, LogicalMs now) {
    for (std::size_t i = 0; i < kSimSlots; ++i) {
        if (state_.sim_inbox[i]) continue;
        const int slot = static_cast<int>(i) + 1;
        msg.status = SmsStatus::Unread;
        msg.received_at = now;
        trace_.emit(now, "SMS_STORED", {{"slot", slot}, {"from", msg.from}, {"text", msg.text}});
        state_.sim_inbox[i] = std::move(msg);
        return slot;
    }
    trace_.emit(now, "SIM_FULL", {{"from", msg.from}, {"text", msg.text}});
    return std::nullopt;
}

}  // namespace firesim::gsm
