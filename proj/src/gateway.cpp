#include "firesim/gateway.hpp"

#include <algorithm>
#include <array>
#include <stdexcept>

#include "firesim/firmware.hpp"
#include "firesim/gsm.hpp"

namespace firesim::gw {

namespace {

bool starts_with(std::string_view s, std::string_view prefix) { return s.substr(0, prefix.size()) == prefix; }

std::string_view final_name(AtResponse::Final f) {
    switch (f) {
        case AtResponse::Final::Ok: return "OK";
        case AtResponse::Final::Error: return "ERROR";
        case AtResponse::Final::NoCarrier: return "NO CARRIER";
    }
    return "?";
}

/// Splits on commas that are not inside double quotes; quotes are stripped.
std::vector<std::string> split_fields(std::string_view s) {
    std::vector<std::string> out(1);
    bool quoted = false;
    for (char c : s) {
        if (c == '"') {
            quoted = !quoted;
        } else if (c == ',' && !quoted) {
            out.emplace_back();
        } else {
            out.back().push_back(c);
        }
    }
    return out;
}

class InitJob final : public ModemJob {
public:
    std::string_view name() const override { return "init"; }

    std::optional<std::string> next_command(Gateway&) override {
        if (step_ >= kCommands.size()) return std::nullopt;
        return std::string(kCommands[step_]);
    }

    void on_response(Gateway& gw, const std::string& command, const AtResponse& response,
                     LogicalMs now) override {
        if (response.final != AtResponse::Final::Ok) {
            gw.mark_failed(now, command + " returned " + std::string(final_name(response.final)));
            step_ = kCommands.size();
            return;
        }
        if (++step_ == kCommands.size()) gw.mark_ready(now);
    }

private:
    static constexpr std::array<std::string_view, 2> kCommands{"AT+CMGF=1", "AT+CPMS=\"SM\""};
    std::size_t step_ = 0;
};

/// SMS to every destination in order, then a call to every destination.
class DispatchJob final : public ModemJob {
public:
    DispatchJob(SensorId sensor, int slot, const std::vector<std::string>& destinations) : sensor_(sensor) {
        for (const auto& d : destinations) {
            commands_.push_back("AT+CMSS=" + std::to_string(slot) + ",\"" + d + "\"");
        }
        for (const auto& d : destinations) commands_.push_back("ATD" + d + ";");
    }

    std::string_view name() const override { return "dispatch"; }

    std::optional<std::string> next_command(Gateway&) override {
        if (next_ >= commands_.size()) return std::nullopt;
        return commands_[next_];
    }

    void on_response(Gateway& gw, const std::string& command, const AtResponse& response,
                     LogicalMs now) override {
        ++next_;
        if (response.final != AtResponse::Final::Ok) {
            gw.trace().emit(now, "DISPATCH_FAILED",
                            {{"sensor", to_string(sensor_)}, {"command", command}});
        }
        if (next_ == commands_.size()) {
            gw.trace().emit(now, "DISPATCH_DONE", {{"sensor", to_string(sensor_)}});
        }
    }

private:
    SensorId sensor_;
    std::vector<std::string> commands_;
    std::size_t next_ = 0;
};

/// CMGR over every SIM slot; each occupied slot is acted on, then deleted.
class SweepJob final : public ModemJob {
public:
    std::string_view name() const override { return "sms_sweep"; }

    std::optional<std::string> next_command(Gateway&) override {
        if (pending_delete_) return "AT+CMGD=" + std::to_string(*pending_delete_);
        if (slot_ > static_cast<int>(gsm::kSimSlots)) return std::nullopt;
        return "AT+CMGR=" + std::to_string(slot_);
    }

    void on_response(Gateway& gw, const std::string& command, const AtResponse& response,
                     LogicalMs now) override {
        if (starts_with(command, "AT+CMGD=")) {
            pending_delete_.reset();
            return;
        }
        if (response.final == AtResponse::Final::Ok) {
            if (auto record = parse_cmgr(response)) {
                gw.handle_remote_text(record->from, record->text, now);
                pending_delete_ = slot_;
            }
        }
        ++slot_;
    }

private:
    int slot_ = 1;
    std::optional<int> pending_delete_;
};

}  // namespace

void GatewayConfig::validate() const {
    if (destinations.empty() || destinations.size() > 8) {
        throw std::invalid_argument("gateway needs 1 to 8 destination numbers");
    }
    for (const auto& d : destinations) {
        if (!gsm::is_valid_number(d)) throw std::invalid_argument("invalid destination number: " + d);
    }
    if (server_password.empty() || server_password.size() > kMaxPasswordLength ||
        server_password.find(' ') != std::string::npos) {
        throw std::invalid_argument("server password must be 1-10 characters without spaces");
    }
    if (mcu_poll_ms <= 0 || sms_poll_ms <= 0 || at_gap_ms < 0 || at_timeout_ms <= 0 || call_timeout_ms <= 0) {
        throw std::invalid_argument("gateway intervals must be positive");
    }
    for (SensorId s : kAllSensors) {
        auto it = sensor_outbox_slot.find(s);
        if (it == sensor_outbox_slot.end() || it->second < 1 || it->second > static_cast<int>(gsm::kOutboxSlots)) {
            throw std::invalid_argument("missing or invalid outbox slot for " + std::string(to_string(s)));
        }
    }
}

bool is_remote_command_char(char c) { return (c >= 'A' && c <= 'P') || c == 'R'; }

std::optional<RemoteCommand> parse_remote_command(std::string_view text) {
    const auto space = text.find(' ');
    if (space == std::string_view::npos) return std::nullopt;
    const std::string_view password = text.substr(0, space);
    const std::string_view cmd = text.substr(space + 1);
    if (password.empty() || password.size() > kMaxPasswordLength) return std::nullopt;
    if (cmd.size() != 1 || !is_remote_command_char(cmd[0])) return std::nullopt;
    return RemoteCommand{std::string(password), cmd[0]};
}

std::optional<AtResponse> take_response(std::string& buffer) {
    AtResponse response;
    std::size_t pos = 0;
    bool body_next = false;
    while (true) {
        const std::size_t eol = buffer.find("\r\n", pos);
        if (eol == std::string::npos) return std::nullopt;
        std::string line = buffer.substr(pos, eol - pos);
        pos = eol + 2;
        if (body_next) {
            response.lines.push_back(std::move(line));
            body_next = false;
            continue;
        }
        if (line.empty()) continue;
        std::optional<AtResponse::Final> final;
        if (line == "OK") final = AtResponse::Final::Ok;
        else if (line == "ERROR" || starts_with(line, "+CMS ERROR") || starts_with(line, "+CME ERROR"))
            final = AtResponse::Final::Error;
        else if (line == "NO CARRIER") final = AtResponse::Final::NoCarrier;
        if (final) {
            response.final = *final;
            response.raw = buffer.substr(0, pos);
            buffer.erase(0, pos);
            return response;
        }
        body_next = starts_with(line, "+CMGR:");
        response.lines.push_back(std::move(line));
    }
}

std::optional<CmgrRecord> parse_cmgr(const AtResponse& response) {
    for (std::size_t i = 0; i < response.lines.size(); ++i) {
        std::string_view header = response.lines[i];
        if (!starts_with(header, "+CMGR:")) continue;
        header.remove_prefix(6);
        while (!header.empty() && header.front() == ' ') header.remove_prefix(1);
        const auto fields = split_fields(header);
        CmgrRecord rec;
        rec.status = fields.size() > 0 ? fields[0] : "";
        rec.from = fields.size() > 1 ? fields[1] : "";
        // The date field itself contains a comma, which sits inside quotes.
        rec.timestamp = fields.size() > 3 ? fields[3] : "";
        rec.text = i + 1 < response.lines.size() ? response.lines[i + 1] : "";
        return rec;
    }
    return std::nullopt;
}

std::string_view to_string(GatewayStatus s) {
    switch (s) {
        case GatewayStatus::Starting: return "starting";
        case GatewayStatus::Ready: return "ready";
        case GatewayStatus::Failed: return "failed";
    }
    return "?";
}

Gateway::Gateway(GatewayConfig config, serial::PortRegistry& ports, Trace& trace)
    : config_(std::move(config)),
      mcu_(ports.at(serial::kMcuPortName)),
      modem_(ports.at(serial::kModemPortName)),
      trace_(trace) {
    config_.validate();
}

void Gateway::tick(LogicalMs now) {
    if (!started_) {
        started_ = true;
        enqueue(std::make_unique<InitJob>());
    }
    if (status_ == GatewayStatus::Ready) {
        if (now >= next_mcu_poll_) {
            poll_mcu(now);
            next_mcu_poll_ = now + config_.mcu_poll_ms;
        }
        if (now >= next_sms_poll_) {
            poll_sms(now);
            next_sms_poll_ = now + config_.sms_poll_ms;
        }
    }
    if (status_ != GatewayStatus::Failed) service_channel(now);
}

void Gateway::poll_mcu(LogicalMs now) {
    for (char b : mcu_.to_host.read(now)) {
        auto sensor = fw::sensor_for_alert_byte(b);
        if (!sensor) {
            trace_.emit(now, "MCU_UNKNOWN_BYTE", {{"byte", escape_bytes(std::string_view(&b, 1))}});
            continue;
        }
        if (!latched_.insert(*sensor).second) continue;  // resent while latched
        trace_.emit(now, "ALERT_LATCHED", {{"sensor", to_string(*sensor)}});
        enqueue(std::make_unique<DispatchJob>(*sensor, config_.sensor_outbox_slot.at(*sensor),
                                              config_.destinations));
    }
}

void Gateway::poll_sms(LogicalMs) {
    const bool pending = std::any_of(jobs_.begin(), jobs_.end(),
                                     [](const auto& j) { return j->name() == "sms_sweep"; });
    if (!pending) enqueue(std::make_unique<SweepJob>());
}

void Gateway::execute_command(const RemoteCommand& rc, LogicalMs now) {
    if (rc.cmd == 'R') {
        json cleared = json::array();
        for (SensorId s : latched_) cleared.push_back(to_string(s));
        latched_.clear();
        trace_.emit(now, "RESET", {{"cleared", cleared}});
        return;
    }
    if (rc.cmd < 'A' || rc.cmd > 'P') return;
    mcu_.to_device.write(std::string(1, rc.cmd), now);
    trace_.emit(now, "CMD_EXECUTED", {{"cmd", std::string(1, rc.cmd)}});
}

void Gateway::handle_remote_text(const std::string& from, const std::string& text, LogicalMs now) {
    auto rc = parse_remote_command(text);
    if (!rc) {
        trace_.emit(now, "CMD_INVALID", {{"from", from}, {"text", text}});
        return;
    }
    if (rc->password != config_.server_password) {
        trace_.emit(now, "CMD_REJECTED", {{"from", from}, {"cmd", std::string(1, rc->cmd)}});
        return;
    }
    execute_command(*rc, now);
}

bool Gateway::channel_idle() const { return channel_ == ChannelState::Idle && jobs_.empty(); }

void Gateway::mark_ready(LogicalMs now) {
    status_ = GatewayStatus::Ready;
    next_mcu_poll_ = now;
    next_sms_poll_ = now + config_.sms_poll_ms;
    trace_.emit(now, "GATEWAY_READY");
}

void Gateway::mark_failed(LogicalMs now, std::string reason) {
    status_ = GatewayStatus::Failed;
    trace_.emit(now, "STARTUP_FAILED", {{"reason", std::move(reason)}});
}

void Gateway::enqueue(std::unique_ptr<ModemJob> job) { jobs_.push_back(std::move(job)); }

void Gateway::send(const std::string& command, LogicalMs now) {
    const std::string bytes = command + "\r";
    modem_.to_device.write(bytes, now);
    trace_.emit(now, "AT_TX", {{"bytes", bytes}});
    in_flight_ = command;
    in_flight_since_ = now;
    channel_ = ChannelState::AwaitingResponse;
}

void Gateway::complete_exchange(const AtResponse& response, LogicalMs now) {
    const std::string command = std::move(in_flight_);
    in_flight_.clear();
    const bool call_placed = starts_with(command, "ATD") && response.final == AtResponse::Final::Ok;
    channel_ = call_placed ? ChannelState::AwaitingCallEnd : ChannelState::Idle;
    in_flight_since_ = now;
    next_tx_at_ = now + config_.at_gap_ms;
    if (!jobs_.empty()) jobs_.front()->on_response(*this, command, response, now);
}

void Gateway::service_channel(LogicalMs now) {
    rx_buffer_ += modem_.to_host.read(now);

    while (auto response = take_response(rx_buffer_)) {
        const bool urc = response->final == AtResponse::Final::NoCarrier;
        trace_.emit(now, urc ? "AT_URC" : "AT_RX",
                    {{"bytes", response->raw}, {"final", final_name(response->final)}});
        if (channel_ == ChannelState::AwaitingCallEnd && urc) {
            channel_ = ChannelState::Idle;
            next_tx_at_ = now + config_.at_gap_ms;
        } else if (channel_ == ChannelState::AwaitingResponse && !urc) {
            complete_exchange(*response, now);
        }
    }

    if (channel_ == ChannelState::AwaitingResponse && now - in_flight_since_ >= config_.at_timeout_ms) {
        trace_.emit(now, "AT_TIMEOUT", {{"command", in_flight_}});
        complete_exchange(AtResponse{}, now);
    } else if (channel_ == ChannelState::AwaitingCallEnd && now - in_flight_since_ >= config_.call_timeout_ms) {
        trace_.emit(now, "AT_TIMEOUT", {{"command", "NO CARRIER"}});
        channel_ = ChannelState::Idle;
        next_tx_at_ = now + config_.at_gap_ms;
    }

    if (status_ == GatewayStatus::Failed) {
        jobs_.clear();
        return;
    }
    if (channel_ != ChannelState::Idle || now < next_tx_at_) return;
    while (!jobs_.empty()) {
        if (auto command = jobs_.front()->next_command(*this)) {
            send(*command, now);
            return;
        }
        jobs_.pop_front();
    }
}

}  // namespace firesim::gw
