#include "firesim/system.hpp"

#include <algorithm>
#include <stdexcept>

namespace firesim {

namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};

json threshold_json(const fw::ThresholdValue& v) {
    if (const int* c = std::get_if<int>(&v)) return *c;
    return std::string(fw::to_string(std::get<fw::SmokeClass>(v)));
}

json change_json(const fw::ThresholdChange& c, const char* source) {
    return {{"sensor", to_string(c.sensor)}, {"value", threshold_json(c.value)}, {"source", source}};
}

json leds_json(const fw::Leds& l) { return {{"mode", l.mode}, {"fail", l.fail}, {"ok", l.ok}}; }

}  // namespace

System::System(SystemConfig config)
    : config_(std::move(config)),
      env_(config_.env),
      ports_(serial::standard_ports()),
      network_(trace_),
      modem_(config_.modem, network_, trace_),
      gateway_(config_.gateway, ports_, trace_) {
    for (const auto& number : config_.gateway.destinations) network_.register_handset(number);
    for (const auto& number : config_.handsets) network_.register_handset(number);
}

void System::schedule(const std::vector<ScenarioEvent>& events) {
    // Already-fired events stay where they are; the rest are merged by time.
    std::vector<ScenarioEvent> rest(scheduled_.begin() + static_cast<std::ptrdiff_t>(next_scheduled_),
                                    scheduled_.end());
    rest.insert(rest.end(), events.begin(), events.end());
    std::stable_sort(rest.begin(), rest.end(),
                     [](const ScenarioEvent& a, const ScenarioEvent& b) { return a.t < b.t; });
    scheduled_ = std::move(rest);
    next_scheduled_ = 0;
}

void System::submit(Action action) { submitted_.push_back(std::move(action)); }

LogicalMs System::step(LogicalMs n) {
    for (LogicalMs i = 0; i < n; ++i) {
        tick();
        ++now_;
    }
    return now_;
}

std::size_t System::pending_expectations() const {
    return static_cast<std::size_t>(
        std::count_if(scheduled_.begin() + static_cast<std::ptrdiff_t>(next_scheduled_), scheduled_.end(),
                      [](const ScenarioEvent& e) { return std::holds_alternative<Expect>(e.action); }));
}

void System::tick() {
    // 1. scenario events and queued commands
    while (next_scheduled_ < scheduled_.size() && scheduled_[next_scheduled_].t <= now_) {
        ScenarioEvent e = scheduled_[next_scheduled_++];
        e.t = now_;
        apply(e);
    }
    while (!submitted_.empty()) {
        ScenarioEvent e{now_, std::move(submitted_.front())};
        submitted_.pop_front();
        apply(e);
    }

    // 2. link deliveries
    auto& com1 = ports_.at(serial::kMcuPortName);
    for (char b : com1.to_device.read(now_)) {
        if (auto change = firmware_.handle_serial_byte(b)) {
            trace_.emit(now_, "THRESHOLD_SET", change_json(*change, "serial"));
        } else {
            trace_.emit(now_, "SERIAL_IGNORED", {{"byte", escape_bytes(std::string_view(&b, 1))}});
        }
    }
    auto& com15 = ports_.at(serial::kModemPortName);
    if (std::string in = com15.to_device.read(now_); !in.empty()) {
        if (std::string reply = modem_.feed(in, now_); !reply.empty()) com15.to_host.write(reply, now_);
    }

    // 3. firmware main loop
    if (now_ % fw::kSamplePeriodMs == 0) {
        const fw::TickResult r = firmware_.tick(now_, env_.sensor_voltages());
        if (r.password_window_expired) trace_.emit(now_, "PW_MODE_EXPIRED");
        for (char b : r.alert_bytes) {
            trace_.emit(now_, "ALERT_BYTE", {{"sensor", to_string(*fw::sensor_for_alert_byte(b))}});
        }
        if (!r.alert_bytes.empty()) com1.to_host.write(r.alert_bytes, now_);
    }

    // 4. gateway
    gateway_.tick(now_);

    // 5. network and modem timers
    network_.advance(now_, modem_);
    if (std::string urc = modem_.advance(now_); !urc.empty()) com15.to_host.write(urc, now_);
}

void System::apply(const ScenarioEvent& e) {
    if (!std::holds_alternative<Expect>(e.action)) applied_.push_back(e);
    try {
        std::visit(
            overloaded{
                [&](const SetTemp& a) {
                    env_.set_temp(a.sensor, a.celsius);
                    trace_.emit(now_, "ENV_SET",
                                {{"sensor", a.sensor == 1 ? "Temp1" : "Temp2"}, {"value", a.celsius}});
                },
                [&](const SetSmoke& a) {
                    env_.set_smoke(a.sensor, a.density);
                    trace_.emit(now_, "ENV_SET",
                                {{"sensor", a.sensor == 1 ? "Smoke1" : "Smoke2"}, {"value", a.density}});
                },
                [&](const PressPasswordMode& a) {
                    const bool opened = firmware_.press_password_mode(now_, a.latch);
                    json p{{"accepted", opened}};
                    if (opened) p["until"] = *firmware_.state().pw_mode_until;
                    trace_.emit(now_, "PW_MODE", p);
                },
                [&](const CommitPassword& a) {
                    const bool ok = firmware_.commit_new_password(now_, a.latch);
                    trace_.emit(now_, ok ? "PW_CHANGED" : "PW_REJECTED",
                                {{"leds", leds_json(firmware_.state().leds)}});
                },
                [&](const SetThresholdLocal& a) {
                    const auto r = firmware_.set_threshold_local(a.latch, a.select, a.range);
                    if (r.change) {
                        trace_.emit(now_, "THRESHOLD_SET", change_json(*r.change, "local"));
                    } else {
                        const char* reason = r.status == fw::LocalThresholdStatus::WrongPassword
                                                 ? "wrong_password"
                                                 : "kind_mismatch";
                        trace_.emit(now_, "THRESHOLD_REJECTED", {{"reason", reason}});
                    }
                },
                [&](const SendSms& a) {
                    gsm::SmsMessage msg;
                    msg.from = a.from;
                    msg.to = modem_.server_number();
                    msg.text = a.text;
                    gsm::validate(msg);
                    trace_.emit(now_, "SMS_SENT", {{"from", a.from}, {"text", a.text}});
                    network_.send_to_server(std::move(msg), now_);
                },
                [&](const Expect& x) { check(x); },
            },
            e.action);
    } catch (const std::exception& ex) {
        trace_.emit(now_, "ACTION_REJECTED", {{"op", op_name(e.action)}, {"reason", ex.what()}});
    }
}

void System::check(const Expect& x) {
    ++expectations_checked_;
    const auto n = static_cast<std::size_t>(
        std::count_if(trace_.events().begin(), trace_.events().end(), [&](const TraceEvent& ev) {
            return ev.t >= x.since && ev.kind == x.kind && payload_matches(ev.payload, x.match);
        }));
    const bool ok = x.count ? n == *x.count : n >= 1;
    if (ok || first_failure_) return;
    first_failure_ = ExpectationFailure{
        now_, "expected " + (x.count ? std::to_string(*x.count) : std::string("at least 1")) + " " + x.kind +
                  " event(s) matching " + x.match.dump() + " since t=" + std::to_string(x.since) +
                  ", found " + std::to_string(n)};
}

json System::state_json() const {
    const auto& fs = firmware_.state();
    json thresholds = json::object();
    json codes = json::object();
    for (SensorId s : kAllSensors) {
        thresholds[std::string(to_string(s))] = threshold_json(fw::threshold_of(fs.thresholds, s));
        codes[std::string(to_string(s))] = fs.adc_codes[index_of(s)].value;
    }
    json latched = json::array();
    for (SensorId s : gateway_.latched()) latched.push_back(to_string(s));

    json sim = json::array();
    const auto& ms = modem_.state();
    for (std::size_t i = 0; i < ms.sim_inbox.size(); ++i) {
        if (!ms.sim_inbox[i]) continue;
        const auto& m = *ms.sim_inbox[i];
        sim.push_back({{"slot", i + 1},
                       {"from", m.from},
                       {"text", m.text},
                       {"status", m.status == gsm::SmsStatus::Unread ? "unread" : "read"}});
    }
    json call = "idle";
    if (const auto* d = std::get_if<gsm::CallDialing>(&ms.call_state)) {
        call = {{"dialing", d->number}, {"ends_at", d->ends_at}};
    }

    json handsets = json::array();
    for (const auto& [number, h] : network_.handsets()) {
        json inbox = json::array();
        for (const auto& m : h.inbox) inbox.push_back({{"from", m.from}, {"text", m.text}, {"t", m.received_at}});
        json rings = json::array();
        for (const auto& r : h.ring_log) rings.push_back({{"t", r.t}, {"from", r.caller}});
        handsets.push_back({{"number", number}, {"inbox", inbox}, {"rings", rings}});
    }

    json pw_until = fs.pw_mode_until ? json(*fs.pw_mode_until) : json(nullptr);
    return json{
        {"now", now_},
        {"env",
         {{"temp_c", env_.temp_c()},
          {"smoke_density", env_.smoke_density()},
          {"volts", env_.sensor_voltages()}}},
        {"firmware",
         {{"thresholds", thresholds},
          {"leds", leds_json(fs.leds)},
          {"pw_mode_until", pw_until},
          {"adc_codes", codes}}},
        {"gateway", {{"status", gw::to_string(gateway_.status())}, {"latched", latched}}},
        {"modem", {{"text_mode", ms.text_mode}, {"sim_inbox", sim}, {"call", call}}},
        {"handsets", handsets},
        {"trace_seq", trace_.last_seq()},
    };
}

RunResult run(const Scenario& scenario, LogicalMs duration_ms, const SystemConfig& config) {
    System sys(config);
    sys.schedule(scenario.events);
    sys.step(duration_ms);
    RunResult r;
    r.trace_jsonl = sys.trace().to_jsonl();
    r.failure = sys.first_failure();
    r.expectations_checked = sys.expectations_checked();
    if (!r.failure && sys.pending_expectations() > 0) {
        r.failure = ExpectationFailure{duration_ms, std::to_string(sys.pending_expectations()) +
                                                        " expectation(s) scheduled after the run ended"};
    }
    return r;
}

}  // namespace firesim
