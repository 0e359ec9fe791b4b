#include "firesim/scenario.hpp"

#include <algorithm>

#include "firesim/config.hpp"

namespace firesim {

namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};

int sensor_index(const json& j) {
    const int s = j.at("sensor").get<int>();
    if (s != 1 && s != 2) throw ScenarioError("sensor must be 1 or 2");
    return s;
}

fw::PasswordLatch latch_from(const json& j) {
    const json& v = j.at("latch");
    int bits = 0;
    if (v.is_string()) {
        try {
            bits = std::stoi(v.get<std::string>(), nullptr, 0);
        } catch (const std::exception&) {
            throw ScenarioError("latch must be an integer or a numeric string");
        }
    } else {
        bits = v.get<int>();
    }
    try {
        return fw::PasswordLatch(bits);
    } catch (const std::domain_error& e) {
        throw ScenarioError(e.what());
    }
}

fw::SensorSelect select_from(const json& j) {
    const json& v = j.at("select");
    if (v.is_array()) {
        if (v.size() != 2) throw ScenarioError("select must be [button2, button1]");
        return fw::SensorSelect{v[0].get<int>() != 0, v[1].get<int>() != 0};
    }
    const int code = v.get<int>();
    if (code < 0 || code > 3) throw ScenarioError("select code must be 0..3");
    return fw::SensorSelect{(code & 2) != 0, (code & 1) != 0};
}

fw::RangeButton range_from(const json& j) {
    const json& v = j.at("range");
    if (v.is_string()) {
        auto b = fw::range_button_from_string(v.get<std::string>());
        if (!b) throw ScenarioError("range must be PB0..PB7");
        return *b;
    }
    const int pin = v.get<int>();
    if (pin < 0 || pin > 7) throw ScenarioError("range must be 0..7");
    return static_cast<fw::RangeButton>(pin);
}

/// Maps a byte offset in `text` to a 1-based (line, column).
std::pair<std::size_t, std::size_t> line_col(std::string_view text, std::size_t offset) {
    std::size_t line = 1;
    std::size_t col = 1;
    for (std::size_t i = 0; i < offset && i < text.size(); ++i) {
        if (text[i] == '\n') {
            ++line;
            col = 1;
        } else {
            ++col;
        }
    }
    return {line, col};
}

}  // namespace

ScenarioError::ScenarioError(const std::string& what, std::size_t line, std::size_t column)
    : std::runtime_error(line ? what + " (line " + std::to_string(line) + ", column " +
                                    std::to_string(column) + ")"
                              : what),
      line_(line),
      column_(column) {}

std::string_view op_name(const Action& a) {
    return std::visit(overloaded{
                          [](const SetTemp&) { return std::string_view("set_temp"); },
                          [](const SetSmoke&) { return std::string_view("set_smoke"); },
                          [](const PressPasswordMode&) { return std::string_view("press_pw_mode"); },
                          [](const CommitPassword&) { return std::string_view("commit_password"); },
                          [](const SetThresholdLocal&) { return std::string_view("set_threshold_local"); },
                          [](const SendSms&) { return std::string_view("send_sms"); },
                          [](const Expect&) { return std::string_view("expect"); },
                      },
                      a);
}

ScenarioEvent event_from_json(const json& j) {
    if (!j.is_object()) throw ScenarioError("event must be a JSON object");
    ScenarioEvent e;
    try {
        e.t = j.value("t", LogicalMs{0});
        if (e.t < 0) throw ScenarioError("event time must be non-negative, got " + std::to_string(e.t));
        const std::string op = j.at("op").get<std::string>();
        if (op == "set_temp") {
            e.action = SetTemp{sensor_index(j), j.at("celsius").get<double>()};
        } else if (op == "set_smoke") {
            e.action = SetSmoke{sensor_index(j), j.at("density").get<double>()};
        } else if (op == "press_pw_mode") {
            e.action = PressPasswordMode{latch_from(j)};
        } else if (op == "commit_password") {
            e.action = CommitPassword{latch_from(j)};
        } else if (op == "set_threshold_local") {
            e.action = SetThresholdLocal{latch_from(j), select_from(j), range_from(j)};
        } else if (op == "send_sms") {
            e.action = SendSms{j.at("from").get<std::string>(), j.at("text").get<std::string>()};
        } else if (op == "expect") {
            Expect x;
            x.kind = j.at("kind").get<std::string>();
            x.match = j.value("match", json::object());
            if (!x.match.is_object()) throw ScenarioError("expect.match must be an object");
            if (j.contains("count")) x.count = j.at("count").get<std::size_t>();
            x.since = j.value("since", LogicalMs{0});
            e.action = std::move(x);
        } else {
            throw ScenarioError("unknown op '" + op + "'");
        }
    } catch (const json::exception& ex) {
        throw ScenarioError(std::string("malformed event: ") + ex.what());
    }
    return e;
}

json to_json(const ScenarioEvent& e) {
    json j = std::visit(
        overloaded{
            [](const SetTemp& a) { return json{{"sensor", a.sensor}, {"celsius", a.celsius}}; },
            [](const SetSmoke& a) { return json{{"sensor", a.sensor}, {"density", a.density}}; },
            [](const PressPasswordMode& a) { return json{{"latch", a.latch.bits()}}; },
            [](const CommitPassword& a) { return json{{"latch", a.latch.bits()}}; },
            [](const SetThresholdLocal& a) {
                return json{{"latch", a.latch.bits()},
                            {"select", {a.select.button2 ? 1 : 0, a.select.button1 ? 1 : 0}},
                            {"range", fw::to_string(a.range)}};
            },
            [](const SendSms& a) { return json{{"from", a.from}, {"text", a.text}}; },
            [](const Expect& a) {
                json x{{"kind", a.kind}, {"match", a.match}, {"since", a.since}};
                if (a.count) x["count"] = *a.count;
                return x;
            },
        },
        e.action);
    j["t"] = e.t;
    j["op"] = op_name(e.action);
    return j;
}

Scenario parse_scenario(std::string_view text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& ex) {
        auto [line, col] = line_col(text, ex.byte > 0 ? ex.byte - 1 : 0);
        throw ScenarioError(std::string("scenario parse error: ") + ex.what(), line, col);
    }
    Scenario s;
    const json* events = &j;
    if (j.is_object()) {
        s.name = j.value("name", std::string{});
        if (!j.contains("events")) throw ScenarioError("scenario object needs an 'events' array");
        events = &j.at("events");
    }
    if (!events->is_array()) throw ScenarioError("scenario events must be an array");
    for (std::size_t i = 0; i < events->size(); ++i) {
        try {
            s.events.push_back(event_from_json((*events)[i]));
        } catch (const ScenarioError& ex) {
            throw ScenarioError("event " + std::to_string(i) + ": " + ex.what());
        }
    }
    std::stable_sort(s.events.begin(), s.events.end(),
                     [](const ScenarioEvent& a, const ScenarioEvent& b) { return a.t < b.t; });
    return s;
}

Scenario load_scenario(const std::filesystem::path& path) {
    Scenario s = parse_scenario(read_file(path));
    if (s.name.empty()) s.name = path.stem().string();
    return s;
}

json to_json(const Scenario& s) {
    json events = json::array();
    for (const auto& e : s.events) events.push_back(to_json(e));
    return json{{"name", s.name}, {"events", events}};
}

bool payload_matches(const json& payload, const json& pattern) {
    if (!pattern.is_object()) return payload == pattern;
    if (!payload.is_object()) return false;
    for (const auto& [key, value] : pattern.items()) {
        auto it = payload.find(key);
        if (it == payload.end() || !payload_matches(*it, value)) return false;
    }
    return true;
}

}  // namespace firesim
