#include "firesim/config.hpp"

#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

namespace firesim {

namespace {

void reject_unknown_keys(const json& j, const std::set<std::string>& allowed, const char* where) {
    if (!j.is_object()) throw std::invalid_argument(std::string(where) + " must be a JSON object");
    for (const auto& [key, _] : j.items()) {
        if (!allowed.count(key)) {
            throw std::invalid_argument(std::string("unknown key '") + key + "' in " + where);
        }
    }
}

template <typename T>
void read_if(const json& j, const char* key, T& out) {
    if (j.contains(key)) out = j.at(key).get<T>();
}

}  // namespace

SystemConfig default_config() {
    SystemConfig c;
    c.gateway.destinations = {"01711111111", "01722222222"};
    c.gateway.server_password = "mypass";
    c.modem.server_number = "01700000000";
    c.modem.outbox = {
        {1, "FIRE ALERT: temperature sensor 1 (T1), location: ground floor store room"},
        {2, "FIRE ALERT: temperature sensor 2 (T2), location: first floor office"},
        {3, "FIRE ALERT: smoke sensor 1 (S1), location: ground floor corridor"},
        {4, "FIRE ALERT: smoke sensor 2 (S2), location: first floor server room"},
    };
    return c;
}

SystemConfig config_from_json(const json& j) {
    SystemConfig c = default_config();
    try {
        reject_unknown_keys(j, {"gateway", "modem", "handsets", "env"}, "config");
        if (j.contains("gateway")) {
            const json& g = j.at("gateway");
            reject_unknown_keys(g,
                                {"destinations", "server_password", "mcu_poll_ms", "sms_poll_ms",
                                 "at_gap_ms", "at_timeout_ms", "call_timeout_ms", "sensor_outbox_slot"},
                                "gateway");
            read_if(g, "destinations", c.gateway.destinations);
            read_if(g, "server_password", c.gateway.server_password);
            read_if(g, "mcu_poll_ms", c.gateway.mcu_poll_ms);
            read_if(g, "sms_poll_ms", c.gateway.sms_poll_ms);
            read_if(g, "at_gap_ms", c.gateway.at_gap_ms);
            read_if(g, "at_timeout_ms", c.gateway.at_timeout_ms);
            read_if(g, "call_timeout_ms", c.gateway.call_timeout_ms);
            if (g.contains("sensor_outbox_slot")) {
                for (const auto& [name, slot] : g.at("sensor_outbox_slot").items()) {
                    auto s = sensor_from_string(name);
                    if (!s) throw std::invalid_argument("unknown sensor '" + name + "'");
                    c.gateway.sensor_outbox_slot[*s] = slot.get<int>();
                }
            }
        }
        if (j.contains("modem")) {
            const json& m = j.at("modem");
            reject_unknown_keys(m, {"server_number", "outbox"}, "modem");
            read_if(m, "server_number", c.modem.server_number);
            if (m.contains("outbox")) {
                c.modem.outbox.clear();
                for (const auto& [slot, text] : m.at("outbox").items()) {
                    c.modem.outbox[std::stoi(slot)] = text.get<std::string>();
                }
            }
        }
        read_if(j, "handsets", c.handsets);
        if (j.contains("env")) {
            const json& e = j.at("env");
            reject_unknown_keys(e, {"temp_c", "smoke_density"}, "env");
            auto temps = c.env.temp_c();
            auto smoke = c.env.smoke_density();
            read_if(e, "temp_c", temps);
            read_if(e, "smoke_density", smoke);
            c.env = env::EnvState(temps, smoke);
        }
    } catch (const json::exception& ex) {
        throw std::invalid_argument(std::string("config: ") + ex.what());
    } catch (const std::domain_error& ex) {
        throw std::invalid_argument(std::string("config: ") + ex.what());
    }
    c.gateway.validate();
    return c;
}

SystemConfig load_config(const std::filesystem::path& path) {
    const std::string text = read_file(path);
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& ex) {
        throw std::invalid_argument(path.string() + ": " + ex.what());
    }
    return config_from_json(j);
}

json to_json(const SystemConfig& c) {
    json slots = json::object();
    for (const auto& [s, slot] : c.gateway.sensor_outbox_slot) slots[std::string(to_string(s))] = slot;
    json outbox = json::object();
    for (const auto& [slot, text] : c.modem.outbox) outbox[std::to_string(slot)] = text;
    return json{
        {"gateway",
         {{"destinations", c.gateway.destinations},
          {"server_password", c.gateway.server_password},
          {"mcu_poll_ms", c.gateway.mcu_poll_ms},
          {"sms_poll_ms", c.gateway.sms_poll_ms},
          {"at_gap_ms", c.gateway.at_gap_ms},
          {"at_timeout_ms", c.gateway.at_timeout_ms},
          {"call_timeout_ms", c.gateway.call_timeout_ms},
          {"sensor_outbox_slot", slots}}},
        {"modem", {{"server_number", c.modem.server_number}, {"outbox", outbox}}},
        {"handsets", c.handsets},
        {"env", {{"temp_c", c.env.temp_c()}, {"smoke_density", c.env.smoke_density()}}},
    };
}

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path.string());
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

}  // namespace firesim
