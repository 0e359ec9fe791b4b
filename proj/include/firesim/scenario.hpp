#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "firesim/firmware.hpp"
#include "firesim/trace.hpp"
#include "firesim/types.hpp"

namespace firesim {

struct SetTemp {
    int sensor;  // 1 or 2
    double celsius;
};

struct SetSmoke {
    int sensor;  // 1 or 2
    double density;
};

struct PressPasswordMode {
    fw::PasswordLatch latch;
};

struct CommitPassword {
    fw::PasswordLatch latch;
};

struct SetThresholdLocal {
    fw::PasswordLatch latch;
    fw::SensorSelect select;
    fw::RangeButton range;
};

/// A remote handset texting the server mobile.
struct SendSms {
    std::string from;
    std::string text;
};

/// Checks the trace recorded before the current tick: events of `kind` with
/// t >= since whose payload contains every key/value in `match`. Without
/// `count`, at least one must exist; with it, exactly that many.
struct Expect {
    std::string kind;
    json match = json::object();
    std::optional<std::size_t> count;
    LogicalMs since = 0;
};

using Action = std::variant<SetTemp, SetSmoke, PressPasswordMode, CommitPassword, SetThresholdLocal,
                            SendSms, Expect>;

struct ScenarioEvent {
    LogicalMs t = 0;
    Action action;
};

struct Scenario {
    std::string name;
    std::vector<ScenarioEvent> events;  ///< sorted by t, stable for equal t
};

/// Validation or parse failure. For syntax errors `line`/`column` (1-based)
/// point at the last byte the parser read; both are 0 for semantic errors.
class ScenarioError : public std::runtime_error {
public:
    ScenarioError(const std::string& what, std::size_t line = 0, std::size_t column = 0);
    std::size_t line() const { return line_; }
    std::size_t column() const { return column_; }

private:
    std::size_t line_;
    std::size_t column_;
};

std::string_view op_name(const Action& a);

/// Parses one event object ({"t": .., "op": .., ...}).
ScenarioEvent event_from_json(const json& j);
json to_json(const ScenarioEvent& e);

/// Accepts {"name": .., "events": [..]} or a bare event array.
Scenario parse_scenario(std::string_view text);
Scenario load_scenario(const std::filesystem::path& path);
json to_json(const Scenario& s);

/// Returns true if `payload` contains every entry of `pattern` (recursively for objects).
bool payload_matches(const json& payload, const json& pattern);

}  // namespace firesim
