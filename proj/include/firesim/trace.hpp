#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "firesim/types.hpp"

namespace firesim {

using json = nlohmann::json;

/// One observable action on the logical timeline.
struct TraceEvent {
    std::uint64_t seq = 0;
    LogicalMs t = 0;
    std::string kind;
    json payload = json::object();

    json to_json() const;
    /// Compact JSON with sorted keys; identical events always serialize identically.
    std::string canonical() const;
    static TraceEvent from_json(const json& j);

    friend bool operator==(const TraceEvent&, const TraceEvent&) = default;
};

/// Append-only event log. Sequence numbers start at 1.
class Trace {
public:
    using Listener = std::function<void(const TraceEvent&)>;

    const TraceEvent& emit(LogicalMs t, std::string kind, json payload = json::object());

    const std::vector<TraceEvent>& events() const { return events_; }
    std::size_t size() const { return events_.size(); }
    std::uint64_t last_seq() const { return events_.empty() ? 0 : events_.back().seq; }

    /// Events with seq > since.
    std::span<const TraceEvent> since(std::uint64_t seq) const;

    /// One canonical JSON object per line.
    std::string to_jsonl() const;

    void set_listener(Listener l) { listener_ = std::move(l); }

private:
    std::vector<TraceEvent> events_;
    Listener listener_;
};

std::vector<TraceEvent> parse_jsonl(std::string_view text);

struct Divergence {
    std::uint64_t seq;   ///< seq of the first differing event (or the first extra one)
    std::string field;   ///< "seq", "t", "kind", "payload", or "missing"
};

/// nullopt when the traces are equal.
std::optional<Divergence> compare_traces(std::span<const TraceEvent> a, std::span<const TraceEvent> b);

/// Human-readable dump of the server<->modem exchange: one line per AT_TX,
/// AT_RX and AT_URC event, with every byte C-escaped. Used for golden files.
std::string at_transcript(std::span<const TraceEvent> events);

std::string escape_bytes(std::string_view bytes);

}  // namespace firesim
