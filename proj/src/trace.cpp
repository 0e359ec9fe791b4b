#include "firesim/trace.hpp"

#include <algorithm>
#include <cstdio>
#include <sstream>

namespace firesim {

json TraceEvent::to_json() const {
    return json{{"seq", seq}, {"t", t}, {"kind", kind}, {"payload", payload}};
}

std::string TraceEvent::canonical() const { return to_json().dump(); }

TraceEvent TraceEvent::from_json(const json& j) {
    TraceEvent e;
    e.seq = j.at("seq").get<std::uint64_t>();
    e.t = j.at("t").get<LogicalMs>();
    e.kind = j.at("kind").get<std::string>();
    e.payload = j.value("payload", json::object());
    return e;
}

const TraceEvent& Trace::emit(LogicalMs t, std::string kind, json payload) {
    events_.push_back(TraceEvent{last_seq() + 1, t, std::move(kind), std::move(payload)});
    if (listener_) listener_(events_.back());
    return events_.back();
}

std::span<const TraceEvent> Trace::since(std::uint64_t seq) const {
    auto it = std::upper_bound(events_.begin(), events_.end(), seq,
                               [](std::uint64_t s, const TraceEvent& e) { return s < e.seq; });
    return {it, events_.end()};
}

std::string Trace::to_jsonl() const {
    std::string out;
    for (const auto& e : events_) {
        out += e.canonical();
        out += '\n';
    }
    return out;
}

std::vector<TraceEvent> parse_jsonl(std::string_view text) {
    std::vector<TraceEvent> out;
    std::size_t pos = 0;
    while (pos < text.size()) {
        std::size_t end = text.find('\n', pos);
        if (end == std::string_view::npos) end = text.size();
        std::string_view line = text.substr(pos, end - pos);
        if (!line.empty()) out.push_back(TraceEvent::from_json(json::parse(line)));
        pos = end + 1;
    }
    return out;
}

std::optional<Divergence> compare_traces(std::span<const TraceEvent> a, std::span<const TraceEvent> b) {
    const std::size_t n = std::min(a.size(), b.size());
    for (std::size_t i = 0; i < n; ++i) {
        const TraceEvent& x = a[i];
        const TraceEvent& y = b[i];
        const char* field = nullptr;
        if (x.seq != y.seq) field = "seq";
        else if (x.t != y.t) field = "t";
        else if (x.kind != y.kind) field = "kind";
        else if (x.payload != y.payload) field = "payload";
        if (field) return Divergence{x.seq, field};
    }
    if (a.size() == b.size()) return std::nullopt;
    const TraceEvent& extra = a.size() > b.size() ? a[n] : b[n];
    return Divergence{extra.seq, "missing"};
}

std::string escape_bytes(std::string_view bytes) {
    std::string out;
    for (unsigned char c : bytes) {
        switch (c) {
            case '\r': out += "\\r"; break;
            case '\n': out += "\\n"; break;
            case '\t': out += "\\t"; break;
            case '\\': out += "\\\\"; break;
            case '"': out += "\\\""; break;
            default:
                if (c < 0x20 || c >= 0x7F) {
                    char buf[5];
                    std::snprintf(buf, sizeof buf, "\\x%02X", c);
                    out += buf;
                } else {
                    out.push_back(static_cast<char>(c));
                }
        }
    }
    return out;
}

std::string at_transcript(std::span<const TraceEvent> events) {
    std::ostringstream os;
    for (const auto& e : events) {
        const char* dir = nullptr;
        if (e.kind == "AT_TX") dir = "TX ";
        else if (e.kind == "AT_RX") dir = "RX ";
        else if (e.kind == "AT_URC") dir = "URC";
        if (!dir) continue;
        char stamp[16];
        std::snprintf(stamp, sizeof stamp, "%08lld", static_cast<long long>(e.t));
        os << stamp << ' ' << dir << " \"" << escape_bytes(e.payload.at("bytes").get<std::string>())
           << "\"\n";
    }
    return os.str();
}

}  // namespace firesim
