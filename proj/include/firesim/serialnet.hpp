#pragma once

#include <cstddef>
#include <cstdint>
#include <deque>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

#include "firesim/types.hpp"

namespace firesim::serial {

inline constexpr std::string_view kMcuPortName = "COM1";
inline constexpr std::string_view kModemPortName = "COM15";
inline constexpr int kMcuBaud = 115200;
inline constexpr int kModemBaud = 9600;

enum class Parity : std::uint8_t { None, Even, Odd };

struct FrameFormat {
    int data_bits = 8;
    int stop_bits = 1;
    Parity parity = Parity::None;

    /// Start bit + data + optional parity + stop bits.
    constexpr int bits_per_frame() const {
        return 1 + data_bits + (parity == Parity::None ? 0 : 1) + stop_bits;
    }
};

struct LinkConfig {
    std::string name;
    int baud = kMcuBaud;
    FrameFormat frame;
};

class LinkClosedError : public std::logic_error {
public:
    explicit LinkClosedError(const std::string& name)
        : std::logic_error("serial link " + name + " is closed") {}
};

/// One direction of a serial line. Bytes become readable after their frame
/// time has elapsed; order is FIFO and nothing is dropped.
class Link {
public:
    explicit Link(LinkConfig config);

    /// Byte k of the burst is readable at now + ceil((k+1) * bits * 1000 / baud).
    /// Ready times never run backwards, so a burst queued behind a slower one
    /// waits for it.
    void write(std::string_view bytes, LogicalMs now);

    /// Drains every byte with ready-at <= now.
    std::string read(LogicalMs now);

    void close() { open_ = false; }
    bool is_open() const { return open_; }

    /// Frame time of an n-byte burst on an idle line, in whole ms (rounded up).
    LogicalMs burst_latency(std::size_t n) const;

    std::size_t pending() const { return queue_.size(); }
    std::optional<LogicalMs> next_ready_at() const;
    std::uint64_t total_written() const { return written_; }
    std::uint64_t total_read() const { return read_; }
    const LinkConfig& config() const { return config_; }

private:
    struct Pending {
        LogicalMs ready_at;
        char byte;
    };

    void require_open() const;

    LinkConfig config_;
    std::deque<Pending> queue_;
    LogicalMs tail_ready_at_ = 0;
    std::uint64_t written_ = 0;
    std::uint64_t read_ = 0;
    bool open_ = true;
};

/// A full-duplex port. The host is the server computer side.
struct SerialPort {
    explicit SerialPort(const LinkConfig& config) : to_device(config), to_host(config) {}

    Link to_device;
    Link to_host;
};

/// Named ports, looked up by identity ("COM1", "COM15").
class PortRegistry {
public:
    SerialPort& open(const LinkConfig& config);
    /// Throws std::out_of_range for unknown names.
    SerialPort& at(std::string_view name);
    const SerialPort& at(std::string_view name) const;
    bool contains(std::string_view name) const;

private:
    std::map<std::string, SerialPort, std::less<>> ports_;
};

/// Registry holding COM1 at 115200 8N1 and COM15 at 9600 8N1.
PortRegistry standard_ports();

}  // namespace firesim::serial
