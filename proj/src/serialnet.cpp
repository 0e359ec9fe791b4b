#include "firesim/serialnet.hpp"

#include <algorithm>

namespace firesim::serial {

Link::Link(LinkConfig config) : config_(std::move(config)) {
    if (config_.baud <= 0) {
        throw std::invalid_argument("baud rate must be positive for link " + config_.name);
    }
}

LogicalMs Link::burst_latency(std::size_t n) const {
    const auto bits = static_cast<LogicalMs>(n) * config_.frame.bits_per_frame() * 1000;
    return (bits + config_.baud - 1) / config_.baud;
}

void Link::write(std::string_view bytes, LogicalMs now) {
    require_open();
    for (std::size_t k = 0; k < bytes.size(); ++k) {
        const LogicalMs ready = std::max(now + burst_latency(k + 1), tail_ready_at_);
        queue_.push_back({ready, bytes[k]});
        tail_ready_at_ = ready;
    }
    written_ += bytes.size();
}

std::string Link::read(LogicalMs now) {
    require_open();
    std::string out;
    while (!queue_.empty() && queue_.front().ready_at <= now) {
        out.push_back(queue_.front().byte);
        queue_.pop_front();
    }
    read_ += out.size();
    return out;
}

std::optional<LogicalMs> Link::next_ready_at() const {
    if (queue_.empty()) return std::nullopt;
    return queue_.front().ready_at;
}

void Link::require_open() const {
    if (!open_) throw LinkClosedError(config_.name);
}

SerialPort& PortRegistry::open(const LinkConfig& config) {
    auto [it, inserted] = ports_.try_emplace(config.name, config);
    if (!inserted) {
        throw std::invalid_argument("port " + config.name + " already open");
    }
    return it->second;
}

SerialPort& PortRegistry::at(std::string_view name) {
    auto it = ports_.find(name);
    if (it == ports_.end()) throw std::out_of_range("no serial port named " + std::string(name));
    return it->second;
}

const SerialPort& PortRegistry::at(std::string_view name) const {
    auto it = ports_.find(name);
    if (it == ports_.end()) throw std::out_of_range("no serial port named " + std::string(name));
    return it->second;
}

bool PortRegistry::contains(std::string_view name) const { return ports_.find(name) != ports_.end(); }

PortRegistry standard_ports() {
    PortRegistry reg;
    reg.open(LinkConfig{std::string(kMcuPortName), kMcuBaud, {}});
    reg.open(LinkConfig{std::string(kModemPortName), kModemBaud, {}});
    return reg;
}

}  // namespace firesim::serial
