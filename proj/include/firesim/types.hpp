#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string_view>

namespace firesim {

/// Simulated time in milliseconds. The logical clock is the only time source.
using LogicalMs = std::int64_t;

/// The four sensors wired to the microcontroller.
enum class SensorId : std::uint8_t { Temp1, Temp2, Smoke1, Smoke2 };

inline constexpr std::array<SensorId, 4> kAllSensors{SensorId::Temp1, SensorId::Temp2,
                                                     SensorId::Smoke1, SensorId::Smoke2};

constexpr std::size_t index_of(SensorId s) { return static_cast<std::size_t>(s); }

constexpr bool is_temperature(SensorId s) {
    return s == SensorId::Temp1 || s == SensorId::Temp2;
}

constexpr std::string_view to_string(SensorId s) {
    switch (s) {
        case SensorId::Temp1: return "Temp1";
        case SensorId::Temp2: return "Temp2";
        case SensorId::Smoke1: return "Smoke1";
        case SensorId::Smoke2: return "Smoke2";
    }
    return "?";
}

constexpr std::optional<SensorId> sensor_from_string(std::string_view name) {
    for (SensorId s : kAllSensors) {
        if (to_string(s) == name) return s;
    }
    return std::nullopt;
}

}  // namespace firesim
