#include "firesim/firmware.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace firesim::fw {

AdcCode adc_sample(double volts) {
    if (!(volts >= 0.0)) {
        throw std::domain_error("ADC input must be non-negative, got " + std::to_string(volts));
    }
    const double scaled = std::floor(volts * kAdcSteps / kAdcVref);
    if (scaled >= kAdcMax) return AdcCode{kAdcMax};
    return AdcCode{static_cast<int>(scaled)};
}

std::string_view to_string(SmokeClass c) {
    switch (c) {
        case SmokeClass::High: return "High";
        case SmokeClass::Medium: return "Medium";
        case SmokeClass::Low: return "Low";
    }
    return "?";
}

std::optional<SmokeClass> smoke_class_from_string(std::string_view name) {
    for (SmokeClass c : {SmokeClass::High, SmokeClass::Medium, SmokeClass::Low}) {
        if (to_string(c) == name) return c;
    }
    return std::nullopt;
}

double smoke_class_volts(SmokeClass c) {
    switch (c) {
        case SmokeClass::High: return 3.0;
        case SmokeClass::Medium: return 3.5;
        case SmokeClass::Low: return 4.0;
    }
    return 3.0;
}

std::string to_string(const ThresholdValue& v) {
    if (const int* c = std::get_if<int>(&v)) return std::to_string(*c);
    return std::string(to_string(std::get<SmokeClass>(v)));
}

ThresholdValue threshold_of(const ThresholdSetting& t, SensorId s) {
    switch (s) {
        case SensorId::Temp1: return t.temp_c[0];
        case SensorId::Temp2: return t.temp_c[1];
        case SensorId::Smoke1: return t.smoke[0];
        case SensorId::Smoke2: return t.smoke[1];
    }
    return 0;
}

void apply(ThresholdSetting& t, const ThresholdChange& change) {
    switch (change.sensor) {
        case SensorId::Temp1: t.temp_c[0] = std::get<int>(change.value); break;
        case SensorId::Temp2: t.temp_c[1] = std::get<int>(change.value); break;
        case SensorId::Smoke1: t.smoke[0] = std::get<SmokeClass>(change.value); break;
        case SensorId::Smoke2: t.smoke[1] = std::get<SmokeClass>(change.value); break;
    }
}

AdcCode threshold_code(SensorId sensor, const ThresholdSetting& thresholds) {
    const ThresholdValue v = threshold_of(thresholds, sensor);
    if (is_temperature(sensor)) {
        return adc_sample(0.010 * std::get<int>(v));
    }
    return adc_sample(smoke_class_volts(std::get<SmokeClass>(v)));
}

char alert_byte(SensorId s) { return static_cast<char>('1' + index_of(s)); }

std::optional<SensorId> sensor_for_alert_byte(char b) {
    if (b < '1' || b > '4') return std::nullopt;
    return kAllSensors[static_cast<std::size_t>(b - '1')];
}

std::optional<ThresholdChange> command_effect(char c) {
    // A..E temp1, F..J temp2 (35..75 degC), K..M smoke1, N..P smoke2 (High, Medium, Low).
    if (c >= 'A' && c <= 'J') {
        const int k = c - 'A';
        return ThresholdChange{k < 5 ? SensorId::Temp1 : SensorId::Temp2,
                               kTempThresholdsC[static_cast<std::size_t>(k % 5)]};
    }
    if (c >= 'K' && c <= 'P') {
        const int k = c - 'K';
        return ThresholdChange{k < 3 ? SensorId::Smoke1 : SensorId::Smoke2,
                               static_cast<SmokeClass>(k % 3)};
    }
    return std::nullopt;
}

PasswordLatch::PasswordLatch(int bits) {
    if (bits < 0 || bits > 0x7F) {
        throw std::domain_error("password latch is 7 bits, got " + std::to_string(bits));
    }
    bits_ = static_cast<std::uint8_t>(bits);
}

SensorId selected_sensor(SensorSelect select) {
    return kAllSensors[(select.button2 ? 2u : 0u) + (select.button1 ? 1u : 0u)];
}

std::optional<RangeButton> range_button_from_string(std::string_view name) {
    if (name.size() == 3 && name[0] == 'P' && name[1] == 'B' && name[2] >= '0' && name[2] <= '7') {
        return static_cast<RangeButton>(name[2] - '0');
    }
    return std::nullopt;
}

std::string_view to_string(RangeButton b) {
    static constexpr std::array<std::string_view, 8> names{"PB0", "PB1", "PB2", "PB3",
                                                           "PB4", "PB5", "PB6", "PB7"};
    return names[static_cast<std::size_t>(b)];
}

std::optional<ThresholdChange> range_effect(SensorId sensor, RangeButton button) {
    const auto pin = static_cast<std::size_t>(button);
    if (is_temperature(sensor)) {
        if (pin > 4) return std::nullopt;
        return ThresholdChange{sensor, kTempThresholdsC[pin]};
    }
    if (pin < 5) return std::nullopt;
    return ThresholdChange{sensor, static_cast<SmokeClass>(pin - 5)};
}

TickResult Firmware::tick(LogicalMs now, const std::array<double, 4>& inputs) {
    TickResult out;
    if (state_.pw_mode_until && now >= *state_.pw_mode_until) {
        state_.pw_mode_until.reset();
        state_.leds.mode = false;
        out.password_window_expired = true;
    }
    for (SensorId s : kAllSensors) {
        const AdcCode code = adc_sample(inputs[index_of(s)]);
        state_.adc_codes[index_of(s)] = code;
        const AdcCode limit = threshold_code(s, state_.thresholds);
        const bool surpassed = is_temperature(s) ? code >= limit : code < limit;
        if (surpassed) out.alert_bytes.push_back(alert_byte(s));
    }
    return out;
}

bool Firmware::press_password_mode(LogicalMs now, PasswordLatch latch) {
    if (latch != state_.stored_password) return false;
    state_.pw_mode_until = now + kPasswordWindowMs;
    state_.leds.mode = true;
    return true;
}

bool Firmware::commit_new_password(LogicalMs now, PasswordLatch latch) {
    if (state_.pw_mode_until && now < *state_.pw_mode_until) {
        state_.stored_password = latch;
        state_.pw_mode_until.reset();
        state_.leds = Leds{.mode = false, .fail = false, .ok = true};
        return true;
    }
    state_.leds.fail = true;
    state_.leds.ok = false;
    return false;
}

LocalThresholdResult Firmware::set_threshold_local(PasswordLatch latch, SensorSelect select,
                                                   RangeButton button) {
    if (latch != state_.stored_password) {
        return {LocalThresholdStatus::WrongPassword, std::nullopt};
    }
    auto change = range_effect(selected_sensor(select), button);
    if (!change) return {LocalThresholdStatus::KindMismatch, std::nullopt};
    apply(state_.thresholds, *change);
    return {LocalThresholdStatus::Applied, change};
}

std::optional<ThresholdChange> Firmware::handle_serial_byte(char b) {
    auto change = command_effect(b);
    if (change) apply(state_.thresholds, *change);
    return change;
}

}  // namespace firesim::fw
