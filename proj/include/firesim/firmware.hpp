#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <variant>

#include "firesim/types.hpp"

namespace firesim::fw {

// ATmega32 converter and board constants.
inline constexpr double kAdcVref = 5.0;
inline constexpr int kAdcSteps = 1024;
inline constexpr int kAdcMax = kAdcSteps - 1;
inline constexpr double kCrystalHz = 11.0592e6;  // recorded only, no clock model

inline constexpr LogicalMs kSamplePeriodMs = 10;
inline constexpr LogicalMs kPasswordWindowMs = 10 * 60 * 1000;

/// ADC input channel per sensor (ADC0..ADC3) and the matching DIP-40 pin.
constexpr int adc_channel(SensorId s) { return static_cast<int>(index_of(s)); }
constexpr int adc_pin(SensorId s) { return 40 - adc_channel(s); }

struct AdcCode {
    int value = 0;
    friend auto operator<=>(const AdcCode&, const AdcCode&) = default;
};

/// floor(v * 1024 / Vref), clamped to 1023. Throws std::domain_error for v < 0.
AdcCode adc_sample(double volts);

enum class SmokeClass : std::uint8_t { High, Medium, Low };

std::string_view to_string(SmokeClass c);
std::optional<SmokeClass> smoke_class_from_string(std::string_view name);

/// Alarm voltage for a smoke density class; readings below it raise an alert.
double smoke_class_volts(SmokeClass c);

inline constexpr std::array<int, 5> kTempThresholdsC{35, 45, 55, 65, 75};

struct ThresholdSetting {
    std::array<int, 2> temp_c{55, 55};
    std::array<SmokeClass, 2> smoke{SmokeClass::High, SmokeClass::High};

    friend bool operator==(const ThresholdSetting&, const ThresholdSetting&) = default;
};

/// A threshold value for one sensor: degrees Celsius or a smoke density class.
using ThresholdValue = std::variant<int, SmokeClass>;

struct ThresholdChange {
    SensorId sensor;
    ThresholdValue value;

    friend bool operator==(const ThresholdChange&, const ThresholdChange&) = default;
};

std::string to_string(const ThresholdValue& v);
ThresholdValue threshold_of(const ThresholdSetting& t, SensorId s);
void apply(ThresholdSetting& t, const ThresholdChange& change);

AdcCode threshold_code(SensorId sensor, const ThresholdSetting& thresholds);

/// Alert characters streamed to the server: '1'..'4' for Temp1..Smoke2.
char alert_byte(SensorId s);
std::optional<SensorId> sensor_for_alert_byte(char b);

/// Remote command characters 'A'..'P' and their threshold effect.
std::optional<ThresholdChange> command_effect(char c);

/// 7-bit password formed by the PC0..PC6 buttons (pressed = 1).
class PasswordLatch {
public:
    constexpr PasswordLatch() = default;
    /// Throws std::domain_error unless 0 <= bits <= 127.
    explicit PasswordLatch(int bits);

    constexpr std::uint8_t bits() const { return bits_; }
    friend bool operator==(PasswordLatch, PasswordLatch) = default;

private:
    std::uint8_t bits_ = 0;
};

inline const PasswordLatch kDefaultPassword{0x3F};

/// The two sensor-select buttons (button 2 is the high bit).
struct SensorSelect {
    bool button2 = false;
    bool button1 = false;
};

SensorId selected_sensor(SensorSelect select);

/// Threshold-range buttons on port B. PB0..PB4 are temperature ranges,
/// PB5..PB7 smoke density classes.
enum class RangeButton : std::uint8_t { PB0, PB1, PB2, PB3, PB4, PB5, PB6, PB7 };

std::optional<RangeButton> range_button_from_string(std::string_view name);
std::string_view to_string(RangeButton b);

/// Effect of a range button on a sensor; nullopt when the button belongs to
/// the other sensor kind.
std::optional<ThresholdChange> range_effect(SensorId sensor, RangeButton button);

struct Leds {
    bool mode = false;  ///< pin 21: password change mode
    bool fail = false;  ///< pin 19: password not changed
    bool ok = false;    ///< pin 20: password changed

    friend bool operator==(const Leds&, const Leds&) = default;
};

struct FirmwareState {
    PasswordLatch stored_password = kDefaultPassword;
    ThresholdSetting thresholds;
    std::optional<LogicalMs> pw_mode_until;
    Leds leds;
    std::array<AdcCode, 4> adc_codes{};
};

struct TickResult {
    std::string alert_bytes;
    bool password_window_expired = false;
};

enum class LocalThresholdStatus { Applied, WrongPassword, KindMismatch };

struct LocalThresholdResult {
    LocalThresholdStatus status;
    std::optional<ThresholdChange> change;
};

/// Host model of the microcontroller program: sampling loop, alert
/// emission, password and threshold buttons, serial command handling.
/// Every operation is a deterministic function of state and arguments.
class Firmware {
public:
    Firmware() = default;
    explicit Firmware(FirmwareState initial) : state_(initial) {}

    /// One pass of the main loop. Emits the alert byte of every sensor whose
    /// threshold is surpassed (temperature: code >= threshold, smoke: code <
    /// threshold). Emission carries no memory between ticks.
    TickResult tick(LogicalMs now, const std::array<double, 4>& inputs);

    /// Returns true if the latch matched and the 10-minute window (re)opened.
    bool press_password_mode(LogicalMs now, PasswordLatch latch);

    /// Returns true if the new password was stored.
    bool commit_new_password(LogicalMs now, PasswordLatch latch);

    LocalThresholdResult set_threshold_local(PasswordLatch latch, SensorSelect select,
                                             RangeButton button);

    /// Applies 'A'..'P'; any other byte is ignored and yields nullopt.
    std::optional<ThresholdChange> handle_serial_byte(char b);

    const FirmwareState& state() const { return state_; }

private:
    FirmwareState state_;
};

}  // namespace firesim::fw
