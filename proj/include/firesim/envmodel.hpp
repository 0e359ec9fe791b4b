#pragma once

#include <array>

namespace firesim::env {

/// Operating-point constants of the smoke detector's LDR divider and
/// non-inverting amplifier stage.
struct SmokeChainParams {
    double r_dark = 430e6;   ///< LDR resistance with no light [Ohm]
    double r_bright = 11e3;  ///< LDR resistance in bright light [Ohm]
    double r_fixed = 9e6;    ///< series resistor of the divider [Ohm]
    double vcc = 5.0;        ///< divider supply [V]
    double gain = 1.0 + 0.5e3 / 1.0e3;  ///< 1 + Rf/Rg
    double v_sat = 5.5;      ///< amplifier output rail [V]
    double k_scatter = 0.0;  ///< light fraction reaching the LDR at full smoke density
};

/// Chain output targeted at smoke density 1.0: one 10-bit ADC step below the
/// 3.0 V alarm anchor, so full density reads strictly under the default
/// smoke threshold code.
inline constexpr double kHeavySmokeVolts = 3.0 - 5.0 / 1024.0;

/// Solves the divider/gain equations for the LDR resistance giving
/// `target_volts` at the amplifier output, then inverts the log-linear LDR
/// model for the light fraction. `params.k_scatter` is ignored.
double calibrate_k_scatter(const SmokeChainParams& params, double target_volts);

/// Board component values with k_scatter calibrated to kHeavySmokeVolts.
const SmokeChainParams& default_smoke_chain();

inline constexpr double kLm35VoltsPerCelsius = 0.010;
inline constexpr double kMinValidCelsius = -40.0;
inline constexpr double kMaxValidCelsius = 150.0;

/// Ideal LM35: 10 mV/degC, 0 V at 0 degC, clamped to [0, v_sat].
double lm35_output(double celsius, double v_sat = 5.5);

double ldr_resistance(double light_fraction, const SmokeChainParams& p = default_smoke_chain());
double scatter_fraction(double density, const SmokeChainParams& p = default_smoke_chain());
double divider_voltage(double r_ldr, const SmokeChainParams& p = default_smoke_chain());
double amplify(double v, const SmokeChainParams& p = default_smoke_chain());

/// amplify(divider_voltage(ldr_resistance(scatter_fraction(density))))
double smoke_chain_output(double density, const SmokeChainParams& p = default_smoke_chain());

/// Ground truth the transducers observe. Setters enforce the model's
/// validity ranges and throw std::domain_error outside them.
class EnvState {
public:
    EnvState() = default;
    EnvState(std::array<double, 2> temp_c, std::array<double, 2> smoke_density);

    void set_temp(int sensor, double celsius);      // sensor is 1 or 2
    void set_smoke(int sensor, double density);     // sensor is 1 or 2

    const std::array<double, 2>& temp_c() const { return temp_c_; }
    const std::array<double, 2>& smoke_density() const { return smoke_density_; }

    /// Voltages presented to ADC0..ADC3 (Temp1, Temp2, Smoke1, Smoke2).
    std::array<double, 4> sensor_voltages(const SmokeChainParams& p = default_smoke_chain()) const;

private:
    std::array<double, 2> temp_c_{25.0, 25.0};
    std::array<double, 2> smoke_density_{0.0, 0.0};
};

}  // namespace firesim::env
