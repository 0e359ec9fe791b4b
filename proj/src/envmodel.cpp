#include "firesim/envmodel.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace firesim::env {

namespace {

void require_unit_interval(double x, const char* what) {
    if (!(x >= 0.0 && x <= 1.0)) {
        throw std::domain_error(std::string(what) + " must lie in [0, 1], got " + std::to_string(x));
    }
}

int checked_sensor(int sensor) {
    if (sensor != 1 && sensor != 2) {
        throw std::domain_error("sensor index must be 1 or 2, got " + std::to_string(sensor));
    }
    return sensor - 1;
}

}  // namespace

double calibrate_k_scatter(const SmokeChainParams& p, double target_volts) {
    // gain * vcc * R / (R + r_fixed) = target  =>  R = r_fixed * t / (gain * vcc - t)
    const double full_scale = p.gain * p.vcc;
    if (!(target_volts > 0.0 && target_volts < full_scale)) {
        throw std::domain_error("calibration target outside the amplifier's linear range");
    }
    const double r = p.r_fixed * target_volts / (full_scale - target_volts);
    const double span = std::log10(p.r_dark) - std::log10(p.r_bright);
    return (std::log10(p.r_dark) - std::log10(r)) / span;
}

const SmokeChainParams& default_smoke_chain() {
    static const SmokeChainParams params = [] {
        SmokeChainParams p;
        p.k_scatter = calibrate_k_scatter(p, kHeavySmokeVolts);
        return p;
    }();
    return params;
}

double lm35_output(double celsius, double v_sat) {
    return std::clamp(kLm35VoltsPerCelsius * celsius, 0.0, v_sat);
}

double ldr_resistance(double light_fraction, const SmokeChainParams& p) {
    require_unit_interval(light_fraction, "light fraction");
    // Endpoints are returned exactly rather than through pow(10, log10(x)).
    if (light_fraction == 0.0) return p.r_dark;
    if (light_fraction == 1.0) return p.r_bright;
    const double log_dark = std::log10(p.r_dark);
    const double log_bright = std::log10(p.r_bright);
    return std::pow(10.0, log_dark - light_fraction * (log_dark - log_bright));
}

double scatter_fraction(double density, const SmokeChainParams& p) {
    require_unit_interval(density, "smoke density");
    return p.k_scatter * density;
}

double divider_voltage(double r_ldr, const SmokeChainParams& p) {
    if (!(r_ldr > 0.0)) {
        throw std::domain_error("LDR resistance must be positive");
    }
    return p.vcc * r_ldr / (r_ldr + p.r_fixed);
}

double amplify(double v, const SmokeChainParams& p) {
    return std::min(p.gain * v, p.v_sat);
}

double smoke_chain_output(double density, const SmokeChainParams& p) {
    return amplify(divider_voltage(ldr_resistance(scatter_fraction(density, p), p), p), p);
}

EnvState::EnvState(std::array<double, 2> temp_c, std::array<double, 2> smoke_density) {
    for (int i = 1; i <= 2; ++i) {
        set_temp(i, temp_c[i - 1]);
        set_smoke(i, smoke_density[i - 1]);
    }
}

void EnvState::set_temp(int sensor, double celsius) {
    const int i = checked_sensor(sensor);
    if (!(celsius >= kMinValidCelsius && celsius <= kMaxValidCelsius)) {
        throw std::domain_error("temperature outside model range [-40, 150] degC: " +
                                std::to_string(celsius));
    }
    temp_c_[i] = celsius;
}

void EnvState::set_smoke(int sensor, double density) {
    const int i = checked_sensor(sensor);
    require_unit_interval(density, "smoke density");
    smoke_density_[i] = density;
}

std::array<double, 4> EnvState::sensor_voltages(const SmokeChainParams& p) const {
    return {lm35_output(temp_c_[0], p.v_sat), lm35_output(temp_c_[1], p.v_sat),
            smoke_chain_output(smoke_density_[0], p), smoke_chain_output(smoke_density_[1], p)};
}

}  // namespace firesim::env
