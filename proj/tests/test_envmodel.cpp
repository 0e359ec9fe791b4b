#include <gtest/gtest.h>

#include <random>
#include <stdexcept>

#include "firesim/envmodel.hpp"
#include "firesim/firmware.hpp"
#include "oracles.hpp"

using namespace firesim::env;

TEST(Lm35, LinearTransfer) {
    EXPECT_DOUBLE_EQ(lm35_output(0.0), 0.0);
    EXPECT_NEAR(lm35_output(55.0), 0.550, 1e-12);
    EXPECT_NEAR(lm35_output(100.0), 1.000, 1e-12);
}

TEST(Lm35, ClampsOutsideRails) {
    EXPECT_DOUBLE_EQ(lm35_output(-40.0), 0.0);
    EXPECT_DOUBLE_EQ(lm35_output(1000.0), 5.5);
}

TEST(Ldr, EndpointsAreExact) {
    EXPECT_EQ(ldr_resistance(0.0), 430e6);
    EXPECT_EQ(ldr_resistance(1.0), 11e3);
}

TEST(Ldr, MidpointIsGeometricMean) {
    EXPECT_NEAR(ldr_resistance(0.5), 2.1748563e6, 1.0);
    EXPECT_NEAR(ldr_resistance(0.5) / std::sqrt(430e6 * 11e3), 1.0, 1e-12);
}

TEST(Ldr, MonotoneNonIncreasing) {
    double prev = ldr_resistance(0.0);
    for (int i = 1; i <= 1000; ++i) {
        const double r = ldr_resistance(i / 1000.0);
        EXPECT_LE(r, prev);
        prev = r;
    }
}

TEST(Ldr, RejectsOutOfRange) {
    EXPECT_THROW(ldr_resistance(-0.01), std::domain_error);
    EXPECT_THROW(ldr_resistance(1.01), std::domain_error);
    EXPECT_THROW(ldr_resistance(std::nan("")), std::domain_error);
}

TEST(Scatter, LinearInDensity) {
    const double k = default_smoke_chain().k_scatter;
    EXPECT_EQ(scatter_fraction(0.0), 0.0);
    EXPECT_DOUBLE_EQ(scatter_fraction(1.0), k);
    EXPECT_DOUBLE_EQ(scatter_fraction(0.5), k / 2);
    EXPECT_THROW(scatter_fraction(1.5), std::domain_error);
}

TEST(Scatter, CalibrationMatchesBisectionOracle) {
    // Independent route: bisection for R on the divider/gain equations, then
    // invert the log-linear LDR model (natural logs here, log10 in the library).
    const double r = oracle::resistance_for_output(kHeavySmokeVolts);
    const double k = oracle::light_fraction_for_resistance(r);
    EXPECT_NEAR(default_smoke_chain().k_scatter, k, 1e-9);
    EXPECT_NEAR(k, 0.404282446, 1e-8);
}

TEST(Scatter, ExactAnchorCalibrationGivesPublishedConstant) {
    // Solving for exactly 3.0 V gives R = 6 MOhm and k = 0.40403.
    SmokeChainParams p;
    EXPECT_NEAR(calibrate_k_scatter(p, 3.0), 0.4040258258, 1e-9);
    EXPECT_NEAR(oracle::resistance_for_output(3.0), 6e6, 1e-3);
    EXPECT_THROW(calibrate_k_scatter(p, 7.5), std::domain_error);
}

TEST(Divider, OperatingPoints) {
    EXPECT_DOUBLE_EQ(divider_voltage(9e6), 2.5);
    EXPECT_NEAR(divider_voltage(430e6), 4.8974943052, 1e-9);
    EXPECT_NEAR(divider_voltage(11e3), 0.0061036511, 1e-9);
    EXPECT_THROW(divider_voltage(0.0), std::domain_error);
    EXPECT_THROW(divider_voltage(-1.0), std::domain_error);
}

TEST(Divider, ConservesSupply) {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> log_r(std::log10(11e3), std::log10(430e6));
    for (int i = 0; i < 1000; ++i) {
        const double r = std::pow(10.0, log_r(rng));
        EXPECT_NEAR(divider_voltage(r) + oracle::fixed_resistor_drop(r), 5.0, 1e-9);
    }
}

TEST(Amplifier, GainAndSaturation) {
    EXPECT_EQ(amplify(1.0), 1.5);
    EXPECT_EQ(amplify(0.0), 0.0);
    EXPECT_EQ(amplify(4.8975), 5.5);
    for (int i = 0; i <= 1000; ++i) {
        const double v = 5.0 * i / 1000.0;
        const double out = amplify(v);
        EXPECT_LE(out, 5.5);
        if (1.5 * v <= 5.5) EXPECT_EQ(out, 1.5 * v);
    }
}

TEST(SmokeChain, OperatingPoints) {
    EXPECT_EQ(smoke_chain_output(0.0), 5.5);
    const double heavy = smoke_chain_output(1.0);
    EXPECT_GE(heavy, 2.95);
    EXPECT_LE(heavy, 3.05);
    EXPECT_NEAR(heavy, kHeavySmokeVolts, 1e-9);
}

TEST(SmokeChain, FullDensityReadsBelowDefaultThreshold) {
    using namespace firesim::fw;
    EXPECT_EQ(adc_sample(smoke_chain_output(1.0)).value, 613);
    EXPECT_LT(adc_sample(smoke_chain_output(1.0)), threshold_code(firesim::SensorId::Smoke1, {}));
}

TEST(SmokeChain, EqualResistancePoint) {
    // The density whose light fraction puts the LDR at 9 MOhm yields 2.5 V * 1.5.
    const double light = oracle::light_fraction_for_resistance(9e6);
    const double density = light / default_smoke_chain().k_scatter;
    ASSERT_GT(density, 0.0);
    ASSERT_LT(density, 1.0);
    EXPECT_NEAR(smoke_chain_output(density), 3.75, 1e-9);
}

TEST(SmokeChain, MonotoneAndBounded) {
    double prev = smoke_chain_output(0.0);
    for (int i = 0; i <= 100; ++i) {
        const double v = smoke_chain_output(i / 100.0);
        EXPECT_LE(v, prev);
        EXPECT_GE(v, 0.0);
        EXPECT_LE(v, 5.5);
        prev = v;
    }
}

TEST(EnvState, ValidatesRanges) {
    EnvState env;
    env.set_temp(1, 150.0);
    env.set_temp(2, -40.0);
    EXPECT_THROW(env.set_temp(1, 150.5), std::domain_error);
    EXPECT_THROW(env.set_temp(3, 20.0), std::domain_error);
    env.set_smoke(2, 1.0);
    EXPECT_THROW(env.set_smoke(1, -0.1), std::domain_error);
    EXPECT_THROW(env.set_smoke(0, 0.5), std::domain_error);
}

TEST(EnvState, AmbientVoltages) {
    const EnvState env;
    const auto v = env.sensor_voltages();
    EXPECT_NEAR(v[0], 0.25, 1e-12);
    EXPECT_NEAR(v[1], 0.25, 1e-12);
    EXPECT_EQ(v[2], 5.5);
    EXPECT_EQ(v[3], 5.5);
}
