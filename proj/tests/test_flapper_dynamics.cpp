#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "flapmav/flapper_dynamics.hpp"

using namespace flapmav;

namespace {

SimConfig free_oscillator(double f) {
    SimConfig cfg;
    cfg.design.fWing = f;
    cfg.aeroEnabled = false;
    cfg.pidEnabled = false;
    cfg.membraneEnabled = false;
    SystemState s;
    for (int w = 0; w < kWings; ++w) s.phi[w] = -spring_offset(w);
    s.phi[0] += 0.1;
    s.phi[3] += 0.05;
    cfg.initialState = s;
    return cfg;
}

// Frequency from upward zero crossings of the first wing's flapping angle.
double measured_frequency(const SimConfig& cfg, int cycles) {
    const FlapperSystem sys(cfg);
    FlapperSystem::Vec x = sys.initial_vector();
    const int steps = cycles * cfg.stepsPerCycle;
    std::vector<double> up;
    double prev = x[FlapperSystem::idx(0, 0)];
    for (int k = 0; k < steps; ++k) {
        const double t = k * sys.dt();
        sys.step(x, t);
        const double now = x[FlapperSystem::idx(0, 0)];
        if (prev < 0.0 && now >= 0.0) up.push_back(t + sys.dt() * (-prev) / (now - prev));
        prev = now;
    }
    if (up.size() < 2) return 0.0;
    return (up.size() - 1) / (up.back() - up.front());
}

} // namespace

TEST(WingLayout, MirroringAndPartners) {
    EXPECT_FALSE(is_mirrored(0));
    EXPECT_TRUE(is_mirrored(1));
    EXPECT_TRUE(is_mirrored(2));
    EXPECT_FALSE(is_mirrored(3));
    EXPECT_EQ(tandem_partner(0), 3);
    EXPECT_EQ(tandem_partner(1), 2);
    EXPECT_TRUE(is_fore(0) && is_fore(1) && !is_fore(2) && !is_fore(3));
}

TEST(Control, CpgAndPid) {
    EXPECT_DOUBLE_EQ(cpg_target(0.0, 1.2, 30.0, 0.0), 0.0);
    EXPECT_NEAR(cpg_target(1.0 / 120.0, 1.2, 30.0, 0.0), 1.2, 1e-12);
    EXPECT_NEAR(cpg_target(0.0, 1.2, 30.0, kPi / 2.0), 1.2, 1e-12);
    EXPECT_THROW(cpg_target(0.0, 1.0, 0.0, 0.0), DomainError);
    const PidGains g{2.0, 3.0, 5.0, 10.0};
    EXPECT_DOUBLE_EQ(pid_torque(1.0, 1.0, 1.0, g), 10.0);
    EXPECT_DOUBLE_EQ(pid_torque(0.0, 0.0, 0.0, g), 0.0);
}

TEST(Accelerations, SpringOnlyMatchesCondensedInertia) {
    DriveInertia J{4e-7, 3e-8, 2.4e-7, 5e-8};
    SystemState s;
    for (int w = 0; w < kWings; ++w) s.phi[w] = 0.2 - spring_offset(w);
    std::array<double, kWings> kA{};
    kA.fill(0.05);
    const Accelerations a = accelerations(s, WingTorques{}, J, kA);
    const double jEff = J.jMotor + J.jZZ - J.jYZ * J.jYZ / J.jYY;
    for (int w = 0; w < kWings; ++w) {
        EXPECT_NEAR(a.phiDdot[w], -0.05 * 0.2 / jEff, 1e-9 * std::abs(a.phiDdot[w]));
        EXPECT_NEAR(a.thetaDdot[w], -J.jYZ / J.jYY * a.phiDdot[w], 1e-9 * std::abs(a.thetaDdot[w]));
    }
}

TEST(Accelerations, SingularInertiaThrows) {
    DriveInertia J{0.0, 1.0, 1.0, 1.0};
    std::array<double, kWings> kA{};
    EXPECT_THROW(accelerations(SystemState{}, WingTorques{}, J, kA), SimulationError);
}

class Resonance : public ::testing::TestWithParam<double> {};

TEST_P(Resonance, FreeOscillationAtRequestedFrequency) {
    const double f = GetParam();
    const double measured = measured_frequency(free_oscillator(f), 10);
    EXPECT_NEAR(measured / f, 1.0, 0.02);
}

INSTANTIATE_TEST_SUITE_P(Frequencies, Resonance, ::testing::Values(20.0, 30.0, 40.0));

TEST(Integrator, EnergyConservedWithoutDissipation) {
    const SimConfig cfg = free_oscillator(34.0);
    const FlapperSystem sys(cfg);
    FlapperSystem::Vec x = sys.initial_vector();
    const double e0 = sys.energy(x);
    ASSERT_GT(e0, 0.0);
    const int cycles = 10;
    double worst = 0.0;
    for (int c = 0; c < cycles; ++c) {
        const double before = sys.energy(x);
        for (int k = 0; k < cfg.stepsPerCycle; ++k) sys.step(x, (c * cfg.stepsPerCycle + k) * sys.dt());
        worst = std::max(worst, std::abs(sys.energy(x) - before) / e0);
    }
    EXPECT_LT(worst, 1e-3);
}

TEST(Integrator, HalvingStepChangesLiftBelowOnePercent) {
    SimConfig coarse;
    SimConfig fine;
    fine.stepsPerCycle = 2 * coarse.stepsPerCycle;
    const SimResult a = simulate(coarse);
    const SimResult b = simulate(fine);
    ASSERT_TRUE(a.settled && b.settled);
    EXPECT_LT(std::abs(a.lTakeoff / b.lTakeoff - 1.0), 0.01);
}

TEST(Simulation, DefaultDesignSettlesWithPositiveLift) {
    const SimResult r = simulate(SimConfig{});
    EXPECT_TRUE(r.settled);
    EXPECT_GT(r.lTakeoff, 0.0);
    EXPECT_GT(r.totalElectricalPower(), 0.0);
    EXPECT_GE(r.cyclesUsed, SimConfig{}.minCycles);
    EXPECT_NEAR(r.achievedFrequency / SimConfig{}.design.fWing, 1.0, 0.02);
}

TEST(Simulation, BitReproducible) {
    const SimResult a = simulate(SimConfig{});
    const SimResult b = simulate(SimConfig{});
    EXPECT_EQ(a.lTakeoff, b.lTakeoff);
    EXPECT_EQ(a.meanElectricalPower, b.meanElectricalPower);
    EXPECT_EQ(a.cyclesUsed, b.cyclesUsed);
}

TEST(Simulation, LeftRightWingsAreSymmetric) {
    const SimResult r = simulate(SimConfig{});
    EXPECT_NEAR(r.meanLiftPerWing[0], r.meanLiftPerWing[1], 1e-9 * std::abs(r.meanLiftPerWing[0]));
    EXPECT_NEAR(r.meanLiftPerWing[3], r.meanLiftPerWing[2], 1e-9 * std::abs(r.meanLiftPerWing[3]));
    EXPECT_NEAR(r.meanElectricalPower[0], r.meanElectricalPower[1], 1e-9 * r.meanElectricalPower[0]);
}

TEST(Simulation, AeroDisabledGivesNoLift) {
    SimConfig cfg;
    cfg.aeroEnabled = false;
    cfg.maxCycles = 5;
    const SimResult r = simulate(cfg);
    EXPECT_EQ(r.lTakeoff, 0.0);
}

TEST(Simulation, ObserverSeesEveryStep) {
    SimConfig cfg;
    cfg.stepsPerCycle = 200;
    long count = 0;
    const SimResult r = simulate(cfg, [&](const StepSample&) { ++count; });
    EXPECT_EQ(count, static_cast<long>(r.cyclesUsed) * cfg.stepsPerCycle);
}

TEST(Simulation, InvalidConfigRejected) {
    SimConfig cfg;
    cfg.stepsPerCycle = 10;
    EXPECT_THROW(FlapperSystem{cfg}, DomainError);
}
