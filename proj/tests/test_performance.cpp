#include <gtest/gtest.h>

#include <cmath>

#include "flapmav/evaluation.hpp"

using namespace flapmav;

namespace {

SimResult hovering(double liftPerWing, double powerPerWing) {
    SimResult s;
    s.meanLiftPerWing.fill(liftPerWing);
    s.lTakeoff = 4.0 * liftPerWing;
    s.meanElectricalPower.fill(powerPerWing);
    s.maxMotorSpeed.fill(3000.0);
    s.maxCurrent.fill(0.5);
    s.meanHeat.fill(0.2);
    s.settled = true;
    return s;
}

} // namespace

TEST(Constraints, MarginsSignedByDirection) {
    const ConstraintCheck b = below(8.0, 10.0);
    EXPECT_TRUE(b.pass);
    EXPECT_DOUBLE_EQ(b.margin, 0.2);
    const ConstraintCheck bad = below(12.0, 10.0);
    EXPECT_FALSE(bad.pass);
    EXPECT_DOUBLE_EQ(bad.margin, -0.2);
    const ConstraintCheck a = above(1.5, 1.2);
    EXPECT_TRUE(a.pass);
    EXPECT_NEAR(a.margin, 0.25, 1e-15);
}

TEST(Constraints, HealthyHoverIsFeasible) {
    const MotorParams& m = motor_lookup(3);
    const ConstraintReport r = constraints(hovering(0.1, 2.0), hovering(0.2, 4.0), m);
    EXPECT_TRUE(r.feasible());
    EXPECT_EQ(r.violation(), 0.0);
    EXPECT_NEAR(r.motorWeightFraction.value, 4.0 * m.mass * kGravity / 0.4, 1e-12);
    EXPECT_NEAR(r.liftMargin.value, 2.0, 1e-12);
    EXPECT_NEAR(r.motorSpeed.limit, 1.1 * m.noLoadSpeed(), 1e-9);
}

TEST(Constraints, EachViolationCounted) {
    const MotorParams& m = motor_lookup(3);
    SimResult sim = hovering(0.1, 2.0);
    sim.maxCurrent[2] = 2.0 * m.maxCurrent;
    const ConstraintReport r = constraints(sim, hovering(0.11, 4.0), m);
    EXPECT_FALSE(r.motorCurrent.pass);
    EXPECT_FALSE(r.liftMargin.pass);
    EXPECT_FALSE(r.feasible());
    EXPECT_NEAR(r.violation(), 1.0 + (1.2 - 1.1) / 1.2, 1e-9);

    SimResult unsettled = hovering(0.1, 2.0);
    unsettled.settled = false;
    EXPECT_GE(constraints(unsettled, hovering(0.2, 4.0), m).violation(), 10.0);
    EXPECT_GE(constraints(hovering(-0.1, 2.0), hovering(0.2, 4.0), m).violation(), 10.0);
}

TEST(Energy, BudgetAndHoverDuration) {
    EnergyModel e;
    const SimResult s = hovering(0.1, 2.0);
    const EnergyBudget b = energy_budget(s, e);
    const double mass = 0.4 / e.g;
    EXPECT_NEAR(b.eTotal, e.rhoEbat * e.etaBat * mass * e.etaBoost * e.etaUsed, 1e-9);
    EXPECT_DOUBLE_EQ(b.pHover, 8.0 + e.kElc);
    EXPECT_NEAR(lhd(s, e), b.eTotal / b.pHover, 1e-12);
    e.etaBat = 1.5;
    EXPECT_THROW(e.validate(), DomainError);
}

TEST(ForwardFlight, SpeedBalancesDrag) {
    const double v = forward_speed(0.02, 1.0, 1.225, 0.004);
    EXPECT_NEAR(0.5 * 1.225 * v * v * 1.0 * 0.004, 0.02, 1e-12);
    EXPECT_THROW(forward_speed(-0.1, 1.0, 1.225, 0.004), DomainError);
}

TEST(ForwardFlight, MiffsGrowsWithSpareLift) {
    const ForwardFlightModel ff;
    EXPECT_EQ(miffs_from_lift(0.3, 0.3, ff), 0.0);
    double prev = 0.0;
    for (double lMax : {0.31, 0.4, 0.6, 1.0}) {
        const double v = miffs_from_lift(lMax, 0.3, ff);
        EXPECT_GT(v, prev);
        prev = v;
    }
    EXPECT_THROW(miffs_from_lift(0.2, 0.3, ff), DomainError);
    const double lMax = 0.5, lHover = 0.3, tRest = 0.4;
    const double v = miffs_from_lift(lMax, lHover, ff);
    EXPECT_NEAR(0.5 * kAirDensity * v * v * ff.cD * ff.aLT * tRest / lMax, tRest, 1e-12);
}

TEST(MissionTime, AhtAccountsForTransit) {
    const double e = 500.0, ph = 5.0, pf = 8.0;
    EXPECT_DOUBLE_EQ(aht(0.0, 3.0, e, ph, pf), 100.0);
    const double withTransit = aht(50.0, 5.0, e, ph, pf);
    EXPECT_NEAR(withTransit, (e - 50.0 * (2.0 * kPi + 2.0) / 5.0 * pf) / ph, 1e-12);
    EXPECT_LT(withTransit, 100.0);
    EXPECT_GT(aht(40.0, 5.0, e, ph, pf), withTransit);
    EXPECT_THROW(aht(50.0, 0.0, e, ph, pf), DomainError);
}

TEST(Efficiency, RatiosAndZeroGuards) {
    EXPECT_DOUBLE_EQ(e_lhd(300.0, 100.0), 3.0);
    EXPECT_TRUE(std::isinf(e_lhd(300.0, 0.0)));
    EXPECT_DOUBLE_EQ(e_miffs(100.0, 20.0), 5.0);
    EXPECT_TRUE(std::isinf(e_miffs(100.0, 0.0)));
}

TEST(FrontArea, WingsPlusActuators) {
    const ForwardFlightModel ff;
    const WingGeometry g = WingGeometry::from_span(0.075);
    const FrontArea a = front_area(g, 25.0, ff);
    EXPECT_NEAR(a.wing, 0.5 * (g.cR + g.cT) * g.R, 1e-15);
    EXPECT_NEAR(a.actuator, g.cR * 26.0 * ff.mTr * ff.tMotor, 1e-15);
    EXPECT_NEAR(a.total, 4.0 * a.wing + 2.0 * a.actuator, 1e-15);
}

TEST(Pipeline, DefaultDesignReportsObjectivesAndMargins) {
    const EvaluationSettings s;
    const Evaluation ev = evaluate_design(DesignPoint{}, s);
    ASSERT_FALSE(ev.failed) << ev.error;
    EXPECT_GT(ev.objectives.mbsd, 0.0);
    EXPECT_GT(ev.objectives.lhd, 0.0);
    EXPECT_GT(ev.objectives.miffs, 0.0);
    EXPECT_TRUE(std::isfinite(ev.objectives.aht));
    EXPECT_LE(ev.objectives.aht, ev.objectives.lhd);
    EXPECT_NEAR(ev.objectives.mbsd, ev.mbsd.shape + ev.mbsd.trajectory, 1e-12);
    EXPECT_EQ(ev.feasible(), ev.constraints.feasible());
    EXPECT_GE(ev.violation(), 0.0);
    EXPECT_GT(ev.simMax.lTakeoff, ev.sim.lTakeoff);
    RecordProperty("default_feasible", ev.feasible() ? "true" : "false");
    RecordProperty("default_violation", std::to_string(ev.violation()));
}

TEST(Pipeline, OutOfBoundsDesignFailsCleanly) {
    DesignPoint d;
    d.fWing = 60.0;
    const Evaluation ev = evaluate_design(d, EvaluationSettings{});
    EXPECT_TRUE(ev.failed);
    EXPECT_FALSE(ev.feasible());
    EXPECT_EQ(ev.violation(), 100.0);
    EXPECT_NE(ev.error.find("fWing"), std::string::npos);
}

TEST(Pipeline, ReducedFidelityStaysClose) {
    EvaluationSettings full;
    EvaluationSettings reduced;
    reduced.use_reduced_fidelity();
    const Evaluation a = evaluate_design(DesignPoint{}, full);
    const Evaluation b = evaluate_design(DesignPoint{}, reduced);
    EXPECT_EQ(a.objectives.mbsd, b.objectives.mbsd);
    EXPECT_NEAR(b.objectives.lhd / a.objectives.lhd, 1.0, 0.05);
}
