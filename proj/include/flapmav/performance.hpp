#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "constants.hpp"
#include "design.hpp"
#include "drivetrain.hpp"
#include "errors.hpp"
#include "flapper_dynamics.hpp"
#include "wing_geometry.hpp"

namespace flapmav {

struct EnergyModel {
    double etaBat = 0.241;
    double rhoEbat = 6.5e5;
    double etaBoost = 0.90;
    double etaUsed = 0.85;
    double kElc = 0.5;
    double g = kGravity;

    void validate() const {
        for (double v : {etaBat, etaBoost, etaUsed})
            if (!(v > 0.0 && v <= 1.0)) throw DomainError("energy: efficiencies and fractions must be in (0, 1]");
        if (!(rhoEbat > 0.0)) throw DomainError("energy: rhoEbat must be positive");
        if (kElc < 0.0) throw DomainError("energy: kElc must be non-negative");
        if (!(g > 0.0)) throw DomainError("energy: g must be positive");
    }
};

struct ForwardFlightModel {
    double cD = 1.0;
    double aLT = 0.004;
    double mTr = 3e-4;
    double tMotor = 9.0;

    void validate() const {
        if (!(cD > 0.0 && aLT > 0.0 && mTr > 0.0 && tMotor > 0.0))
            throw DomainError("forward flight: all parameters must be positive");
    }
};

struct ConstraintCheck {
    bool pass = false;
    double value = 0.0;
    double limit = 0.0;
    /// Relative distance to the limit; negative when violated.
    double margin = 0.0;
};

struct ConstraintReport {
    ConstraintCheck motorSpeed;
    ConstraintCheck motorCurrent;
    ConstraintCheck motorWeightFraction;
    ConstraintCheck liftMargin;
    ConstraintCheck cooling;
    bool settled = true;
    bool positiveLift = true;

    bool feasible() const {
        return settled && positiveLift && motorSpeed.pass && motorCurrent.pass && motorWeightFraction.pass &&
               liftMargin.pass && cooling.pass;
    }

    /// Sum of normalized violations; unsettled or non-lifting runs add a fixed penalty.
    double violation() const {
        double v = 0.0;
        for (const ConstraintCheck* c : {&motorSpeed, &motorCurrent, &motorWeightFraction, &liftMargin, &cooling})
            v += std::max(0.0, -c->margin);
        if (!settled) v += 10.0;
        if (!positiveLift) v += 10.0;
        return v;
    }
};

struct ObjectiveVector {
    double mbsd = 0.0;
    double lhd = 0.0;
    double miffs = 0.0;
    double aht = 0.0;
};

inline double takeoff_weight(const SimResult& s) {
    return s.meanLiftPerWing[0] + s.meanLiftPerWing[1] + s.meanLiftPerWing[2] + s.meanLiftPerWing[3];
}

inline double max_motor_speed(const MotorParams& m) { return 1.1 * m.noLoadSpeed(); }

/// Heat dissipation capacity of a motor relative to the reference motor area.
inline double motor_cooling_capacity(const MotorParams& m, double sStand, double rthStand = 9.88,
                                     double deltaT = 40.0) {
    CoolingSpec c;
    c.rthStand = rthStand;
    c.sStand = sStand;
    c.sI = motor_surface_area(m.mass);
    c.deltaT = deltaT;
    return cooling_capacity(c);
}

struct CoolingModel {
    double rthStand = 9.88;
    double deltaT = 40.0;
    double sStand = motor_surface_area(3e-3);
};

inline ConstraintCheck below(double value, double limit) {
    ConstraintCheck c;
    c.value = value;
    c.limit = limit;
    c.pass = value < limit;
    c.margin = limit != 0.0 ? (limit - value) / std::abs(limit) : -value;
    return c;
}

inline ConstraintCheck above(double value, double limit) {
    ConstraintCheck c;
    c.value = value;
    c.limit = limit;
    c.pass = value > limit;
    c.margin = limit != 0.0 ? (value - limit) / std::abs(limit) : value;
    return c;
}

inline ConstraintReport constraints(const SimResult& sim, const SimResult& simMax, const MotorParams& motor,
                                    const CoolingModel& cooling = {}, double g = kGravity,
                                    double massFractionLimit = 0.35, double liftMarginLimit = 1.2) {
    ConstraintReport r;
    r.settled = sim.settled && simMax.settled;
    const double lift = takeoff_weight(sim);
    r.positiveLift = lift > 0.0;

    const double w = *std::max_element(sim.maxMotorSpeed.begin(), sim.maxMotorSpeed.end());
    r.motorSpeed = below(w, max_motor_speed(motor));
    const double i = *std::max_element(sim.maxCurrent.begin(), sim.maxCurrent.end());
    r.motorCurrent = below(i, motor.maxCurrent);

    const double motorWeight = 4.0 * motor.mass * g;
    const double fraction = lift > 0.0 ? motorWeight / lift : std::numeric_limits<double>::infinity();
    r.motorWeightFraction = below(fraction, massFractionLimit);
    if (!std::isfinite(fraction)) r.motorWeightFraction.margin = -1.0;

    const double ratio = lift > 0.0 ? takeoff_weight(simMax) / lift : 0.0;
    r.liftMargin = above(ratio, liftMarginLimit);

    const double heat = *std::max_element(sim.meanHeat.begin(), sim.meanHeat.end());
    r.cooling = below(heat, motor_cooling_capacity(motor, cooling.sStand, cooling.rthStand, cooling.deltaT));
    return r;
}

struct EnergyBudget {
    double eTotal = 0.0;
    double pHover = 0.0;
};

inline EnergyBudget energy_budget(const SimResult& sim, const EnergyModel& e) {
    EnergyBudget b;
    const double takeoffMass = takeoff_weight(sim) / e.g;
    b.eTotal = e.rhoEbat * (e.etaBat * takeoffMass) * e.etaBoost * e.etaUsed;
    b.pHover = sim.totalElectricalPower() + e.kElc;
    return b;
}

inline double lhd(const SimResult& sim, const EnergyModel& e) {
    const EnergyBudget b = energy_budget(sim, e);
    if (!(b.pHover > 0.0)) throw DomainError("lhd: hover power must be positive");
    return b.eTotal / b.pHover;
}

/// Speed at which drag over the given frontal area balances the spare thrust.
inline double forward_speed(double tRest, double cD, double rho, double aFront) {
    if (!(cD > 0.0 && rho > 0.0 && aFront > 0.0)) throw DomainError("forward_speed: cD, rho and area must be positive");
    if (tRest < 0.0) throw DomainError("forward_speed: negative thrust");
    return std::sqrt(2.0 * tRest / (cD * rho * aFront));
}

inline double miffs_from_lift(double lMax, double lHover, const ForwardFlightModel& ff, double rho = kAirDensity) {
    if (lMax < lHover) throw DomainError("miffs: maximum lift below hover lift");
    if (lMax <= 0.0) return 0.0;
    const double tRest = std::sqrt(lMax * lMax - lHover * lHover);
    if (tRest == 0.0) return 0.0;
    const double sinBeta = tRest / lMax;
    return forward_speed(tRest, ff.cD, rho, ff.aLT * sinBeta);
}

inline double miffs(const SimResult& sim, const SimResult& simMax, const ForwardFlightModel& ff,
                    double rho = kAirDensity) {
    return miffs_from_lift(takeoff_weight(simMax), takeoff_weight(sim), ff, rho);
}

struct FrontArea {
    double wing = 0.0;
    double actuator = 0.0;
    double total = 0.0;
};

inline FrontArea front_area(const WingGeometry& g, double gammaTr, const ForwardFlightModel& ff) {
    FrontArea a;
    a.wing = 0.5 * (g.cT + g.cR) * (g.R - g.deltaR);
    a.actuator = g.cR * ((gammaTr + 1.0) * ff.mTr * ff.tMotor);
    a.total = 4.0 * a.wing + 2.0 * a.actuator;
    return a;
}

inline FrontArea front_area(const DesignPoint& d, const ForwardFlightModel& ff, double aspectRatio = 3.302,
                            double taper = 0.40) {
    return front_area(WingGeometry::from_span(d.R, aspectRatio, taper), d.gammaTr, ff);
}

inline double e_lhd(double lhdValue, double mbsdValue) {
    if (mbsdValue == 0.0) return std::numeric_limits<double>::infinity();
    return lhdValue / mbsdValue;
}

inline double e_miffs(double mbsdValue, double miffsValue) {
    if (miffsValue == 0.0) return std::numeric_limits<double>::infinity();
    return mbsdValue / miffsValue;
}

/// Hover time left after circling and crossing the stealth radius at forward speed.
inline double aht(double mbsdValue, double miffsValue, double eTotal, double pHover, double pFront) {
    if (!(pHover > 0.0)) throw DomainError("aht: hover power must be positive");
    if (mbsdValue == 0.0) return eTotal / pHover;
    if (!(miffsValue > 0.0)) throw DomainError("aht: forward speed must be positive");
    const double transit = mbsdValue * (2.0 * kPi + 2.0) / miffsValue * pFront;
    return (eTotal - transit) / pHover;
}

} // namespace flapmav
