#pragma once

#include <cmath>
#include <limits>
#include <string>

#include "bio_metrics.hpp"
#include "design.hpp"
#include "drivetrain.hpp"
#include "errors.hpp"
#include "flapper_dynamics.hpp"
#include "performance.hpp"

namespace flapmav {

/// Everything needed to turn a design into objectives and constraints.
struct EvaluationSettings {
    SimConfig sim;
    MotorDatabase motors = MotorDatabase::builtin();
    EnergyModel energy;
    ForwardFlightModel forward;
    CoolingModel cooling;
    MbsdOptions mbsd;
    FlightModeRange mode = flight_mode("hovering");
    TrajectoryParams reference = hover_reference(0.03); // span replaced by the design span
    double massFractionLimit = 0.35;
    double liftMarginLimit = 1.2;

    /// 200 steps per cycle and 16 strips.
    void use_reduced_fidelity() {
        sim.stepsPerCycle = 200;
        sim.aero.nStrips = 16;
    }
};

struct Evaluation {
    DesignPoint design;
    SimResult sim;
    SimResult simMax;
    ConstraintReport constraints;
    ObjectiveVector objectives;
    MbsdBreakdown mbsd;
    FrontArea frontArea;
    double eTotal = 0.0;
    double pHover = 0.0;
    double pFront = 0.0;
    bool failed = false;
    std::string error;

    bool feasible() const { return !failed && constraints.feasible(); }
    double violation() const { return failed ? 100.0 : constraints.violation(); }
};

inline SimConfig sim_config_for(const DesignPoint& d, const EvaluationSettings& s) {
    SimConfig c = s.sim;
    c.design = d;
    c.motor = s.motors.lookup(d.idMotor);
    return c;
}

inline Evaluation evaluate_design(const DesignPoint& d, const EvaluationSettings& s) {
    Evaluation ev;
    ev.design = d;
    try {
        d.validate();
        TrajectoryParams ref = s.reference;
        ref.semiSpan = d.R;
        ev.mbsd = mbsd_breakdown(aircraft_trajectory(d), ref, s.mode, s.mbsd);
        ev.objectives.mbsd = ev.mbsd.total();
        ev.frontArea = front_area(d, s.forward, s.sim.aspectRatio, s.sim.taper);

        const SimConfig cfg = sim_config_for(d, s);
        ev.sim = simulate(cfg);
        ev.simMax = max_amplitude_run(cfg);
        ev.constraints = constraints(ev.sim, ev.simMax, cfg.motor, s.cooling, s.energy.g, s.massFractionLimit,
                                     s.liftMarginLimit);

        const EnergyBudget b = energy_budget(ev.sim, s.energy);
        ev.eTotal = b.eTotal;
        ev.pHover = b.pHover;
        ev.pFront = ev.simMax.totalElectricalPower() + s.energy.kElc;
        if (b.pHover > 0.0 && ev.sim.lTakeoff > 0.0) ev.objectives.lhd = b.eTotal / b.pHover;
        const double lHover = takeoff_weight(ev.sim), lMax = takeoff_weight(ev.simMax);
        if (lHover > 0.0 && lMax >= lHover) ev.objectives.miffs = miffs_from_lift(lMax, lHover, s.forward, s.sim.aero.rho);
        if (b.pHover > 0.0 && ev.objectives.miffs > 0.0 && ev.sim.lTakeoff > 0.0)
            ev.objectives.aht = aht(ev.objectives.mbsd, ev.objectives.miffs, b.eTotal, b.pHover, ev.pFront);
        else if (b.pHover > 0.0 && ev.objectives.mbsd == 0.0 && ev.sim.lTakeoff > 0.0)
            ev.objectives.aht = b.eTotal / b.pHover;
        else
            ev.objectives.aht = -std::numeric_limits<double>::infinity();
    } catch (const SimulationError& e) {
        ev.failed = true;
        ev.error = e.what();
    } catch (const DomainError& e) {
        ev.failed = true;
        ev.error = e.what();
    } catch (const LookupError& e) {
        ev.failed = true;
        ev.error = e.what();
    }
    return ev;
}

} // namespace flapmav
