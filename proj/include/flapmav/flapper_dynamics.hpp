#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "constants.hpp"
#include "design.hpp"
#include "drivetrain.hpp"
#include "errors.hpp"
#include "quasi_steady_aero.hpp"
#include "tandem_interference.hpp"
#include "wing_geometry.hpp"

namespace flapmav {

inline constexpr int kWings = 4;

/// Wing order: fore-left, fore-right, hind-right, hind-left.
inline constexpr bool is_mirrored(int w) { return w == 1 || w == 2; }
inline constexpr bool is_fore(int w) { return w == 0 || w == 1; }
/// Partner on the same side.
inline constexpr int tandem_partner(int w) { return 3 - w; }

struct SystemState {
    std::array<double, kWings> phi{};
    std::array<double, kWings> theta{};
    std::array<double, kWings> phiDot{};
    std::array<double, kWings> thetaDot{};
    double t = 0.0;
};

struct WingTorques {
    std::array<double, kWings> motor{};
    std::array<double, kWings> yw{};
    std::array<double, kWings> zw{};
    std::array<double, kWings> membrane{};
};

/// Inertias of one wing-drive unit. jMotor is the drive inertia seen at the wing.
struct DriveInertia {
    double jMotor = 0.0;
    double jYY = 0.0;
    double jZZ = 0.0;
    double jYZ = 0.0;

    double determinant() const { return jMotor * jYY + jYY * jZZ - jYZ * jYZ; }
};

struct Accelerations {
    std::array<double, kWings> phiDdot{};
    std::array<double, kWings> thetaDdot{};
};

inline double cpg_target(double t, double amp, double f, double phase) {
    if (!(f > 0.0)) throw DomainError("cpg_target: frequency must be positive");
    return amp * std::sin(2.0 * kPi * f * t + phase);
}

struct PidGains {
    double kp = 0.48;
    double ki = 2.0e-5;
    double kd = 7.0e-4;
    double integralLimit = 10.0;
};

inline double pid_torque(double e, double eInt, double eDot, const PidGains& g) {
    return g.kp * e + g.ki * eInt + g.kd * eDot;
}

/// Spring offset: the mirrored wings oscillate about -pi.
inline double spring_offset(int w) { return is_mirrored(w) ? kPi : 0.0; }

/// Coupled flap/pitch accelerations of the four wings.
inline Accelerations accelerations(const SystemState& s, const WingTorques& T, const DriveInertia& J,
                                   const std::array<double, kWings>& kA) {
    const double c = J.determinant();
    if (!(std::abs(c) > 0.0) || !std::isfinite(c)) throw SimulationError("accelerations: singular inertia");
    Accelerations a;
    for (int w = 0; w < kWings; ++w) {
        const double spring = kA[w] * (s.phi[w] + spring_offset(w));
        a.phiDdot[w] = -J.jYY / c * spring + J.jYY / c * T.motor[w] + J.jYY / c * T.zw[w] - J.jYZ / c * T.yw[w] -
                       J.jYZ / c * T.membrane[w];
        a.thetaDdot[w] = J.jMotor / c * T.membrane[w] + J.jMotor / c * T.yw[w] + J.jYZ / c * spring -
                         J.jYZ / c * T.motor[w] - J.jYZ / c * T.zw[w] + J.jZZ / c * T.membrane[w] +
                         J.jZZ / c * T.yw[w];
    }
    return a;
}

struct SimConfig {
    DesignPoint design;
    MotorParams motor = motor_lookup(3);
    double etaTr = 0.8;
    double gearInertiaFraction = 0.1;

    // Wing construction
    double aspectRatio = 3.302;
    double taper = 0.40;
    double thickness = 2.5e-5;
    double wingDensity = 1100.0;

    AeroEnvironment aero;
    bool autoReynolds = true;
    double viscosity = kAirViscosity;

    MembraneParams membrane;
    PidGains pid;

    int stepsPerCycle = 1000;
    int maxCycles = 60;
    int minCycles = 3;
    double settleTol = 1e-3;
    int settleCycles = 2;

    bool aeroEnabled = true;
    bool pidEnabled = true;
    bool membraneEnabled = true;
    bool tandemEnabled = true;
    bool tandemPercentScale = true;

    std::optional<double> amplitudeOverride; // half-stroke amplitude, rad
    std::optional<SystemState> initialState;

    double dt() const { return 1.0 / (stepsPerCycle * design.fWing); }

    void validate() const {
        design.validate();
        motor.validate();
        membrane.validate();
        if (stepsPerCycle < 200) throw DomainError("simulation: stepsPerCycle must be >= 200");
        if (maxCycles < 1 || settleCycles < 1) throw DomainError("simulation: cycle counts must be positive");
        if (!(settleTol > 0.0)) throw DomainError("simulation: settleTol must be positive");
        if (!(etaTr > 0.0 && etaTr <= 1.0)) throw DomainError("simulation: etaTr must be in (0, 1]");
        if (gearInertiaFraction < 0.0) throw DomainError("simulation: gear inertia fraction must be >= 0");
    }
};

struct SimResult {
    std::array<double, kWings> meanLiftPerWing{};
    double lTakeoff = 0.0;
    std::array<double, kWings> achievedAmplitude{};
    std::array<double, kWings> pitchAmplitude{};
    double achievedFrequency = 0.0;
    std::array<double, kWings> maxMotorSpeed{};
    std::array<double, kWings> maxCurrent{};
    std::array<double, kWings> meanElectricalPower{};
    std::array<double, kWings> meanHeat{};
    bool settled = false;
    int cyclesUsed = 0;
    long tandemClamps = 0;

    double totalElectricalPower() const {
        double p = 0.0;
        for (double v : meanElectricalPower) p += v;
        return p;
    }
};

/// Per-step diagnostics handed to trace observers.
struct StepSample {
    double t = 0.0;
    std::array<double, kWings> phi{};
    std::array<double, kWings> theta{};
    std::array<double, kWings> lift{};
    std::array<double, kWings> power{};
    std::array<double, kWings> current{};
    std::array<double, kWings> motorSpeed{};
    std::array<double, kWings> heat{};
    std::array<double, kWings> localPhi{};
};

/// Closed-loop four-wing system integrated with fixed-step RK4.
class FlapperSystem {
public:
    static constexpr int kStateSize = 5 * kWings; // phi, theta, phiDot, thetaDot, eInt
    using Vec = std::array<double, kStateSize>;

    explicit FlapperSystem(const SimConfig& cfg)
        : cfg_(cfg),
          geom_(make_geometry(cfg)),
          aero_(geom_, make_environment(cfg, geom_)) {
        cfg.validate();
        const InertiaTensor Jw = wing_inertia(geom_);
        inertia_.jYY = Jw.Jyy;
        inertia_.jZZ = Jw.Jzz;
        inertia_.jYZ = Jw.Jyz;
        const double jGear = cfg.gearInertiaFraction * Jw.Jzz;
        const double gamma = cfg.design.gammaTr;
        inertia_.jMotor = jGear + gamma * gamma * cfg.motor.rotorInertia;
        // Flapping inertia with the pitch coupling condensed out.
        const double jWingEff = Jw.Jzz - Jw.Jyz * Jw.Jyz / Jw.Jyy;
        const SpringSpec spring = spring_for_frequency(cfg.design.fWing, jGear, jWingEff, cfg.motor.rotorInertia, gamma);
        kA_.fill(spring.kA);

        amp_ = cfg.amplitudeOverride.value_or(cfg.design.amplitudeRad());
        omega_ = 2.0 * kPi * cfg.design.fWing;
        const double total = 2.0 * amp_;
        scales_.amp = total;
        scales_.wMaxF = scales_.wMaxH = scales_.wMaxD = omega_ * amp_;
        dt_ = cfg.dt();
    }

    static WingGeometry make_geometry(const SimConfig& cfg) {
        WingGeometry g = WingGeometry::from_span(cfg.design.R, cfg.aspectRatio, cfg.taper, cfg.thickness, cfg.wingDensity);
        g.validate();
        return g;
    }

    static AeroEnvironment make_environment(const SimConfig& cfg, const WingGeometry& g) {
        AeroEnvironment env = cfg.aero;
        if (cfg.autoReynolds) env.Re = reynolds_number(cfg.design.totalStrokeRad(), cfg.design.fWing, g, cfg.viscosity);
        return env;
    }

    const WingGeometry& geometry() const { return geom_; }
    const WingAero& aero() const { return aero_; }
    const DriveInertia& inertia() const { return inertia_; }
    const std::array<double, kWings>& springStiffness() const { return kA_; }
    double dt() const { return dt_; }
    double commandedAmplitude() const { return amp_; }

    Vec initial_vector() const {
        Vec x{};
        if (cfg_.initialState) {
            const SystemState& s = *cfg_.initialState;
            for (int w = 0; w < kWings; ++w) {
                x[idx(0, w)] = s.phi[w];
                x[idx(1, w)] = s.theta[w];
                x[idx(2, w)] = s.phiDot[w];
                x[idx(3, w)] = s.thetaDot[w];
            }
        } else {
            for (int w = 0; w < kWings; ++w) x[idx(0, w)] = -spring_offset(w);
        }
        return x;
    }

    static SystemState to_state(const Vec& x, double t) {
        SystemState s;
        s.t = t;
        for (int w = 0; w < kWings; ++w) {
            s.phi[w] = x[idx(0, w)];
            s.theta[w] = x[idx(1, w)];
            s.phiDot[w] = x[idx(2, w)];
            s.thetaDot[w] = x[idx(3, w)];
        }
        return s;
    }

    /// Global target angle and rate of a wing.
    std::pair<double, double> target(int w, double t) const {
        const double phase = is_fore(w) ? 0.0 : kPi;
        const double v = cpg_target(t, amp_, cfg_.design.fWing, phase);
        const double vd = amp_ * omega_ * std::cos(omega_ * t + phase);
        return is_mirrored(w) ? std::pair{-kPi - v, -vd} : std::pair{v, vd};
    }

    /// State derivative; fills the diagnostics sample when requested.
    void derivative(double t, const Vec& x, Vec& dx, StepSample* sample = nullptr, long* clamps = nullptr) const {
        const SystemState s = to_state(x, t);
        WingTorques T;
        std::array<double, kWings> eDot{}, err{};
        for (int w = 0; w < kWings; ++w) {
            const auto [ref, refDot] = target(w, t);
            err[w] = ref - s.phi[w];
            eDot[w] = refDot - s.phiDot[w];
            if (cfg_.pidEnabled) T.motor[w] = pid_torque(err[w], x[idx(4, w)], eDot[w], cfg_.pid);
        }

        // Local (unmirrored) kinematics.
        std::array<WingKinematicState, kWings> loc{};
        std::array<double, kWings> sign{};
        for (int w = 0; w < kWings; ++w) {
            sign[w] = is_mirrored(w) ? -1.0 : 1.0;
            loc[w].phi = is_mirrored(w) ? -(s.phi[w] + kPi) : s.phi[w];
            loc[w].theta = sign[w] * s.theta[w];
            loc[w].phiDot = sign[w] * s.phiDot[w];
            loc[w].thetaDot = sign[w] * s.thetaDot[w];
        }

        std::array<double, kWings> scale{};
        scale.fill(1.0);
        if (cfg_.aeroEnabled && cfg_.tandemEnabled) {
            for (int w = 0; w < kWings; ++w) {
                const int fore = is_fore(w) ? w : tandem_partner(w);
                const int hind = tandem_partner(fore);
                const TandemFeatures f =
                    features(loc[fore].phi, loc[fore].phiDot, loc[hind].phi, loc[hind].phiDot, scales_);
                const TandemCoefficients c = coefficients(f);
                double coef = is_fore(w) ? c.cTF : c.cTH;
                if (cfg_.tandemPercentScale) coef /= 100.0;
                if (coef <= -1.0) {
                    coef = -1.0;
                    if (clamps) ++*clamps;
                }
                scale[w] = 1.0 + coef;
            }
        }

        std::array<LoadComponent, kWings> quasi{};
        std::array<std::pair<double, double>, kWings> addGain{};
        for (int w = 0; w < kWings; ++w) {
            if (cfg_.aeroEnabled) {
                quasi[w] = aero_.translational(loc[w]) + aero_.rotational(loc[w]);
                addGain[w] = aero_.added_mass_gains(loc[w].theta);
                T.yw[w] = sign[w] * scale[w] * quasi[w].Ty;
                T.zw[w] = sign[w] * scale[w] * quasi[w].Tz;
            }
            if (cfg_.membraneEnabled) {
                const double m = membrane_torque(loc[w].theta, loc[w].thetaDot, loc[w].phiDot, cfg_.membrane);
                T.membrane[w] = -sign[w] * m;
            }
        }

        Accelerations acc = accelerations(s, T, inertia_, kA_);

        // Added-mass torques are linear in the accelerations; solve the coupled 2x2 per wing.
        std::array<double, kWings> addForce{};
        if (cfg_.aeroEnabled) {
            const double c = inertia_.determinant();
            const double m11 = inertia_.jYY / c, m12 = -inertia_.jYZ / c;
            const double m21 = -inertia_.jYZ / c, m22 = (inertia_.jMotor + inertia_.jZZ) / c;
            for (int w = 0; w < kWings; ++w) {
                const auto [ga, gb] = addGain[w];
                const double zA = -aero_.addedSpanArm() * scale[w];
                const double yA = -aero_.addedChordArm() * scale[w];
                // d(accel)/d(accel) through the added-mass torques
                const double b11 = (m11 * zA + m12 * yA) * ga, b12 = (m11 * zA + m12 * yA) * gb;
                const double b21 = (m21 * zA + m22 * yA) * ga, b22 = (m21 * zA + m22 * yA) * gb;
                const double a11 = 1.0 - b11, a12 = -b12, a21 = -b21, a22 = 1.0 - b22;
                const double det = a11 * a22 - a12 * a21;
                if (!(std::abs(det) > 1e-12)) throw SimulationError("added-mass coupling is singular");
                const double p0 = acc.phiDdot[w], q0 = acc.thetaDdot[w];
                acc.phiDdot[w] = (a22 * p0 - a12 * q0) / det;
                acc.thetaDdot[w] = (a11 * q0 - a21 * p0) / det;
                addForce[w] = ga * acc.phiDdot[w] * sign[w] + gb * acc.thetaDdot[w] * sign[w];
            }
        }

        for (int w = 0; w < kWings; ++w) {
            dx[idx(0, w)] = s.phiDot[w];
            dx[idx(1, w)] = s.thetaDot[w];
            dx[idx(2, w)] = acc.phiDdot[w];
            dx[idx(3, w)] = acc.thetaDdot[w];
            dx[idx(4, w)] = cfg_.pidEnabled ? err[w] : 0.0;
        }

        if (sample) {
            sample->t = t;
            for (int w = 0; w < kWings; ++w) {
                sample->phi[w] = s.phi[w];
                sample->theta[w] = s.theta[w];
                sample->localPhi[w] = loc[w].phi;
                WingLoads L = WingLoads::from_components(quasi[w], {}, aero_.added_mass_from_force(addForce[w]));
                sample->lift[w] = scale[w] * L.lift(loc[w].theta);
                const MotorOperatingPoint op =
                    motor_electrical(loc[w].phiDot, sign[w] * T.motor[w], cfg_.design.gammaTr, cfg_.etaTr, cfg_.motor);
                sample->power[w] = op.pm;
                sample->current[w] = op.im;
                sample->motorSpeed[w] = op.wm;
                sample->heat[w] = op.im * op.im * cfg_.motor.r0;
            }
        }
    }

    /// One RK4 step; returns the diagnostics at the start of the step.
    StepSample step(Vec& x, double t, long* clamps = nullptr) const {
        Vec k1, k2, k3, k4, tmp;
        StepSample sample;
        derivative(t, x, k1, &sample, clamps);
        const double h = dt_;
        for (int i = 0; i < kStateSize; ++i) tmp[i] = x[i] + 0.5 * h * k1[i];
        derivative(t + 0.5 * h, tmp, k2);
        for (int i = 0; i < kStateSize; ++i) tmp[i] = x[i] + 0.5 * h * k2[i];
        derivative(t + 0.5 * h, tmp, k3);
        for (int i = 0; i < kStateSize; ++i) tmp[i] = x[i] + h * k3[i];
        derivative(t + h, tmp, k4);
        for (int i = 0; i < kStateSize; ++i) {
            x[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
            if (!std::isfinite(x[i])) throw SimulationError("non-finite state at t = " + std::to_string(t));
        }
        for (int w = 0; w < kWings; ++w) {
            double& e = x[idx(4, w)];
            e = std::clamp(e, -cfg_.pid.integralLimit, cfg_.pid.integralLimit);
        }
        return sample;
    }

    /// Kinetic plus spring energy of all four wings.
    double energy(const Vec& x) const {
        double e = 0.0;
        for (int w = 0; w < kWings; ++w) {
            const double pd = x[idx(2, w)], td = x[idx(3, w)];
            const double q = x[idx(0, w)] + spring_offset(w);
            e += 0.5 * ((inertia_.jMotor + inertia_.jZZ) * pd * pd + 2.0 * inertia_.jYZ * pd * td + inertia_.jYY * td * td);
            e += 0.5 * kA_[w] * q * q;
        }
        return e;
    }

    static constexpr int idx(int field, int w) { return field * kWings + w; }

    using Observer = std::function<void(const StepSample&)>;

    SimResult run(const Observer& observer = {}) const {
        SimResult res;
        Vec x = initial_vector();
        const int n = cfg_.stepsPerCycle;
        double t = 0.0;
        std::array<double, kWings> prevLift{};
        int calm = 0;
        long clamps = 0;
        double prevMean1 = 0.0;
        std::vector<double> crossings;

        for (int cycle = 0; cycle < cfg_.maxCycles; ++cycle) {
            std::array<double, kWings> lift{}, power{}, heat{}, maxI{}, maxW{};
            std::array<double, kWings> phiMin, phiMax, thMin, thMax;
            phiMin.fill(std::numeric_limits<double>::infinity());
            phiMax.fill(-std::numeric_limits<double>::infinity());
            thMin = phiMin;
            thMax = phiMax;
            double mean1 = 0.0;
            double prevPhi1 = std::numeric_limits<double>::quiet_NaN();
            double prevT = 0.0;
            crossings.clear();
            for (int k = 0; k < n; ++k) {
                t = (static_cast<double>(cycle) * n + k) * dt_;
                const StepSample smp = step(x, t, &clamps);
                if (observer) observer(smp);
                for (int w = 0; w < kWings; ++w) {
                    lift[w] += smp.lift[w];
                    power[w] += smp.power[w];
                    heat[w] += smp.heat[w];
                    maxI[w] = std::max(maxI[w], std::abs(smp.current[w]));
                    maxW[w] = std::max(maxW[w], std::abs(smp.motorSpeed[w]));
                    phiMin[w] = std::min(phiMin[w], smp.localPhi[w]);
                    phiMax[w] = std::max(phiMax[w], smp.localPhi[w]);
                    const double th = is_mirrored(w) ? -smp.theta[w] : smp.theta[w];
                    thMin[w] = std::min(thMin[w], th);
                    thMax[w] = std::max(thMax[w], th);
                }
                const double p1 = smp.localPhi[0] - prevMean1;
                mean1 += smp.localPhi[0];
                if (!std::isnan(prevPhi1) && prevPhi1 < 0.0 && p1 >= 0.0)
                    crossings.push_back(prevT + dt_ * (-prevPhi1) / (p1 - prevPhi1));
                prevPhi1 = p1;
                prevT = smp.t;
            }
            prevMean1 = mean1 / n;
            for (int w = 0; w < kWings; ++w) lift[w] /= n;

            bool calmCycle = cycle > 0;
            for (int w = 0; w < kWings && calmCycle; ++w) {
                const double denom = std::max(std::abs(lift[w]), 1e-9);
                if (std::abs(lift[w] - prevLift[w]) / denom >= cfg_.settleTol) calmCycle = false;
            }
            calm = calmCycle ? calm + 1 : 0;
            prevLift = lift;

            res.cyclesUsed = cycle + 1;
            res.meanLiftPerWing = lift;
            res.lTakeoff = lift[0] + lift[1] + lift[2] + lift[3];
            for (int w = 0; w < kWings; ++w) {
                res.meanElectricalPower[w] = power[w] / n;
                res.meanHeat[w] = heat[w] / n;
                res.maxCurrent[w] = maxI[w];
                res.maxMotorSpeed[w] = maxW[w];
                res.achievedAmplitude[w] = 0.5 * (phiMax[w] - phiMin[w]);
                res.pitchAmplitude[w] = 0.5 * (thMax[w] - thMin[w]);
            }
            if (crossings.size() >= 2) res.achievedFrequency = (crossings.size() - 1) / (crossings.back() - crossings.front());
            else res.achievedFrequency = cfg_.design.fWing;
            if (calm >= cfg_.settleCycles && res.cyclesUsed >= cfg_.minCycles) {
                res.settled = true;
                break;
            }
        }
        res.tandemClamps = clamps;
        return res;
    }

private:
    SimConfig cfg_;
    WingGeometry geom_;
    WingAero aero_;
    DriveInertia inertia_;
    std::array<double, kWings> kA_{};
    TandemScales scales_;
    double amp_ = 0.0;
    double omega_ = 0.0;
    double dt_ = 0.0;
};

inline SimResult simulate(const SimConfig& cfg, const FlapperSystem::Observer& observer = {}) {
    return FlapperSystem(cfg).run(observer);
}

/// Same pipeline with the commanded half-stroke amplitude at 180 degrees.
inline SimResult max_amplitude_run(SimConfig cfg, const FlapperSystem::Observer& observer = {}) {
    cfg.amplitudeOverride = kPi;
    return simulate(cfg, observer);
}

} // namespace flapmav
