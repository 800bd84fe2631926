#pragma once

#include <algorithm>
#include <cmath>
#include <utility>
#include <vector>

#include "constants.hpp"
#include "errors.hpp"
#include "wing_geometry.hpp"

namespace flapmav {

/// Angles and rates of one wing in its own (unmirrored) frame.
/// theta = 0 puts the plate normal along the stroke direction.
struct WingKinematicState {
    double phi = 0.0;
    double theta = 0.0;
    double phiDot = 0.0;
    double thetaDot = 0.0;
    double phiDdot = 0.0;
    double thetaDdot = 0.0;
};

struct StripState {
    double r = 0.0;
    double alpha = 0.0;
    double U = 0.0;
    double vx = 0.0;
    double vz = 0.0;
};

struct LoadComponent {
    double Fx = 0.0;
    double Fy = 0.0;
    double Fz = 0.0;
    double Ty = 0.0;
    double Tz = 0.0;

    LoadComponent& operator+=(const LoadComponent& o) {
        Fx += o.Fx; Fy += o.Fy; Fz += o.Fz; Ty += o.Ty; Tz += o.Tz;
        return *this;
    }
    LoadComponent scaled(double s) const { return {Fx * s, Fy * s, Fz * s, Ty * s, Tz * s}; }
};

inline LoadComponent operator+(LoadComponent a, const LoadComponent& b) { return a += b; }

struct WingLoads {
    double Fx = 0.0;
    double Fy = 0.0;
    double Fz = 0.0;
    double Ty = 0.0;
    double Tz = 0.0;
    LoadComponent translational;
    LoadComponent rotational;
    LoadComponent addedMass;

    static WingLoads from_components(const LoadComponent& tr, const LoadComponent& rot,
                                     const LoadComponent& add) {
        WingLoads w;
        w.translational = tr;
        w.rotational = rot;
        w.addedMass = add;
        const LoadComponent s = tr + rot + add;
        w.Fx = s.Fx; w.Fy = 0.0; w.Fz = s.Fz; w.Ty = s.Ty; w.Tz = s.Tz;
        return w;
    }

    /// Vertical force for a wing pitched by theta, stroke plane horizontal.
    double lift(double theta) const { return -Fx * std::sin(theta) + Fz * std::cos(theta); }
};

struct AeroEnvironment {
    double rho = kAirDensity;
    double Re = 1000.0;
    int nStrips = 32;
    double lambda = 1.0;       // unnamed scaling input of the added-mass fit
    double rotationFactor = 1.0;

    void validate() const {
        if (!(rho > 0.0)) throw DomainError("aero: rho must be positive");
        if (!(Re > 0.0)) throw DomainError("aero: Re must be positive");
        if (nStrips < 8) throw DomainError("aero: nStrips must be >= 8");
        if (!(lambda > 0.0)) throw DomainError("aero: lambda must be positive");
    }
};

inline double normal_force_coefficient(double alpha) { return 3.48 * std::sin(alpha); }

inline double tangential_force_coefficient(double alpha) {
    const double c = std::cos(2.0 * alpha);
    return 0.4 * c * c;
}

inline double rotational_lift_coefficient(double Re) { return 0.842 - 0.507 * std::pow(Re, -0.158); }

/// Piecewise angle factor for rotational circulation.
inline double rotation_angle_factor(double alpha) {
    const double a = std::remainder(alpha, 2.0 * kPi);
    const double quarter = kPi / 4.0;
    if (std::abs(a) < quarter) return 1.0;
    if (std::abs(a) > 3.0 * quarter) return -1.0;
    return std::sqrt(2.0) * std::cos(a);
}

inline double added_mass_lambda_factor(double lambda) { return 47.7 * std::pow(lambda, -0.0019) - 46.7; }
inline double added_mass_aspect_factor(double AR) { return 1.294 - 0.590 * std::pow(AR, -0.662); }
inline double added_mass_reynolds_factor(double Re) { return 0.776 + 1.911 * std::pow(Re, -0.6876); }

/// Flow angle from wing-frame velocity components.
inline StripState flow_state(double r, double vx, double vz) {
    StripState s;
    s.r = r;
    s.vx = vx;
    s.vz = vz;
    s.U = std::hypot(vx, vz);
    s.alpha = std::atan2(vx, vz);
    return s;
}

/// Leading-edge velocity of the strip at radius r under pure flapping rotation.
inline StripState local_flow(const WingKinematicState& k, double r) {
    const double vx = -k.phiDot * r * std::cos(k.theta);
    const double vz = -k.phiDot * r * std::sin(k.theta);
    return flow_state(r, vx, vz);
}

/// Precomputed spanwise strips and fit factors for one wing and environment.
class WingAero {
public:
    struct Strip {
        double r;
        double c;
        double dr;
    };

    WingAero(const WingGeometry& g, const AeroEnvironment& env) : geom_(g), env_(env) {
        env.validate();
        morph_ = morphology(g);
        const double dr = (g.R - g.deltaR) / env.nStrips;
        strips_.reserve(env.nStrips);
        for (int i = 0; i < env.nStrips; ++i) {
            const double r = g.deltaR + (i + 0.5) * dr;
            const double c = chord_at(g, r);
            strips_.push_back({r, c, dr});
            m_.r2c += r * r * c * dr;
            m_.r2c2 += r * r * c * c * dr;
            m_.r3c += r * r * r * c * dr;
            m_.rc3 += r * c * c * c * dr;
            m_.rc2 += r * c * c * dr;
            m_.c3 += c * c * c * dr;
        }
        cRot_ = rotational_lift_coefficient(env.Re);
        kAdded_ = added_mass_lambda_factor(env.lambda) * added_mass_aspect_factor(morph_.aspectRatio) *
                  added_mass_reynolds_factor(env.Re) * env.rho * kPi / 4.0;
    }

    const WingGeometry& geometry() const { return geom_; }
    const Morphology& morph() const { return morph_; }
    const AeroEnvironment& environment() const { return env_; }
    const std::vector<Strip>& strips() const { return strips_; }
    double rotationalCoefficient() const { return cRot_; }
    double addedMassCoefficient() const { return kAdded_; }

    /// Translational loads for an arbitrary per-strip flow field.
    template <class FlowFn>
    LoadComponent translational_with(FlowFn&& flow) const {
        LoadComponent out;
        for (const Strip& s : strips_) {
            const StripState st = flow(s.r);
            const double q = 0.5 * env_.rho * st.U * st.U * s.c * s.dr;
            const double fx = -normal_force_coefficient(st.alpha) * q;
            const double fz = tangential_force_coefficient(st.alpha) * q;
            out.Fx += fx;
            out.Fz += fz;
            out.Ty += -fx * 0.388 * s.c;
            out.Tz += -fx * s.r;
        }
        return out;
    }

    /// Rigid flapping: the flow angle is the same on every strip, so strip sums
    /// reduce to precomputed chord moments.
    LoadComponent translational(const WingKinematicState& k) const {
        LoadComponent out;
        const StripState st = local_flow(k, 1.0);
        const double q = 0.5 * env_.rho * k.phiDot * k.phiDot;
        const double cn = normal_force_coefficient(st.alpha) * q;
        const double ct = tangential_force_coefficient(st.alpha) * q;
        out.Fx = -cn * m_.r2c;
        out.Fz = ct * m_.r2c;
        out.Ty = cn * 0.388 * m_.r2c2;
        out.Tz = cn * m_.r3c;
        return out;
    }

    LoadComponent rotational(const WingKinematicState& k) const {
        LoadComponent out;
        const StripState st = local_flow(k, 1.0);
        const double circ = rotation_angle_factor(st.alpha) * env_.rotationFactor * cRot_ * env_.rho * st.vx * st.vz;
        const double damp = 2.67 * env_.rho * k.thetaDot * std::abs(k.thetaDot);
        const double fx = circ * m_.r2c + damp * m_.rc3 / 3.0;
        out.Fx = fx;
        out.Ty = -fx * 0.398 * morph_.meanChord;
        out.Tz = -fx * 0.993 * morph_.R2;
        return out;
    }

    /// Added-mass normal force is linear in the accelerations: Fx = a*phiDdot + b*thetaDdot.
    std::pair<double, double> added_mass_gains(double theta) const {
        return {kAdded_ * std::cos(theta) * m_.rc2, kAdded_ * 0.5 * m_.c3};
    }

    LoadComponent added_mass(const WingKinematicState& k) const {
        const auto [a, b] = added_mass_gains(k.theta);
        return added_mass_from_force(a * k.phiDdot + b * k.thetaDdot);
    }

    LoadComponent added_mass_from_force(double fx) const {
        LoadComponent out;
        out.Fx = fx;
        out.Ty = -fx * addedChordArm();
        out.Tz = -fx * addedSpanArm();
        return out;
    }

    double addedChordArm() const { return 0.5 * morph_.meanChord; }
    double addedSpanArm() const { return 1.078 * morph_.R2; }

    WingLoads total(const WingKinematicState& k) const {
        return WingLoads::from_components(translational(k), rotational(k), added_mass(k));
    }

private:
    WingGeometry geom_;
    AeroEnvironment env_;
    Morphology morph_;
    std::vector<Strip> strips_;
    struct Moments {
        double r2c = 0, r2c2 = 0, r3c = 0, rc3 = 0, rc2 = 0, c3 = 0;
    } m_;
    double cRot_ = 0.0;
    double kAdded_ = 0.0;
};

inline LoadComponent translational_loads(const WingKinematicState& k, const WingGeometry& g,
                                         const AeroEnvironment& env) {
    return WingAero(g, env).translational(k);
}

inline LoadComponent rotational_loads(const WingKinematicState& k, const WingGeometry& g,
                                      const AeroEnvironment& env) {
    return WingAero(g, env).rotational(k);
}

inline LoadComponent added_mass_loads(const WingKinematicState& k, const WingGeometry& g,
                                      const AeroEnvironment& env) {
    return WingAero(g, env).added_mass(k);
}

inline WingLoads total_loads(const WingKinematicState& k, const WingGeometry& g, const AeroEnvironment& env) {
    return WingAero(g, env).total(k);
}

/// Reynolds number from the mean wing speed at the second-moment radius.
inline double reynolds_number(double totalStroke, double frequency, const WingGeometry& g,
                              double viscosity = kAirViscosity) {
    const Morphology m = morphology(g);
    const double uRef = 2.0 * totalStroke * frequency * m.R2;
    return std::max(uRef * m.meanChord / viscosity, 1.0);
}

} // namespace flapmav
