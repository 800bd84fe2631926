#pragma once

#include <array>
#include <cmath>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "constants.hpp"
#include "errors.hpp"

namespace flapmav {

struct MotorParams {
    int id = 0;
    std::string name;
    double ratedVoltage = 0.0; // V
    double maxCurrent = 0.0;   // A
    double i0 = 0.0;           // A
    double r0 = 0.0;           // ohm
    double kv = 0.0;           // rpm/V
    double mass = 0.0;         // kg
    double rotorInertia = 0.0; // kg m^2

    void validate() const {
        if (!(ratedVoltage > 0 && maxCurrent > 0 && i0 > 0 && r0 > 0 && kv > 0 && mass > 0 && rotorInertia > 0))
            throw DomainError("motor '" + name + "': all parameters must be positive");
        if (!(maxCurrent > i0)) throw DomainError("motor '" + name + "': maxCurrent must exceed i0");
    }

    double kvRad() const { return kv * 2.0 * kPi / 60.0; }
    double kt() const { return 30.0 / (kPi * kv); }
    double noLoadSpeed() const { return ratedVoltage * kvRad(); }
};

/// Rotor inertia estimate for motors without a datasheet value.
inline double default_rotor_inertia(double massKg) { return 0.4 * massKg * 2.5e-3 * 2.5e-3; }

class MotorDatabase {
public:
    MotorDatabase() = default;
    explicit MotorDatabase(std::vector<MotorParams> rows) : rows_(std::move(rows)) {
        for (auto& r : rows_) r.validate();
    }

    static const MotorDatabase& builtin() {
        static const MotorDatabase db = [] {
            struct Row {
                const char* name;
                double v, imax, i0mA, r0, kv, g;
            };
            static constexpr Row rows[] = {
                {"ECX-Prime-235-6V", 6, 2.04, 83.8, 2.94, 6310, 3},
                {"ECX-Prime-235-12V", 12, 1.02, 41.9, 11.7, 3150, 3},
                {"CN-174-3V", 3, 3.92, 149, 0.766, 25800, 3},
                {"CN-174-6V", 6, 1.72, 58.8, 3.49, 10800, 3},
                {"CN-174-12V", 12, 0.97, 29.8, 12.4, 5460, 3},
                {"CN-173-6V", 6, 0.688, 46.5, 8.72, 7900, 3},
                {"CN-173-12V", 12, 0.188, 16.2, 63.8, 3040, 3},
                {"CN-176-6V", 6, 3.34, 128, 1.8, 6160, 6},
                {"CN-176-9V", 9, 1.7, 63.4, 5.3, 3360, 6},
                {"CN-176-12V", 12, 1.43, 50.9, 8.38, 2640, 6},
                {"CN-175-6", 6, 1.98, 105, 3.02, 6230, 6},
                {"CN-175-12", 12, 1.54, 69, 7.8, 3780, 6},
                {"CN-175-24", 24, 0.755, 33.2, 31.8, 1840, 6},
                {"CN_0620_B_FMM-6V", 6, 0.79788, 56, 8.8, 8761, 2.5},
                {"CN_0620_B_FMM-12V", 12, 1.55382, 18, 60.2, 3386, 2.5},
                {"CN_0824_B_FMM-6V", 6, 5.248, 55, 2.91, 5968, 5.2},
                {"CN_0824_B_FMM-12V", 12, 10.02, 31, 10.7, 3183, 5.2},
                {"otecs0921w-3", 3, 0.925, 45, 3.24, 5606, 6.5},
                {"otecs0921w-6", 6, 1.99, 69, 3.02, 6182, 6.5},
                {"otecs0921w-12", 12, 1.685, 75, 7.12, 3663, 6.5},
                {"otecs0921w-24", 24, 0.759, 22, 31.6, 1830, 6.5},
            };
            std::vector<MotorParams> out;
            int id = 0;
            for (const Row& r : rows) {
                MotorParams m;
                m.id = id++;
                m.name = r.name;
                m.ratedVoltage = r.v;
                m.maxCurrent = r.imax;
                m.i0 = r.i0mA * 1e-3;
                m.r0 = r.r0;
                m.kv = r.kv;
                m.mass = r.g * 1e-3;
                m.rotorInertia = default_rotor_inertia(m.mass);
                out.push_back(m);
            }
            return MotorDatabase(std::move(out));
        }();
        return db;
    }

    /// Reads `id,name,voltage_V,imax_A,i0_mA,r0_ohm,kv_rpm_per_V,mass_g,rotor_inertia_kgm2`.
    /// An empty inertia cell falls back to the rotor estimate.
    static MotorDatabase from_csv(const std::string& path) {
        std::ifstream in(path);
        if (!in) throw ConfigError("cannot open motor table '" + path + "'");
        std::string line;
        std::vector<MotorParams> rows;
        int lineNo = 0;
        bool header = false;
        while (std::getline(in, line)) {
            ++lineNo;
            if (line.empty() || line[0] == '#') continue;
            if (!header) {
                header = true;
                if (line.rfind("id,", 0) == 0) continue;
            }
            std::vector<std::string> cells;
            std::stringstream ss(line);
            std::string cell;
            while (std::getline(ss, cell, ',')) cells.push_back(cell);
            if (cells.size() < 8) throw ConfigError("motor table: expected at least 8 columns", lineNo);
            try {
                MotorParams m;
                m.id = std::stoi(cells[0]);
                m.name = cells[1];
                m.ratedVoltage = std::stod(cells[2]);
                m.maxCurrent = std::stod(cells[3]);
                m.i0 = std::stod(cells[4]) * 1e-3;
                m.r0 = std::stod(cells[5]);
                m.kv = std::stod(cells[6]);
                m.mass = std::stod(cells[7]) * 1e-3;
                m.rotorInertia = (cells.size() > 8 && !cells[8].empty()) ? std::stod(cells[8])
                                                                         : default_rotor_inertia(m.mass);
                if (m.id != static_cast<int>(rows.size()))
                    throw ConfigError("motor table: ids must be 0-based and consecutive", lineNo);
                m.validate();
                rows.push_back(m);
            } catch (const std::invalid_argument&) {
                throw ConfigError("motor table: non-numeric field", lineNo);
            } catch (const DomainError& e) {
                throw ConfigError(std::string("motor table: ") + e.what(), lineNo);
            }
        }
        if (rows.empty()) throw ConfigError("motor table '" + path + "' has no rows");
        return MotorDatabase(std::move(rows));
    }

    std::size_t size() const { return rows_.size(); }
    const std::vector<MotorParams>& rows() const { return rows_; }

    const MotorParams& lookup(int id) const {
        if (id < 0 || id >= static_cast<int>(rows_.size()))
            throw LookupError("motor id " + std::to_string(id) + " outside [0, " +
                              std::to_string(static_cast<int>(rows_.size()) - 1) + "]");
        return rows_[static_cast<std::size_t>(id)];
    }

private:
    std::vector<MotorParams> rows_;
};

inline const MotorParams& motor_lookup(int id) { return MotorDatabase::builtin().lookup(id); }

struct SpringSpec {
    double kA = 0.0;
};

inline SpringSpec spring_for_frequency(double f, double jGear, double jWing, double jRotor, double gamma) {
    if (!(f > 0.0)) throw DomainError("spring: frequency must be positive");
    if (jGear < 0.0 || jWing < 0.0 || jRotor < 0.0) throw DomainError("spring: inertias must be non-negative");
    const double w = 2.0 * kPi * f;
    return {w * w * (jGear + jWing + gamma * gamma * jRotor)};
}

struct MembraneParams {
    double cC1 = 7e-6;
    double cScale1 = 1.0;
    double cMove = 5.0;
    double k1 = 1.0;
    double sigma = 0.4;
    double mu = 0.0;
    double thetaTat = 0.3;

    void validate() const {
        if (!(sigma > 0.0)) throw DomainError("membrane: sigma must be positive");
        if (!(k1 > 0.0)) throw DomainError("membrane: k1 must be positive");
        if (cC1 < 0.0) throw DomainError("membrane: cC1 must be non-negative");
    }
};

/// Tension gate driven by the product of pitch and flapping rates.
inline double membrane_tension(double thetaDot, double phiDot, const MembraneParams& p) {
    const double c = p.cScale1 * (thetaDot * phiDot) - p.cMove;
    return p.cC1 / (1.0 + std::exp(-c * c));
}

namespace detail {
inline double membrane_shape(double x, const MembraneParams& p) {
    const double peak = 1.0 / (p.sigma * std::sqrt(2.0 * kPi));
    const double u = (x - p.mu) / p.sigma;
    const double u2 = u * u;
    const double u8 = u2 * u2 * u2 * u2;
    const double s = (p.k1 - peak * std::exp(-0.5 * u8)) / p.k1;
    return s * s;
}
} // namespace detail

/// Unnormalized stiffness shape at a pitch angle.
inline double membrane_shape_stiffness(double theta, const MembraneParams& p) {
    return detail::membrane_shape(p.k1 * theta, p) - detail::membrane_shape(0.0, p);
}

/// Stiffness shape normalized to one at thetaTat.
inline double membrane_stiffness(double theta, const MembraneParams& p) {
    const double ref = membrane_shape_stiffness(p.thetaTat, p);
    if (ref == 0.0) throw DomainError("membrane: reference stiffness is zero at thetaTat");
    return membrane_shape_stiffness(theta, p) / ref;
}

/// Membrane torque K*theta + C*thetaDot; the dynamics apply it as a restoring torque.
inline double membrane_torque(double theta, double thetaDot, double phiDot, const MembraneParams& p) {
    const double tension = membrane_tension(thetaDot, phiDot, p);
    return tension * membrane_stiffness(theta, p) * theta + tension * thetaDot;
}

struct MotorOperatingPoint {
    double wm = 0.0;
    double tm = 0.0;
    double um = 0.0;
    double im = 0.0;
    double pm = 0.0;
};

inline MotorOperatingPoint motor_electrical(double wWing, double tWing, double gamma, double etaTr,
                                            const MotorParams& m) {
    if (!(etaTr > 0.0 && etaTr <= 1.0)) throw DomainError("motor_electrical: etaTr must be in (0, 1]");
    if (!(gamma > 0.0)) throw DomainError("motor_electrical: gamma must be positive");
    MotorOperatingPoint p;
    p.wm = wWing * gamma;
    p.tm = tWing / (gamma * etaTr);
    p.im = m.i0 + p.tm / m.kt();
    p.um = m.r0 * p.im + p.wm / m.kvRad();
    p.pm = p.um * p.im;
    return p;
}

struct CoolingSpec {
    double rthStand = 9.88;
    double sStand = 0.0;
    double sI = 0.0;
    double deltaT = 40.0;
};

inline double cooling_capacity(const CoolingSpec& c) {
    if (!(c.rthStand > 0.0 && c.sStand > 0.0 && c.sI > 0.0) || c.deltaT < 0.0)
        throw DomainError("cooling: resistances and areas must be positive");
    return c.deltaT / (c.rthStand * c.sStand / c.sI);
}

/// Outer surface of a solid cylinder of the given mass, length twice its diameter.
inline double motor_surface_area(double massKg, double densityKgM3 = 6000.0) {
    if (!(massKg > 0.0 && densityKgM3 > 0.0)) throw DomainError("motor_surface_area: mass and density must be positive");
    const double volume = massKg / densityKgM3;
    const double d = std::cbrt(2.0 * volume / kPi);
    return kPi * d * 2.0 * d + 2.0 * kPi * d * d / 4.0;
}

} // namespace flapmav
