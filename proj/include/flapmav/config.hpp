#pragma once

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "errors.hpp"
#include "evaluation.hpp"
#include "optim/isres.hpp"
#include "optim/moea.hpp"

namespace flapmav {

struct WorkbenchConfig {
    EvaluationSettings eval;
    optim::MoeaOptions moea;
    optim::IsresOptions isres;
    std::string motorTable; // empty: built-in table
    std::string fidelity = "full";
    unsigned long long seed = 1;

    /// Applies fidelity and seed to the nested settings.
    void finalize() {
        if (fidelity == "reduced") eval.use_reduced_fidelity();
        moea.seed = seed;
        isres.seed = seed;
    }
};

namespace detail {

inline std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

inline double parse_double(const std::string& v, int line) {
    double x = 0.0;
    const auto* end = v.data() + v.size();
    auto [p, ec] = std::from_chars(v.data(), end, x);
    if (ec != std::errc() || p != end || !std::isfinite(x)) throw ConfigError("not a number: '" + v + "'", line);
    return x;
}

inline long long parse_int(const std::string& v, int line) {
    long long x = 0;
    const auto* end = v.data() + v.size();
    auto [p, ec] = std::from_chars(v.data(), end, x);
    if (ec != std::errc() || p != end) throw ConfigError("not an integer: '" + v + "'", line);
    return x;
}

inline bool parse_bool(const std::string& v, int line) {
    if (v == "true" || v == "1" || v == "yes") return true;
    if (v == "false" || v == "0" || v == "no") return false;
    throw ConfigError("not a boolean: '" + v + "'", line);
}

inline std::string fmt(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

struct Binding {
    std::function<void(const std::string&, int)> set;
    std::function<std::string()> get;
};

class Registry {
public:
    std::vector<std::string> order;
    std::map<std::string, Binding> items;

    void add(const std::string& key, Binding b) {
        order.push_back(key);
        items.emplace(key, std::move(b));
    }

    void real(const std::string& key, double& ref, double lo, double hi) {
        add(key, {[&ref, key, lo, hi](const std::string& v, int line) {
                      const double x = parse_double(v, line);
                      if (x < lo || x > hi)
                          throw ConfigError(key + " = " + v + " out of range [" + fmt(lo) + ", " + fmt(hi) + "]", line);
                      ref = x;
                  },
                  [&ref] { return fmt(ref); }});
    }

    template <class Int>
    void integer(const std::string& key, Int& ref, long long lo, long long hi) {
        add(key, {[&ref, key, lo, hi](const std::string& v, int line) {
                      const long long x = parse_int(v, line);
                      if (x < lo || x > hi)
                          throw ConfigError(key + " = " + v + " out of range [" + std::to_string(lo) + ", " +
                                                std::to_string(hi) + "]",
                                            line);
                      ref = static_cast<Int>(x);
                  },
                  [&ref] { return std::to_string(ref); }});
    }

    void boolean(const std::string& key, bool& ref) {
        add(key, {[&ref](const std::string& v, int line) { ref = parse_bool(v, line); },
                  [&ref] { return std::string(ref ? "true" : "false"); }});
    }

    void choice(const std::string& key, std::string& ref, std::vector<std::string> allowed) {
        add(key, {[&ref, key, allowed](const std::string& v, int line) {
                      for (const auto& a : allowed)
                          if (a == v) {
                              ref = v;
                              return;
                          }
                      std::string msg = key + ": '" + v + "' is not one of";
                      for (const auto& a : allowed) msg += " " + a;
                      throw ConfigError(msg, line);
                  },
                  [&ref] { return ref; }});
    }

    void text(const std::string& key, std::string& ref) {
        add(key, {[&ref](const std::string& v, int) { ref = v; }, [&ref] { return ref; }});
    }
};

inline std::string variability_name(VariabilitySource s) {
    switch (s) {
    case VariabilitySource::Published: return "published";
    case VariabilitySource::Computed: return "computed";
    case VariabilitySource::Overall: return "overall";
    }
    return "published";
}

inline VariabilitySource variability_from(const std::string& s) {
    if (s == "computed") return VariabilitySource::Computed;
    if (s == "overall") return VariabilitySource::Overall;
    return VariabilitySource::Published;
}

/// Bindings for every recognised key. Design bounds come from DesignPoint.
inline Registry registry(WorkbenchConfig& c, std::string& modeLabel, std::string& variability,
                         std::string& stepRule) {
    Registry r;
    auto& e = c.eval;
    auto& d = e.sim.design;
    r.real("design.phiAm", d.phiAm, DesignPoint::kPhiAm.lo, DesignPoint::kPhiAm.hi);
    r.real("design.fWing", d.fWing, DesignPoint::kFreq.lo, DesignPoint::kFreq.hi);
    r.real("design.R", d.R, DesignPoint::kSpan.lo, DesignPoint::kSpan.hi);
    r.integer("design.idMotor", d.idMotor, static_cast<long long>(DesignPoint::kMotor.lo),
              static_cast<long long>(DesignPoint::kMotor.hi));
    r.real("design.gammaTr", d.gammaTr, DesignPoint::kGamma.lo, DesignPoint::kGamma.hi);

    r.real("species.sAnimal", e.mbsd.sAnimal, 1e-6, 10.0);
    r.choice("species.mode", modeLabel, {"hovering", "climbing", "turning", "forward"});
    r.real("species.cEye", e.mbsd.eye.cEye, 1e-8, 1.0);
    r.choice("species.variability", variability, {"published", "computed", "overall"});

    r.real("reference.frequency", e.reference.frequency, 0.1, 1000.0);
    r.real("reference.planeAngle", e.reference.planeAngle, -90.0, 90.0);
    r.real("reference.amplitude", e.reference.amplitude, 0.0, 360.0);
    r.real("reference.median", e.reference.median, -180.0, 180.0);

    r.real("physics.rho", e.sim.aero.rho, 1e-3, 100.0);
    r.real("physics.g", e.energy.g, 0.1, 100.0);
    r.real("physics.nu", e.sim.viscosity, 1e-8, 1e-2);
    r.real("physics.cD", e.forward.cD, 0.0, 10.0);
    r.real("physics.aLT", e.forward.aLT, 0.0, 1.0);
    r.real("physics.mTr", e.forward.mTr, 1e-6, 0.1);
    r.real("physics.tMotor", e.forward.tMotor, 1.0, 1000.0);

    r.real("energy.etaBat", e.energy.etaBat, 0.0, 1.0);
    r.real("energy.rhoEbat", e.energy.rhoEbat, 1.0, 1e8);
    r.real("energy.etaBoost", e.energy.etaBoost, 1e-3, 1.0);
    r.real("energy.etaUsed", e.energy.etaUsed, 1e-3, 1.0);
    r.real("energy.kElc", e.energy.kElc, 0.0, 100.0);

    auto& m = e.sim.membrane;
    r.real("membrane.cC1", m.cC1, 0.0, 1.0);
    r.real("membrane.cScale1", m.cScale1, 0.0, 1e3);
    r.real("membrane.cMove", m.cMove, 0.0, 1e3);
    r.real("membrane.k1", m.k1, 1e-6, 1e3);
    r.real("membrane.sigma", m.sigma, 1e-6, 1e3);
    r.real("membrane.mu", m.mu, -1e3, 1e3);
    r.real("membrane.thetaTat", m.thetaTat, 0.0, kPi);

    auto& s = e.sim;
    r.integer("simulation.stepsPerCycle", s.stepsPerCycle, 200, 1000000);
    r.integer("simulation.maxCycles", s.maxCycles, 1, 100000);
    r.integer("simulation.minCycles", s.minCycles, 1, 100000);
    r.real("simulation.settleTol", s.settleTol, 1e-12, 1.0);
    r.integer("simulation.settleCycles", s.settleCycles, 1, 1000);
    r.integer("simulation.nStrips", s.aero.nStrips, 1, 10000);
    r.real("simulation.lambda", s.aero.lambda, 1e-6, 1e6);
    r.real("simulation.rotationFactor", s.aero.rotationFactor, 0.0, 10.0);
    r.real("simulation.Re", s.aero.Re, 1.0, 1e7);
    r.boolean("simulation.autoReynolds", s.autoReynolds);
    r.real("simulation.etaTr", s.etaTr, 1e-3, 1.0);
    r.real("simulation.gearInertiaFraction", s.gearInertiaFraction, 0.0, 100.0);
    r.real("simulation.aspectRatio", s.aspectRatio, 0.1, 100.0);
    r.real("simulation.taper", s.taper, 0.0, 1.0);
    r.real("simulation.thickness", s.thickness, 1e-7, 1e-2);
    r.real("simulation.wingDensity", s.wingDensity, 1.0, 1e5);
    r.choice("simulation.fidelity", c.fidelity, {"full", "reduced"});
    r.boolean("simulation.membrane", s.membraneEnabled);
    r.boolean("simulation.pid", s.pidEnabled);

    r.real("pid.kp", s.pid.kp, 0.0, 1e6);
    r.real("pid.ki", s.pid.ki, 0.0, 1e6);
    r.real("pid.kd", s.pid.kd, 0.0, 1e6);
    r.real("pid.integralLimit", s.pid.integralLimit, 0.0, 1e9);

    r.boolean("tandem.enabled", s.tandemEnabled);
    r.boolean("tandem.percent_scale", s.tandemPercentScale);

    r.real("cooling.rthStand", e.cooling.rthStand, 1e-3, 1e4);
    r.real("cooling.deltaT", e.cooling.deltaT, 1e-3, 1e3);
    r.real("cooling.sStand", e.cooling.sStand, 1e-9, 1.0);

    r.real("limits.massFraction", e.massFractionLimit, 0.0, 1.0);
    r.real("limits.liftMargin", e.liftMarginLimit, 0.0, 100.0);

    r.text("motor.table", c.motorTable);

    r.integer("optimizer.moea.popSize", c.moea.popSize, 4, 100000);
    r.integer("optimizer.moea.budget", c.moea.budget, 1, 100000000);
    r.integer("optimizer.moea.batchSize", c.moea.batchSize, 1, 100000);
    r.real("optimizer.moea.etaC", c.moea.etaC, 0.0, 1000.0);
    r.real("optimizer.moea.crossoverProb", c.moea.crossoverProb, 0.0, 1.0);
    r.real("optimizer.moea.etaM", c.moea.etaM, 0.0, 1000.0);
    r.integer("optimizer.moea.stallGenerations", c.moea.stallGenerations, 1, 100000);
    r.real("optimizer.moea.stallTolerance", c.moea.stallTolerance, 0.0, 1.0);
    r.integer("optimizer.isres.popSize", c.isres.popSize, 4, 100000);
    r.integer("optimizer.isres.budget", c.isres.budget, 1, 100000000);
    r.real("optimizer.isres.gamma", c.isres.gamma, 0.0, 2.0);
    r.real("optimizer.isres.alpha", c.isres.alpha, 0.0, 1.0);
    r.real("optimizer.isres.rule", c.isres.rule, 1e-3, 1.0);
    r.real("optimizer.isres.pf", c.isres.pf, 0.0, 1.0);
    r.choice("optimizer.isres.stepRule", stepRule, {"parent-ratio", "success-rate"});
    r.integer("optimizer.isres.stallGenerations", c.isres.stallGenerations, 1, 100000);
    r.real("optimizer.isres.stallTolerance", c.isres.stallTolerance, 0.0, 1.0);

    r.integer("seed", c.seed, 0, static_cast<long long>(1) << 62);
    return r;
}

} // namespace detail

/// Parses `key = value` lines; `#` starts a comment. Unknown keys and bad values throw ConfigError.
/// Overrides use the same syntax, are applied after the file and may replace file entries.
inline WorkbenchConfig parse_config(std::istream& in, const std::vector<std::string>& overrides = {}) {
    WorkbenchConfig c;
    std::string mode = "hovering", variability = "published", stepRule = "success-rate";
    auto reg = detail::registry(c, mode, variability, stepRule);
    std::map<std::string, int> seen;
    auto apply = [&](std::string raw, int line, bool isOverride) {
        if (const auto h = raw.find('#'); h != std::string::npos) raw.erase(h);
        const std::string s = detail::trim(raw);
        if (s.empty()) return;
        const auto eq = s.find('=');
        if (eq == std::string::npos) throw ConfigError("expected 'key = value'", line);
        const std::string key = detail::trim(s.substr(0, eq));
        const std::string value = detail::trim(s.substr(eq + 1));
        if (key.empty()) throw ConfigError("missing key", line);
        if (value.empty()) throw ConfigError("missing value for '" + key + "'", line);
        const auto it = reg.items.find(key);
        if (it == reg.items.end()) throw ConfigError("unknown key '" + key + "'", line);
        if (!isOverride) {
            if (const auto p = seen.find(key); p != seen.end())
                throw ConfigError("duplicate key '" + key + "' (first set on line " + std::to_string(p->second) + ")",
                                  line);
            seen[key] = line;
        }
        it->second.set(value, line);
    };
    std::string raw;
    int line = 0;
    while (std::getline(in, raw)) apply(raw, ++line, false);
    for (const auto& o : overrides) {
        try {
            apply(o, 0, true);
        } catch (const ConfigError& e) {
            throw ConfigError(std::string("override '") + o + "': " + e.what());
        }
    }
    c.eval.mode = flight_mode(mode);
    c.eval.mbsd.source = detail::variability_from(variability);
    c.isres.stepRule = stepRule == "success-rate" ? optim::StepRule::SuccessRate : optim::StepRule::ParentRatio;
    if (!c.motorTable.empty()) c.eval.motors = MotorDatabase::from_csv(c.motorTable);
    try {
        c.eval.sim.design.validate();
        c.eval.motors.lookup(c.eval.sim.design.idMotor);
        c.eval.sim.membrane.validate();
    } catch (const ConfigError&) {
        throw;
    } catch (const std::exception& ex) {
        throw ConfigError(ex.what());
    }
    if (c.eval.sim.minCycles > c.eval.sim.maxCycles) throw ConfigError("simulation.minCycles exceeds maxCycles");
    c.finalize();
    return c;
}

inline WorkbenchConfig parse_config_text(const std::string& text, const std::vector<std::string>& overrides = {}) {
    std::istringstream in(text);
    return parse_config(in, overrides);
}

inline WorkbenchConfig load_config(const std::string& path, const std::vector<std::string>& overrides = {}) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");
    return parse_config(in, overrides);
}

/// Every key with its effective value, in a form parse_config accepts.
inline std::string resolved_config(const WorkbenchConfig& cfg) {
    WorkbenchConfig c = cfg;
    std::string mode = c.eval.mode.label;
    std::string variability = detail::variability_name(c.eval.mbsd.source);
    std::string stepRule = c.isres.stepRule == optim::StepRule::SuccessRate ? "success-rate" : "parent-ratio";
    auto reg = detail::registry(c, mode, variability, stepRule);
    std::string out;
    for (const auto& k : reg.order) {
        const std::string v = reg.items.at(k).get();
        if (v.empty()) continue;
        out += k + " = " + v + "\n";
    }
    return out;
}

} // namespace flapmav
