#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <string>
#include <vector>

#include "constants.hpp"
#include "design.hpp"
#include "errors.hpp"

namespace flapmav {

struct EyeModel {
    double cEye = 6.82e-4;
};

struct Range {
    double lo = 0.0;
    double hi = 0.0;
    double mid() const { return 0.5 * (lo + hi); }
};

/// Biological flight-mode statistics (angles in degrees).
struct FlightModeRange {
    std::string label;
    Range frequency;
    Range planeAngle;
    Range amplitude;
    Range median;
    Range phaseDifference;
    double individualVariability = 0.6;

    void validate() const {
        for (const Range* r : {&frequency, &planeAngle, &amplitude, &median, &phaseDifference})
            if (r->lo > r->hi) throw DomainError("flight mode '" + label + "': range low exceeds high");
        if (frequency.lo <= 0.0) throw DomainError("flight mode '" + label + "': frequency must be positive");
    }
};

inline const std::vector<FlightModeRange>& flight_modes() {
    static const std::vector<FlightModeRange> modes = {
        {"hovering", {38.8, 41.0}, {0.0, 0.0}, {60.0, 90.0}, {0.0, 0.0}, {180.0, 180.0}, 0.627},
        {"climbing", {27.2, 41.5}, {37.0, 66.0}, {65.2, 94.0}, {-3.0, 22.3}, {76.7, 102.3}, 0.763},
        {"turning", {33.3, 41.7}, {19.3, 80.0}, {31.0, 90.0}, {-9.0, 1.5}, {0.0, 74.0}, 0.693},
        {"forward", {24.0, 46.0}, {19.3, 80.0}, {50.0, 86.0}, {-10.8, 7.3}, {60.0, 90.0}, 0.642},
    };
    return modes;
}

inline const FlightModeRange& flight_mode(const std::string& label) {
    for (const auto& m : flight_modes())
        if (m.label == label) return m;
    throw LookupError("unknown flight mode '" + label + "'");
}

inline constexpr double kOverallIndividualVariability = 0.6;

/// Wingtip motion parameters; angles in degrees, amplitude is the full stroke.
struct TrajectoryParams {
    double semiSpan = 0.03;
    double frequency = 39.9;
    double planeAngle = 0.0;
    double amplitude = 75.0;
    double median = 0.0;

    void validate() const {
        if (!(frequency > 0.0)) throw DomainError("trajectory: frequency must be positive");
        if (!(amplitude >= 0.0)) throw DomainError("trajectory: amplitude must be non-negative");
        if (!(semiSpan > 0.0)) throw DomainError("trajectory: semi-span must be positive");
    }
};

/// Hover reference trajectory at a given span.
inline TrajectoryParams hover_reference(double semiSpan) { return {semiSpan, 39.9, 0.0, 75.0, 0.0}; }

/// Aircraft wingtip trajectory for a design (full stroke is twice the design amplitude).
inline TrajectoryParams aircraft_trajectory(const DesignPoint& d) { return {d.R, d.fWing, 0.0, 2.0 * d.phiAm, 0.0}; }

using Point3 = std::array<double, 3>;

struct WingtipTrajectory {
    std::vector<Point3> points;
    double dt = 0.0;
    double period = 0.0;
};

inline Point3 wingtip_position(const TrajectoryParams& p, double t) {
    const double phi = deg2rad(p.median + 0.5 * p.amplitude * std::cos(2.0 * kPi * p.frequency * t));
    const double b = deg2rad(p.planeAngle);
    const double s = std::sin(phi);
    return {p.semiSpan * s * std::cos(b), p.semiSpan * std::cos(phi), p.semiSpan * s * std::sin(b)};
}

inline WingtipTrajectory wingtip_trajectory(const TrajectoryParams& p, int nCycles, int samplesPerCycle) {
    p.validate();
    if (nCycles < 1 || samplesPerCycle < 2) throw DomainError("wingtip_trajectory: need >= 1 cycle and >= 2 samples");
    WingtipTrajectory tr;
    tr.period = 1.0 / p.frequency;
    tr.dt = tr.period / samplesPerCycle;
    const int n = nCycles * samplesPerCycle;
    tr.points.reserve(n);
    for (int i = 0; i < n; ++i) tr.points.push_back(wingtip_position(p, i * tr.dt));
    return tr;
}

/// Mean pointwise distance between two wingtip paths over a shared grid, divided by the span of `a`.
inline double dynamic_dissimilarity(const TrajectoryParams& a, const TrajectoryParams& ref, int nCycles = 10,
                                    int samplesPerCycle = 200) {
    a.validate();
    ref.validate();
    const double fLow = std::min(a.frequency, ref.frequency);
    const double fHigh = std::max(a.frequency, ref.frequency);
    const double duration = nCycles / fLow;
    const double dt = 1.0 / (samplesPerCycle * fHigh);
    const long n = std::max(1L, static_cast<long>(std::floor(duration / dt + 1e-9)));
    double sum = 0.0;
    for (long i = 0; i < n; ++i) {
        const double t = i * dt;
        const Point3 pa = wingtip_position(a, t);
        const Point3 pr = wingtip_position(ref, t);
        sum += std::sqrt((pa[0] - pr[0]) * (pa[0] - pr[0]) + (pa[1] - pr[1]) * (pa[1] - pr[1]) +
                         (pa[2] - pr[2]) * (pa[2] - pr[2]));
    }
    return sum / n / a.semiSpan;
}

inline double min_resolution_distance(double d, const EyeModel& eye = {}) {
    if (d < 0.0) throw DomainError("min_resolution_distance: d must be non-negative");
    return d / eye.cEye;
}

inline double shape_distance(double sAircraft, double sAnimal, const EyeModel& eye = {}) {
    if (!(sAircraft > 0.0 && sAnimal > 0.0)) throw DomainError("shape_distance: spans must be positive");
    return sAircraft > sAnimal ? (sAircraft - sAnimal) / eye.cEye : 0.0;
}

/// Largest pairwise dissimilarity among trajectories at the corners and midpoints of a mode's ranges.
inline double individual_variability(const FlightModeRange& mode, double semiSpan, int nCycles = 10,
                                     int samplesPerCycle = 200) {
    mode.validate();
    auto levels = [](const Range& r) {
        std::vector<double> v{r.lo, r.mid(), r.hi};
        std::sort(v.begin(), v.end());
        v.erase(std::unique(v.begin(), v.end()), v.end());
        return v;
    };
    std::vector<TrajectoryParams> combos;
    for (double f : levels(mode.frequency))
        for (double b : levels(mode.planeAngle))
            for (double a : levels(mode.amplitude))
                for (double m : levels(mode.median)) combos.push_back({semiSpan, f, b, a, m});
    double best = 0.0;
    for (std::size_t i = 0; i < combos.size(); ++i)
        for (std::size_t j = i + 1; j < combos.size(); ++j)
            best = std::max(best, dynamic_dissimilarity(combos[i], combos[j], nCycles, samplesPerCycle));
    return best;
}

enum class VariabilitySource { Published, Computed, Overall };

struct MbsdBreakdown {
    double shape = 0.0;
    double trajectory = 0.0;
    double cDynamic = 0.0;
    double cIndividual = 0.0;
    double total() const { return shape + trajectory; }
};

struct MbsdOptions {
    double sAnimal = 0.030;
    EyeModel eye;
    VariabilitySource source = VariabilitySource::Published;
    int nCycles = 10;
    int samplesPerCycle = 200;
};

inline double resolve_variability(const FlightModeRange& mode, double semiSpan, const MbsdOptions& o) {
    switch (o.source) {
    case VariabilitySource::Published: return mode.individualVariability;
    case VariabilitySource::Overall: return kOverallIndividualVariability;
    case VariabilitySource::Computed: return individual_variability(mode, semiSpan, o.nCycles, o.samplesPerCycle);
    }
    return mode.individualVariability;
}

/// Shape plus trajectory distance for an aircraft wingtip path against a reference.
inline MbsdBreakdown mbsd_breakdown(const TrajectoryParams& aircraft, const TrajectoryParams& ref,
                                    const FlightModeRange& mode, const MbsdOptions& o = {}) {
    MbsdBreakdown b;
    b.shape = shape_distance(aircraft.semiSpan, o.sAnimal, o.eye);
    b.cDynamic = dynamic_dissimilarity(aircraft, ref, o.nCycles, o.samplesPerCycle);
    b.cIndividual = resolve_variability(mode, aircraft.semiSpan, o);
    b.trajectory = aircraft.semiSpan * std::max(b.cDynamic - b.cIndividual, 0.0) / o.eye.cEye;
    return b;
}

inline MbsdBreakdown mbsd_breakdown(const DesignPoint& d, const TrajectoryParams& ref, const FlightModeRange& mode,
                                    const MbsdOptions& o = {}) {
    return mbsd_breakdown(aircraft_trajectory(d), ref, mode, o);
}

inline double mbsd(const DesignPoint& d, const TrajectoryParams& ref, const FlightModeRange& mode,
                   const MbsdOptions& o = {}) {
    return mbsd_breakdown(d, ref, mode, o).total();
}

/// Hover-mode MBSD of a design against the reference path scaled to its own span.
inline MbsdBreakdown hover_mbsd(const DesignPoint& d, const MbsdOptions& o = {}) {
    return mbsd_breakdown(d, hover_reference(d.R), flight_mode("hovering"), o);
}

} // namespace flapmav
