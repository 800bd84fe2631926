#pragma once

#include <cmath>

#include "errors.hpp"

namespace flapmav {

/// Trapezoidal wing plate. Span runs along +Y from the flapping axis, chord
/// along +Z from the leading edge, thickness along X.
struct WingGeometry {
    double R = 0.075;
    double deltaR = 0.0;
    double cR = 0.0;
    double cT = 0.0;
    double thickness = 2.5e-5;
    double density = 1100.0;
    int nx = 2;
    int ny = 10;
    int nz = 10;

    void validate() const {
        if (!(R > deltaR && deltaR >= 0.0)) throw DomainError("wing: require R > deltaR >= 0");
        if (!(cR > 0.0 && cT > 0.0 && cT <= cR)) throw DomainError("wing: require 0 < cT <= cR");
        if (!(thickness > 0.0)) throw DomainError("wing: thickness must be positive");
        if (!(density >= 0.0)) throw DomainError("wing: density must be non-negative");
        if (nx < 2 || ny < 2 || nz < 2) throw DomainError("wing: discretization counts must be >= 2");
    }

    /// Wing built from a semi-span with fixed aspect ratio and tip/root chord ratio.
    static WingGeometry from_span(double span, double aspectRatio = 3.302, double taper = 0.40,
                                  double thickness = 2.5e-5, double density = 1100.0) {
        if (!(span > 0.0 && aspectRatio > 0.0 && taper > 0.0 && taper <= 1.0))
            throw DomainError("wing: invalid span, aspect ratio or taper");
        WingGeometry g;
        g.R = span;
        g.deltaR = 0.0;
        const double meanChord = span / aspectRatio;
        g.cR = 2.0 * meanChord / (1.0 + taper);
        g.cT = taper * g.cR;
        g.thickness = thickness;
        g.density = density;
        return g;
    }
};

struct Morphology {
    double meanChord = 0.0;
    double area = 0.0;
    double aspectRatio = 0.0;
    double r2 = 0.0;
    double R2 = 0.0;
    double chordSecondMoment = 0.0; // integral of c(r) r^2 over the span
};

struct InertiaTensor {
    double Jxx = 0.0;
    double Jyy = 0.0;
    double Jzz = 0.0;
    double Jyz = 0.0;
};

inline double chord_at(const WingGeometry& g, double r) {
    const double tol = 1e-12 * g.R;
    if (r < g.deltaR - tol || r > g.R + tol) throw DomainError("chord_at: r outside [deltaR, R]");
    const double s = (r - g.deltaR) / (g.R - g.deltaR);
    return g.cR + (g.cT - g.cR) * s;
}

inline Morphology morphology(const WingGeometry& g) {
    g.validate();
    Morphology m;
    const double len = g.R - g.deltaR;
    m.meanChord = 0.5 * (g.cR + g.cT);
    m.area = m.meanChord * len;
    m.aspectRatio = g.R * g.R / m.area;

    // c(r) = a + k r
    const double k = (g.cT - g.cR) / len;
    const double a = g.cR - k * g.deltaR;
    const double r0 = g.deltaR, r1 = g.R;
    m.chordSecondMoment = a * (r1 * r1 * r1 - r0 * r0 * r0) / 3.0 +
                          k * (r1 * r1 * r1 * r1 - r0 * r0 * r0 * r0) / 4.0;
    m.R2 = std::sqrt(m.chordSecondMoment / m.area);
    m.r2 = m.R2 / g.R;
    return m;
}

/// Point-mass cuboid sum; each cell's mass sits at its centroid.
inline InertiaTensor wing_inertia(const WingGeometry& g) {
    g.validate();
    const double dy = (g.R - g.deltaR) / g.ny;
    const double dx = g.thickness / g.nx;
    if (!(dy > 0.0 && dx > 0.0)) throw DomainError("wing_inertia: zero-volume geometry");

    InertiaTensor J;
    for (int j = 0; j < g.ny; ++j) {
        const double y = g.deltaR + (j + 0.5) * dy;
        const double c = chord_at(g, y);
        const double dz = c / g.nz;
        const double m = g.density * dx * dy * dz;
        for (int k = 0; k < g.nz; ++k) {
            const double z = (k + 0.5) * dz;
            for (int i = 0; i < g.nx; ++i) {
                const double x = -0.5 * g.thickness + (i + 0.5) * dx;
                J.Jxx += m * (y * y + z * z);
                J.Jyy += m * (x * x + z * z);
                J.Jzz += m * (x * x + y * y);
                J.Jyz += m * y * z;
            }
        }
    }
    return J;
}

} // namespace flapmav
