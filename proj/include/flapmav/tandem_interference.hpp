#pragma once

#include <array>
#include <cmath>

#include "constants.hpp"
#include "errors.hpp"
#include "quasi_steady_aero.hpp"

namespace flapmav {

struct TandemFeatures {
    std::array<double, 12> x{};
    double operator[](std::size_t i) const { return x[i]; }
    double& operator[](std::size_t i) { return x[i]; }
};

struct TandemCoefficients {
    double cTF = 0.0;
    double cTH = 0.0;
};

/// Normalizers for the regression features.
struct TandemScales {
    double amp = 1.0;   // total stroke (rad)
    double wMaxF = 1.0; // peak rates (rad/s)
    double wMaxH = 1.0;
    double wMaxD = 1.0;
};

inline TandemFeatures features(double phiF, double phiDotF, double phiH, double phiDotH, double amp,
                               double wMaxF, double wMaxH, double wMaxD) {
    if (!(amp > 0.0) || !(wMaxF > 0.0) || !(wMaxH > 0.0) || !(wMaxD > 0.0))
        throw DomainError("tandem features: amplitude and peak rates must be positive");
    TandemFeatures f;
    f[0] = phiDotF / (wMaxF * amp);
    f[1] = phiDotH / (wMaxH * amp);
    f[2] = (phiDotF - phiDotH) / (wMaxD * amp);
    f[3] = phiF / amp;
    f[4] = phiH / amp;
    f[5] = (phiF - phiH) / amp;
    const double s = kPi / amp;
    f[6] = std::sin(2.0 * phiF * s);
    f[7] = std::sin(2.0 * phiH * s);
    f[8] = std::sin(4.0 * phiF * s);
    f[9] = std::sin(4.0 * phiH * s);
    f[10] = std::sin(8.0 * phiF * s);
    f[11] = std::sin(8.0 * phiH * s);
    return f;
}

inline TandemFeatures features(double phiF, double phiDotF, double phiH, double phiDotH, const TandemScales& s) {
    return features(phiF, phiDotF, phiH, phiDotH, s.amp, s.wMaxF, s.wMaxH, s.wMaxD);
}

/// Fitted interference coefficients, in percent.
inline TandemCoefficients coefficients(const TandemFeatures& f) {
    const double X0 = f[0], X1 = f[1], X2 = f[2], X3 = f[3], X4 = f[4], X5 = f[5];
    const double X6 = f[6], X7 = f[7], X8 = f[8], X9 = f[9], X10 = f[10], X11 = f[11];
    TandemCoefficients c;
    c.cTF = X0 * X8 *
                (-11.453 * X0 * (-5.0 * X6 + X7) - 22.906 * X1 + 11.453 * X2 - 11.453 * X4 + 11.453 * X5 -
                 11.453 * X7 - 11.453 * std::sin(std::sin(X8))) +
            X0 * X9 *
                (11.453 * X10 + 11.453 * X11 + 11.453 * X2 - 22.906 * X4 - 11.453 * X5 * (X1 - X11 - X5) -
                 11.453 * X7) +
            9.0 * X1 - 7.892 * X2 + 7.892 * X4 + X8 - 6.166;

    const double sumA = X3 + X4 + X6 + X7;
    const double inner = -2.0 * X1 - X10 - X11 + X2 - X7 * (X1 + X7 - std::sin(X10 - X5)) * (X1 + X11 - X9 - 45.822) -
                         X8 - (X2 + X4 - std::sin(X1 - 124.935)) * (2.0 * X0 - 3.0 * X10 - X9 - 34.855) * sumA -
                         49.314;
    c.cTH = 49.314 * X1 - (X2 - X5 - std::sin(X1 - 124.935)) * (X2 + X4 - X8 - 0.994) * sumA * inner;
    return c;
}

struct TandemApplied {
    WingLoads loads;
    bool clamped = false;
};

/// Scales a load set by (1 + c); c at or below -1 is clamped to full cancellation.
inline TandemApplied apply(const WingLoads& in, double c) {
    TandemApplied out;
    if (c <= -1.0) {
        c = -1.0;
        out.clamped = true;
    }
    const double s = 1.0 + c;
    out.loads = in;
    out.loads.Fx *= s;
    out.loads.Fy *= s;
    out.loads.Fz *= s;
    out.loads.Ty *= s;
    out.loads.Tz *= s;
    out.loads.translational = in.translational.scaled(s);
    out.loads.rotational = in.rotational.scaled(s);
    out.loads.addedMass = in.addedMass.scaled(s);
    return out;
}

} // namespace flapmav
