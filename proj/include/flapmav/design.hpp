#pragma once

#include <array>
#include <cmath>
#include <string>

#include "constants.hpp"
#include "errors.hpp"

namespace flapmav {

/// The five design variables. phiAm is the half-stroke amplitude in degrees.
struct DesignPoint {
    double phiAm = 80.0;
    double fWing = 34.0;
    double R = 0.075;
    int idMotor = 3;
    double gammaTr = 25.0;

    struct Bounds {
        double lo, hi;
    };
    static constexpr Bounds kPhiAm{10.0, 85.0};
    static constexpr Bounds kFreq{15.0, 50.0};
    static constexpr Bounds kSpan{0.05, 0.12};
    static constexpr Bounds kMotor{0.0, 20.0};
    static constexpr Bounds kGamma{5.0, 35.0};

    static constexpr std::array<const char*, 5> kNames{"phiAm", "fWing", "R", "idMotor", "gammaTr"};

    static std::array<Bounds, 5> bounds() { return {kPhiAm, kFreq, kSpan, kMotor, kGamma}; }

    void validate() const {
        auto check = [](double v, Bounds b, const char* name) {
            if (!(v >= b.lo && v <= b.hi))
                throw DomainError(std::string("design: ") + name + " = " + std::to_string(v) + " outside [" +
                                  std::to_string(b.lo) + ", " + std::to_string(b.hi) + "]");
        };
        check(phiAm, kPhiAm, "phiAm");
        check(fWing, kFreq, "fWing");
        check(R, kSpan, "R");
        check(idMotor, kMotor, "idMotor");
        check(gammaTr, kGamma, "gammaTr");
    }

    double amplitudeRad() const { return deg2rad(phiAm); }
    double totalStrokeRad() const { return 2.0 * deg2rad(phiAm); }

    std::array<double, 5> to_vector() const { return {phiAm, fWing, R, static_cast<double>(idMotor), gammaTr}; }

    static DesignPoint from_vector(const std::array<double, 5>& x) {
        DesignPoint d;
        d.phiAm = x[0];
        d.fWing = x[1];
        d.R = x[2];
        d.idMotor = static_cast<int>(std::lround(x[3]));
        d.gammaTr = x[4];
        return d;
    }
};

} // namespace flapmav
