#include <gtest/gtest.h>

#include <cmath>

#include "flapmav/wing_geometry.hpp"

using namespace flapmav;

namespace {

WingGeometry table_wing() {
    WingGeometry g;
    g.R = 0.080;
    g.deltaR = 0.0;
    g.cR = 0.0333;
    g.cT = 0.020;
    g.thickness = 2.5e-5;
    g.density = 1100.0;
    return g;
}

// Composite Simpson rule.
template <class F>
double simpson(F f, double a, double b, int n = 2000) {
    const double h = (b - a) / n;
    double s = f(a) + f(b);
    for (int i = 1; i < n; ++i) s += f(a + i * h) * (i % 2 ? 4.0 : 2.0);
    return s * h / 3.0;
}

} // namespace

TEST(WingGeometry, ChordEndpointsAndMidpoint) {
    const WingGeometry g = table_wing();
    EXPECT_NEAR(chord_at(g, 0.0), 0.0333, 1e-15);
    EXPECT_NEAR(chord_at(g, 0.080), 0.020, 1e-15);
    EXPECT_NEAR(chord_at(g, 0.040), 0.02665, 1e-15);
}

TEST(WingGeometry, ChordOutsideSpanThrows) {
    const WingGeometry g = table_wing();
    EXPECT_THROW(chord_at(g, -0.001), DomainError);
    EXPECT_THROW(chord_at(g, 0.081), DomainError);
}

TEST(WingGeometry, MorphologyMatchesNumericIntegrals) {
    const WingGeometry g = table_wing();
    const Morphology m = morphology(g);
    auto c = [&](double r) { return 0.0333 + (0.020 - 0.0333) * r / 0.080; };
    const double area = simpson(c, 0.0, 0.080);
    const double second = simpson([&](double r) { return c(r) * r * r; }, 0.0, 0.080);
    EXPECT_NEAR(m.area, area, 1e-12);
    EXPECT_NEAR(m.area * 1e6, 2132.0, 0.5);
    EXPECT_NEAR(m.aspectRatio, 0.080 * 0.080 / area, 1e-9);
    EXPECT_NEAR(m.aspectRatio, 3.002, 1e-3);
    EXPECT_NEAR(m.chordSecondMoment * 1e12, 3.9808e6, 1e2);
    EXPECT_NEAR(m.r2, std::sqrt(second / area) / 0.080, 1e-9);
    EXPECT_NEAR(m.r2, 0.540, 1e-3);
}

TEST(WingGeometry, FromSpanHonoursAspectRatioAndTaper) {
    for (double span : {0.05, 0.075, 0.12}) {
        const WingGeometry g = WingGeometry::from_span(span, 3.302, 0.4);
        const Morphology m = morphology(g);
        EXPECT_NEAR(m.aspectRatio, 3.302, 1e-12);
        EXPECT_NEAR(g.cT / g.cR, 0.4, 1e-12);
        EXPECT_DOUBLE_EQ(g.R, span);
    }
}

TEST(WingGeometry, InvalidGeometryRejected) {
    WingGeometry g = table_wing();
    g.cT = 0.04;
    EXPECT_THROW(g.validate(), DomainError);
    g = table_wing();
    g.nx = 1;
    EXPECT_THROW(wing_inertia(g), DomainError);
    g = table_wing();
    g.deltaR = g.R;
    EXPECT_THROW(morphology(g), DomainError);
    EXPECT_THROW(WingGeometry::from_span(-0.1), DomainError);
}

TEST(WingInertia, ConvergesToContinuousPlateIntegrals) {
    WingGeometry g = table_wing();
    g.ny = 400;
    g.nz = 400;
    const InertiaTensor J = wing_inertia(g);
    const double rt = g.density * g.thickness;
    auto c = [&](double r) { return chord_at(g, r); };
    // Integrate over z in closed form, then over the span numerically.
    const double Jyz = simpson([&](double y) { return rt * y * c(y) * c(y) / 2.0; }, 0.0, g.R);
    const double zz = simpson([&](double y) { return rt * c(y) * c(y) * c(y) / 3.0; }, 0.0, g.R);
    const double yy = simpson([&](double y) { return rt * y * y * c(y); }, 0.0, g.R);
    const double xx = simpson([&](double y) { return rt * c(y) * g.thickness * g.thickness / 12.0; }, 0.0, g.R);
    EXPECT_NEAR(J.Jyz / Jyz, 1.0, 1e-4);
    EXPECT_NEAR(J.Jxx / (yy + zz), 1.0, 1e-4);
    EXPECT_NEAR(J.Jyy / (xx + zz), 1.0, 1e-4);
    EXPECT_NEAR(J.Jzz / (xx + yy), 1.0, 1e-4);
}

TEST(WingInertia, ThinPlatePerpendicularAxisRelation) {
    const WingGeometry g = table_wing();
    const InertiaTensor J = wing_inertia(g);
    // Jyy + Jzz - Jxx = 2 sum m x^2, which is tiny for a thin plate.
    const double rt = g.density * g.thickness;
    const double twoSumX2 = 2.0 * rt * morphology(g).area * g.thickness * g.thickness / 16.0;
    EXPECT_NEAR(J.Jyy + J.Jzz - J.Jxx, twoSumX2, 1e-6 * J.Jxx);
}

TEST(WingInertia, RefinementChangesLessThanOnePercent) {
    const WingGeometry g = table_wing();
    WingGeometry fine = g;
    fine.ny *= 4;
    fine.nz *= 4;
    const InertiaTensor a = wing_inertia(g), b = wing_inertia(fine);
    EXPECT_LT(std::abs(a.Jxx / b.Jxx - 1.0), 0.01);
    EXPECT_LT(std::abs(a.Jyy / b.Jyy - 1.0), 0.01);
    EXPECT_LT(std::abs(a.Jzz / b.Jzz - 1.0), 0.01);
    EXPECT_LT(std::abs(a.Jyz / b.Jyz - 1.0), 0.01);
}

TEST(WingInertia, LinearInDensityAndPositive) {
    WingGeometry g = table_wing();
    const InertiaTensor a = wing_inertia(g);
    g.density *= 3.0;
    const InertiaTensor b = wing_inertia(g);
    EXPECT_NEAR(b.Jxx / a.Jxx, 3.0, 1e-12);
    EXPECT_NEAR(b.Jyz / a.Jyz, 3.0, 1e-12);
    EXPECT_GT(a.Jxx, 0.0);
    EXPECT_GT(a.Jyy, 0.0);
    EXPECT_GT(a.Jzz, 0.0);
    EXPECT_GT(a.Jyz, 0.0);
    EXPECT_LE(a.Jyz * a.Jyz, a.Jyy * a.Jzz);
}
