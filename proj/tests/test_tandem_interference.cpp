#include <gtest/gtest.h>

#include <cmath>

#include "flapmav/tandem_interference.hpp"

using namespace flapmav;

namespace {

WingLoads sample_loads() {
    LoadComponent tr{-0.02, 0.0, 0.004, 3e-5, 1e-3};
    LoadComponent rot{0.005, 0.0, 0.0, -2e-5, -4e-4};
    LoadComponent add{-0.001, 0.0, 0.0, 1e-6, 5e-5};
    return WingLoads::from_components(tr, rot, add);
}

} // namespace

TEST(TandemFeatures, NormalizedRatesAndAngles) {
    const double amp = 2.0, wF = 100.0, wH = 80.0, wD = 50.0;
    const TandemFeatures f = features(0.3, 40.0, -0.2, -10.0, amp, wF, wH, wD);
    EXPECT_DOUBLE_EQ(f[0], 40.0 / (wF * amp));
    EXPECT_DOUBLE_EQ(f[1], -10.0 / (wH * amp));
    EXPECT_DOUBLE_EQ(f[2], 50.0 / (wD * amp));
    EXPECT_DOUBLE_EQ(f[3], 0.15);
    EXPECT_DOUBLE_EQ(f[4], -0.1);
    EXPECT_DOUBLE_EQ(f[5], 0.25);
    EXPECT_DOUBLE_EQ(f[6], std::sin(2.0 * 0.3 * kPi / amp));
    EXPECT_DOUBLE_EQ(f[9], std::sin(4.0 * -0.2 * kPi / amp));
    EXPECT_DOUBLE_EQ(f[10], std::sin(8.0 * 0.3 * kPi / amp));
}

TEST(TandemFeatures, ScalesOverloadMatches) {
    const TandemScales s{1.5, 90.0, 70.0, 60.0};
    const TandemFeatures a = features(0.2, 10.0, 0.1, -5.0, s);
    const TandemFeatures b = features(0.2, 10.0, 0.1, -5.0, 1.5, 90.0, 70.0, 60.0);
    for (std::size_t i = 0; i < 12; ++i) EXPECT_EQ(a[i], b[i]);
}

TEST(TandemFeatures, RejectsNonPositiveScales) {
    EXPECT_THROW(features(0, 0, 0, 0, 0.0, 1, 1, 1), DomainError);
    EXPECT_THROW(features(0, 0, 0, 0, 1.0, 0, 1, 1), DomainError);
    EXPECT_THROW(features(0, 0, 0, 0, 1.0, 1, 1, -1), DomainError);
}

TEST(TandemCoefficients, ZeroFeaturesGiveConstantTerms) {
    const TandemCoefficients c = coefficients(TandemFeatures{});
    EXPECT_EQ(c.cTF, -6.166);
    EXPECT_EQ(c.cTH, 0.0);
}

TEST(TandemCoefficients, FiniteOverFeatureBox) {
    for (double pf : {-1.2, -0.4, 0.0, 0.7, 1.3})
        for (double rate : {-150.0, 0.0, 150.0}) {
            const TandemCoefficients c = coefficients(features(pf, rate, -pf, -rate, 2.6, 150.0, 150.0, 150.0));
            EXPECT_TRUE(std::isfinite(c.cTF));
            EXPECT_TRUE(std::isfinite(c.cTH));
        }
}

TEST(TandemApply, ZeroCoefficientIsIdentity) {
    const WingLoads in = sample_loads();
    const TandemApplied out = apply(in, 0.0);
    EXPECT_FALSE(out.clamped);
    EXPECT_EQ(out.loads.Fx, in.Fx);
    EXPECT_EQ(out.loads.Fy, in.Fy);
    EXPECT_EQ(out.loads.Fz, in.Fz);
    EXPECT_EQ(out.loads.Ty, in.Ty);
    EXPECT_EQ(out.loads.Tz, in.Tz);
    EXPECT_EQ(out.loads.translational.Fx, in.translational.Fx);
    EXPECT_EQ(out.loads.rotational.Tz, in.rotational.Tz);
    EXPECT_EQ(out.loads.addedMass.Ty, in.addedMass.Ty);
}

TEST(TandemApply, ScalesEveryField) {
    const WingLoads in = sample_loads();
    const TandemApplied out = apply(in, -0.25);
    EXPECT_DOUBLE_EQ(out.loads.Fx, 0.75 * in.Fx);
    EXPECT_DOUBLE_EQ(out.loads.Fz, 0.75 * in.Fz);
    EXPECT_DOUBLE_EQ(out.loads.Tz, 0.75 * in.Tz);
    EXPECT_DOUBLE_EQ(out.loads.rotational.Ty, 0.75 * in.rotational.Ty);
}

TEST(TandemApply, ClampsAtFullCancellation) {
    const WingLoads in = sample_loads();
    for (double c : {-1.0, -1.5, -40.0}) {
        const TandemApplied out = apply(in, c);
        EXPECT_TRUE(out.clamped);
        EXPECT_EQ(out.loads.Fx, 0.0);
        EXPECT_EQ(out.loads.Tz, 0.0);
        EXPECT_EQ(out.loads.translational.Fz, 0.0);
    }
    EXPECT_FALSE(apply(in, -0.999).clamped);
}
