#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "flapmav/analysis.hpp"

using namespace flapmav;

namespace {

// Columns a..e uniform on [0, 1], plus targets driven by a, by a and b, and by nothing.
SampleTable synthetic(int n, unsigned seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> U(0.0, 1.0);
    SampleTable t;
    t.columns = {"a", "b", "c", "d", "e", "yA", "yAB", "noise"};
    for (int i = 0; i < n; ++i) {
        std::vector<double> r(8);
        for (int j = 0; j < 5; ++j) r[j] = U(rng);
        r[5] = r[0];
        r[6] = 3.0 * r[0] + r[1];
        r[7] = U(rng);
        t.rows.push_back(r);
    }
    return t;
}

const std::vector<std::string> kFeatures{"a", "b", "c", "d", "e"};

} // namespace

TEST(Pearson, PerfectAndAntiCorrelation) {
    const std::vector<double> x{1, 2, 3, 4, 5};
    EXPECT_DOUBLE_EQ(pearson(x, {2, 4, 6, 8, 10}), 1.0);
    EXPECT_DOUBLE_EQ(pearson(x, {5, 4, 3, 2, 1}), -1.0);
    EXPECT_TRUE(std::isnan(pearson(x, {7, 7, 7, 7, 7})));
    EXPECT_THROW(pearson(x, {1, 2}), DomainError);
    EXPECT_THROW(pearson({1.0}, {1.0}), DomainError);
}

TEST(Pearson, SymmetricBoundedAndAffineInvariant) {
    const SampleTable t = synthetic(200, 3);
    const auto x = t.values("a"), y = t.values("yAB");
    const double r = pearson(x, y);
    EXPECT_DOUBLE_EQ(r, pearson(y, x));
    EXPECT_LE(std::abs(r), 1.0);
    std::vector<double> scaled(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) scaled[i] = 4.0 * x[i] - 7.0;
    EXPECT_NEAR(pearson(scaled, y), r, 1e-12);
    for (std::size_t i = 0; i < x.size(); ++i) scaled[i] = -2.0 * x[i];
    EXPECT_NEAR(pearson(scaled, y), -r, 1e-12);
}

TEST(Pearson, MatrixHasUnitDiagonal) {
    const SampleTable t = synthetic(100, 4);
    const auto m = pearson_matrix(t, {"a", "b", "yA"});
    for (int i = 0; i < 3; ++i) EXPECT_DOUBLE_EQ(m[i][i], 1.0);
    EXPECT_NEAR(m[0][2], 1.0, 1e-12);
    EXPECT_DOUBLE_EQ(m[0][1], m[1][0]);
}

TEST(SampleTableOps, LookupAndFilter) {
    const SampleTable t = synthetic(60, 5);
    EXPECT_EQ(t.column("c"), 2u);
    EXPECT_THROW(t.column("zzz"), LookupError);
    const SampleTable half = t.filter([](const std::vector<double>& r) { return r[0] < 0.5; });
    for (double v : half.values("a")) EXPECT_LT(v, 0.5);
    EXPECT_LT(half.rows.size(), t.rows.size());
}

TEST(Importance, SingleDriverDominates) {
    const ImportanceResult r = permutation_importance(synthetic(300, 1), "yA", kFeatures);
    EXPECT_TRUE(r.signal);
    EXPECT_GT(r.importance[0], 0.9);
    double sum = 0.0;
    for (double v : r.importance) sum += v;
    EXPECT_NEAR(sum, 1.0, 1e-12);
}

TEST(Importance, RankingFollowsCoefficientSize) {
    const ImportanceResult r = permutation_importance(synthetic(300, 2), "yAB", kFeatures);
    EXPECT_GT(r.importance[0], r.importance[1]);
    for (std::size_t j = 2; j < 5; ++j) EXPECT_GT(r.importance[1], r.importance[j]);
}

TEST(Importance, NoiseTargetGivesUniformWeights) {
    const ImportanceResult r = permutation_importance(synthetic(300, 6), "noise", kFeatures);
    EXPECT_FALSE(r.signal);
    for (double v : r.importance) EXPECT_DOUBLE_EQ(v, 0.2);
}

TEST(Importance, NoiseTargetsStayNearUniformAcrossSeeds) {
    for (unsigned seed = 1; seed <= 10; ++seed) {
        const ImportanceResult r = permutation_importance(synthetic(300, seed), "noise", kFeatures);
        for (double v : r.importance) EXPECT_NEAR(v, 0.2, 0.15) << "seed " << seed;
    }
}

TEST(Importance, DeterministicUnderSeed) {
    const SampleTable t = synthetic(120, 8);
    const ImportanceResult a = permutation_importance(t, "yAB", kFeatures);
    const ImportanceResult b = permutation_importance(t, "yAB", kFeatures);
    EXPECT_EQ(a.importance, b.importance);
}

TEST(Importance, RejectsSmallOrDegenerateInput) {
    EXPECT_THROW(permutation_importance(synthetic(49, 1), "yA", kFeatures), DomainError);
    SampleTable t = synthetic(80, 1);
    for (auto& r : t.rows) r[5] = 1.0;
    EXPECT_THROW(permutation_importance(t, "yA", kFeatures), DomainError);
}

TEST(RatioStudy, LhdPerMbsdDecreasesWithDistance) {
    std::vector<double> mbsd, lhd;
    for (int i = 0; i <= 100; ++i) {
        mbsd.push_back(i * 5.0);
        lhd.push_back(300.0 + i);
    }
    const RatioStudy s = ratio_study(mbsd, lhd, RatioKind::LhdPerMbsd, 10);
    EXPECT_EQ(s.zeroMbsdRows, 1);
    EXPECT_TRUE(std::isinf(s.ratio[0]));
    EXPECT_TRUE(s.monotoneDecreasing);
    EXPECT_FALSE(s.monotoneIncreasing);
    int binned = 0;
    for (const auto& b : s.bins) binned += b.count;
    EXPECT_EQ(binned, 100);
    EXPECT_DOUBLE_EQ(s.bins.back().hi, 500.0);
}

TEST(RatioStudy, MbsdPerMiffsZeroSpeedIsInfinite) {
    const RatioStudy s = ratio_study({5.0, 15.0, 25.0}, {1.0, 0.0, 2.5}, RatioKind::MbsdPerMiffs, 3);
    EXPECT_DOUBLE_EQ(s.ratio[0], 5.0);
    EXPECT_TRUE(std::isinf(s.ratio[1]));
    EXPECT_EQ(s.bins[1].count, 0);
    EXPECT_TRUE(std::isnan(s.bins[1].meanRatio));
    EXPECT_TRUE(s.monotoneIncreasing);
}

TEST(RatioStudy, AllZeroMbsdHasNoBins) {
    const RatioStudy s = ratio_study({0.0, 0.0}, {1.0, 2.0}, RatioKind::LhdPerMbsd);
    EXPECT_TRUE(s.bins.empty());
    EXPECT_EQ(s.zeroMbsdRows, 2);
    EXPECT_THROW(ratio_study({1.0}, {}, RatioKind::LhdPerMbsd), DomainError);
}
