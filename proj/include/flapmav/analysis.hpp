#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <string>
#include <vector>

#include "errors.hpp"

namespace flapmav {

struct SampleTable {
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;

    std::size_t column(const std::string& name) const {
        for (std::size_t i = 0; i < columns.size(); ++i)
            if (columns[i] == name) return i;
        throw LookupError("sample table has no column '" + name + "'");
    }

    std::vector<double> values(std::size_t c) const {
        std::vector<double> v;
        v.reserve(rows.size());
        for (const auto& r : rows) v.push_back(r.at(c));
        return v;
    }

    std::vector<double> values(const std::string& name) const { return values(column(name)); }

    /// Rows for which `keep` returns true.
    template <class Pred>
    SampleTable filter(Pred keep) const {
        SampleTable t;
        t.columns = columns;
        for (const auto& r : rows)
            if (keep(r)) t.rows.push_back(r);
        return t;
    }
};

inline double pearson(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size()) throw DomainError("pearson: length mismatch");
    if (x.size() < 2) throw DomainError("pearson: need at least 2 rows");
    const double n = static_cast<double>(x.size());
    const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
    const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
    double sxy = 0.0, sxx = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxy += (x[i] - mx) * (y[i] - my);
        sxx += (x[i] - mx) * (x[i] - mx);
        syy += (y[i] - my) * (y[i] - my);
    }
    if (sxx <= 0.0 || syy <= 0.0) return std::numeric_limits<double>::quiet_NaN();
    return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

/// Correlation matrix; entries involving a constant column are NaN.
inline std::vector<std::vector<double>> pearson_matrix(const SampleTable& t, const std::vector<std::string>& cols) {
    if (t.rows.size() < 2) throw DomainError("pearson_matrix: need at least 2 rows");
    std::vector<std::vector<double>> data;
    for (const auto& c : cols) data.push_back(t.values(c));
    const std::size_t m = cols.size();
    std::vector<std::vector<double>> r(m, std::vector<double>(m));
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = i; j < m; ++j) {
            double v = pearson(data[i], data[j]);
            if (i == j && !std::isnan(v)) v = 1.0;
            r[i][j] = r[j][i] = v;
        }
    return r;
}

struct ImportanceResult {
    std::vector<std::string> features;
    std::vector<double> importance;
    std::vector<double> mseIncrease;
    double baselineMse = 0.0;
    bool signal = true;
};

struct ImportanceOptions {
    int k = 10;
    int shuffles = 10;
    unsigned long long seed = 1;
    double minRelativeIncrease = 0.1; // fraction of the baseline MSE
};

namespace detail {

/// Leave-one-out kNN predictions of every query row against the reference rows.
inline double knn_loo_mse(const std::vector<std::vector<double>>& ref, const std::vector<std::vector<double>>& query,
                          const std::vector<double>& y, int k) {
    const std::size_t n = ref.size();
    const std::size_t kk = std::min<std::size_t>(static_cast<std::size_t>(k), n - 1);
    std::vector<std::pair<double, std::size_t>> d(n);
    double mse = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            double s = 0.0;
            for (std::size_t c = 0; c < query[i].size(); ++c) {
                const double diff = query[i][c] - ref[j][c];
                s += diff * diff;
            }
            d[j] = {j == i ? std::numeric_limits<double>::infinity() : s, j};
        }
        std::nth_element(d.begin(), d.begin() + static_cast<long>(kk), d.end());
        double pred = 0.0;
        for (std::size_t a = 0; a < kk; ++a) pred += y[d[a].second];
        pred /= static_cast<double>(kk);
        mse += (pred - y[i]) * (pred - y[i]);
    }
    return mse / static_cast<double>(n);
}

} // namespace detail

/// Permutation importance of a k-nearest-neighbour regressor on standardized inputs.
inline ImportanceResult permutation_importance(const SampleTable& t, const std::string& target,
                                               const std::vector<std::string>& features,
                                               const ImportanceOptions& o = {}) {
    if (t.rows.size() < 50) throw DomainError("permutation_importance: need at least 50 rows");
    if (features.empty()) throw DomainError("permutation_importance: no feature columns");
    const std::vector<double> y = t.values(target);
    const double ym = std::accumulate(y.begin(), y.end(), 0.0) / static_cast<double>(y.size());
    double yv = 0.0;
    for (double v : y) yv += (v - ym) * (v - ym);
    if (!(yv > 0.0) || !std::isfinite(yv)) throw DomainError("permutation_importance: degenerate target");

    const std::size_t n = t.rows.size(), d = features.size();
    std::vector<std::vector<double>> X(n, std::vector<double>(d));
    for (std::size_t c = 0; c < d; ++c) {
        const auto col = t.values(features[c]);
        const double m = std::accumulate(col.begin(), col.end(), 0.0) / static_cast<double>(n);
        double v = 0.0;
        for (double x : col) v += (x - m) * (x - m);
        const double sd = std::sqrt(v / static_cast<double>(n));
        for (std::size_t i = 0; i < n; ++i) X[i][c] = sd > 0.0 ? (col[i] - m) / sd : 0.0;
    }

    ImportanceResult r;
    r.features = features;
    r.baselineMse = detail::knn_loo_mse(X, X, y, o.k);
    std::mt19937_64 rng(o.seed);
    std::vector<double> mean(d, 0.0), stderr_(d, 0.0);
    for (std::size_t c = 0; c < d; ++c) {
        std::vector<double> deltas;
        for (int s = 0; s < o.shuffles; ++s) {
            std::vector<std::size_t> perm(n);
            std::iota(perm.begin(), perm.end(), 0);
            std::shuffle(perm.begin(), perm.end(), rng);
            auto Q = X;
            for (std::size_t i = 0; i < n; ++i) Q[i][c] = X[perm[i]][c];
            deltas.push_back(detail::knn_loo_mse(X, Q, y, o.k) - r.baselineMse);
        }
        const double m = std::accumulate(deltas.begin(), deltas.end(), 0.0) / static_cast<double>(deltas.size());
        double v = 0.0;
        for (double x : deltas) v += (x - m) * (x - m);
        const double sd = deltas.size() > 1 ? std::sqrt(v / static_cast<double>(deltas.size() - 1)) : 0.0;
        mean[c] = m;
        stderr_[c] = sd / std::sqrt(static_cast<double>(deltas.size()));
    }
    r.mseIncrease = mean;

    // A column counts only if shuffling it raises the error beyond shuffle noise and the noise floor.
    std::vector<double> imp(d, 0.0);
    double total = 0.0;
    const double floor = o.minRelativeIncrease * r.baselineMse;
    for (std::size_t c = 0; c < d; ++c)
        if (mean[c] > floor && mean[c] > 2.0 * stderr_[c]) {
            imp[c] = mean[c];
            total += mean[c];
        }
    if (total > 0.0) {
        for (double& v : imp) v /= total;
    } else {
        r.signal = false;
        std::fill(imp.begin(), imp.end(), 1.0 / static_cast<double>(d));
    }
    r.importance = imp;
    return r;
}

enum class RatioKind { LhdPerMbsd, MbsdPerMiffs };

struct RatioBin {
    double lo = 0.0;
    double hi = 0.0;
    int count = 0;
    double meanRatio = std::numeric_limits<double>::quiet_NaN();
};

struct RatioStudy {
    std::vector<double> ratio; // per row, +inf where the denominator is zero
    std::vector<RatioBin> bins;
    int zeroMbsdRows = 0;
    bool monotoneIncreasing = false;
    bool monotoneDecreasing = false;
};

/// Per-row ratio and its mean over equal-width MBSD bins; zero-MBSD rows are counted, not binned.
inline RatioStudy ratio_study(const std::vector<double>& mbsd, const std::vector<double>& other, RatioKind kind,
                              int nBins = 10) {
    if (mbsd.size() != other.size()) throw DomainError("ratio_study: length mismatch");
    if (nBins < 1) throw DomainError("ratio_study: need at least one bin");
    RatioStudy s;
    const double inf = std::numeric_limits<double>::infinity();
    double maxM = 0.0;
    for (std::size_t i = 0; i < mbsd.size(); ++i) {
        double r;
        if (kind == RatioKind::LhdPerMbsd) r = mbsd[i] == 0.0 ? inf : other[i] / mbsd[i];
        else r = other[i] == 0.0 ? inf : mbsd[i] / other[i];
        s.ratio.push_back(r);
        if (mbsd[i] == 0.0) ++s.zeroMbsdRows;
        else maxM = std::max(maxM, mbsd[i]);
    }
    if (maxM <= 0.0) return s;
    s.bins.resize(nBins);
    std::vector<double> sum(nBins, 0.0);
    for (int b = 0; b < nBins; ++b) {
        s.bins[b].lo = maxM * b / nBins;
        s.bins[b].hi = maxM * (b + 1) / nBins;
    }
    for (std::size_t i = 0; i < mbsd.size(); ++i) {
        if (mbsd[i] == 0.0 || !std::isfinite(s.ratio[i])) continue;
        const int b = std::min(nBins - 1, static_cast<int>(mbsd[i] / maxM * nBins));
        sum[b] += s.ratio[i];
        ++s.bins[b].count;
    }
    std::vector<double> means;
    for (int b = 0; b < nBins; ++b)
        if (s.bins[b].count > 0) {
            s.bins[b].meanRatio = sum[b] / s.bins[b].count;
            means.push_back(s.bins[b].meanRatio);
        }
    s.monotoneIncreasing = s.monotoneDecreasing = means.size() >= 2;
    for (std::size_t i = 1; i < means.size(); ++i) {
        if (means[i] < means[i - 1]) s.monotoneIncreasing = false;
        if (means[i] > means[i - 1]) s.monotoneDecreasing = false;
    }
    return s;
}

} // namespace flapmav
