#pragma once

#include <algorithm>
#include <array>
#include <limits>
#include <vector>

#include "../errors.hpp"

namespace flapmav::optim {

using Point2 = std::array<double, 2>;

inline bool dominates(const std::vector<double>& a, const std::vector<double>& b) {
    bool strictly = false;
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i] > b[i]) return false;
        if (a[i] < b[i]) strictly = true;
    }
    return strictly;
}

/// Indices of the non-dominated fronts, best first.
inline std::vector<std::vector<int>> nondominated_fronts(const std::vector<std::vector<double>>& f) {
    const int n = static_cast<int>(f.size());
    std::vector<std::vector<int>> dominated(n);
    std::vector<int> count(n, 0);
    std::vector<std::vector<int>> fronts(1);
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            if (dominates(f[i], f[j])) {
                dominated[i].push_back(j);
                ++count[j];
            } else if (dominates(f[j], f[i])) {
                dominated[j].push_back(i);
                ++count[i];
            }
        }
    }
    for (int i = 0; i < n; ++i)
        if (count[i] == 0) fronts[0].push_back(i);
    while (!fronts.back().empty()) {
        std::vector<int> next;
        for (int i : fronts.back())
            for (int j : dominated[i])
                if (--count[j] == 0) next.push_back(j);
        std::sort(next.begin(), next.end());
        fronts.push_back(next);
    }
    fronts.pop_back();
    return fronts;
}

/// Area dominated by a set of 2-D points (minimization) and bounded by `ref`.
inline double hypervolume_2d(std::vector<Point2> pts, const Point2& ref) {
    pts.erase(std::remove_if(pts.begin(), pts.end(),
                             [&](const Point2& p) { return !(p[0] < ref[0] && p[1] < ref[1]); }),
              pts.end());
    std::sort(pts.begin(), pts.end());
    double hv = 0.0;
    double lastY = ref[1];
    for (const Point2& p : pts) {
        if (p[1] < lastY) {
            hv += (ref[0] - p[0]) * (lastY - p[1]);
            lastY = p[1];
        }
    }
    return hv;
}

/// Exclusive contribution of each point of a mutually non-dominated 2-D set; the two extremes get +inf.
inline std::vector<double> hypervolume_contributions_2d(const std::vector<Point2>& front) {
    const std::size_t n = front.size();
    std::vector<double> c(n, std::numeric_limits<double>::infinity());
    if (n <= 2) return c;
    std::vector<std::size_t> order(n);
    for (std::size_t i = 0; i < n; ++i) order[i] = i;
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return front[a][0] < front[b][0] || (front[a][0] == front[b][0] && front[a][1] > front[b][1]);
    });
    for (std::size_t k = 1; k + 1 < n; ++k) {
        const Point2& p = front[order[k]];
        const Point2& left = front[order[k - 1]];
        const Point2& right = front[order[k + 1]];
        c[order[k]] = (right[0] - p[0]) * (left[1] - p[1]);
    }
    return c;
}

/// Exclusive contributions clipped to the box bounded by `ref`; points outside it contribute zero.
inline std::vector<double> hypervolume_contributions_2d(const std::vector<Point2>& front, const Point2& ref) {
    const std::size_t n = front.size();
    std::vector<std::size_t> order(n);
    for (std::size_t i = 0; i < n; ++i) order[i] = i;
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return front[a][0] < front[b][0] || (front[a][0] == front[b][0] && front[a][1] > front[b][1]);
    });
    std::vector<double> c(n, 0.0);
    for (std::size_t k = 0; k < n; ++k) {
        const Point2& p = front[order[k]];
        const double right = k + 1 < n ? std::min(front[order[k + 1]][0], ref[0]) : ref[0];
        const double up = k > 0 ? std::min(front[order[k - 1]][1], ref[1]) : ref[1];
        c[order[k]] = std::max(0.0, right - p[0]) * std::max(0.0, up - p[1]);
    }
    return c;
}

} // namespace flapmav::optim
