#pragma once

#include <algorithm>
#include <atomic>
#include <exception>
#include <functional>
#include <string>
#include <thread>
#include <vector>

#include "../errors.hpp"

namespace flapmav::optim {

struct SweepAxis {
    std::string name;
    double lo = 0.0;
    double hi = 0.0;
    int count = 1;

    double value(int i) const { return count == 1 ? lo : lo + (hi - lo) * i / (count - 1); }
};

struct SweepGrid {
    std::vector<SweepAxis> axes;

    std::size_t size() const {
        std::size_t n = axes.empty() ? 0 : 1;
        for (const auto& a : axes) n *= static_cast<std::size_t>(a.count);
        return n;
    }

    void validate() const {
        for (const auto& a : axes) {
            if (a.count < 1) throw DomainError("sweep: axis '" + a.name + "' needs at least one point");
            if (a.hi < a.lo) throw DomainError("sweep: axis '" + a.name + "' bounds not ordered");
        }
    }
};

struct SweepRow {
    std::vector<double> params;
    std::vector<double> values;
    bool feasible = false;
    std::string error;
};

/// Grid points in full-factorial order, first axis slowest.
inline std::vector<std::vector<double>> grid_points(const SweepGrid& grid) {
    grid.validate();
    std::vector<std::vector<double>> pts;
    const std::size_t total = grid.size();
    pts.reserve(total);
    std::vector<int> counter(grid.axes.size(), 0);
    for (std::size_t r = 0; r < total; ++r) {
        std::vector<double> p(grid.axes.size());
        for (std::size_t a = 0; a < grid.axes.size(); ++a) p[a] = grid.axes[a].value(counter[a]);
        pts.push_back(std::move(p));
        for (int a = static_cast<int>(grid.axes.size()) - 1; a >= 0; --a) {
            if (++counter[a] < grid.axes[a].count) break;
            counter[a] = 0;
        }
    }
    return pts;
}

/// Evaluates every grid point; a failing point is recorded and the sweep continues.
inline std::vector<SweepRow> sweep(const SweepGrid& grid,
                                   const std::function<SweepRow(const std::vector<double>&)>& evaluator,
                                   int threads = 1) {
    const auto pts = grid_points(grid);
    std::vector<SweepRow> rows(pts.size());
    auto work = [&](std::size_t i) {
        SweepRow row;
        try {
            row = evaluator(pts[i]);
        } catch (const std::exception& e) {
            row = SweepRow{};
            row.error = e.what();
        }
        row.params = pts[i];
        rows[i] = std::move(row);
    };
    const int workers = std::max(1, std::min<int>(threads, static_cast<int>(pts.size())));
    if (workers == 1) {
        for (std::size_t i = 0; i < pts.size(); ++i) work(i);
        return rows;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w)
        pool.emplace_back([&] {
            for (std::size_t i = next++; i < pts.size(); i = next++) work(i);
        });
    for (auto& t : pool) t.join();
    return rows;
}

} // namespace flapmav::optim
