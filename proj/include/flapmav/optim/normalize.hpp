#pragma once

#include <algorithm>
#include <vector>

#include "../errors.hpp"

namespace flapmav::optim {

inline std::vector<double> normalize(const std::vector<double>& v) {
    if (v.empty()) throw DomainError("normalize: empty input");
    const double m = *std::max_element(v.begin(), v.end());
    if (!(m > 0.0)) throw DomainError("normalize: maximum must be positive");
    std::vector<double> out(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) out[i] = v[i] / m;
    return out;
}

inline std::vector<double> combine(const std::vector<double>& t1, const std::vector<double>& t2, double w1) {
    if (t1.size() != t2.size()) throw DomainError("combine: length mismatch");
    if (!(w1 >= 0.0 && w1 <= 1.0)) throw DomainError("combine: weight must be in [0, 1]");
    const auto a = normalize(t1);
    const auto b = normalize(t2);
    std::vector<double> mix(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) mix[i] = (1.0 - w1) * a[i] + w1 * b[i];
    return normalize(mix);
}

/// Elementwise reciprocal; zero entries map to `cap`.
inline std::vector<double> inverse_mbsd(const std::vector<double>& grid, double cap = 1.0) {
    std::vector<double> out(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) {
        if (grid[i] < 0.0) throw DomainError("inverse_mbsd: negative entry");
        out[i] = grid[i] == 0.0 ? cap : 1.0 / grid[i];
    }
    return out;
}

} // namespace flapmav::optim
