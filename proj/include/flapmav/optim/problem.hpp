#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <atomic>
#include <exception>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "../errors.hpp"

namespace flapmav::optim {

/// Objectives are always minimized; violation is zero for feasible points.
struct EvalResult {
    std::vector<double> objectives;
    double violation = 0.0;
    std::vector<double> info;

    bool feasible() const { return violation <= 0.0; }
};

struct Problem {
    std::vector<double> lower;
    std::vector<double> upper;
    std::vector<bool> integer;
    int nObjectives = 1;
    std::function<EvalResult(const std::vector<double>&)> evaluate;
    std::optional<std::vector<double>> referencePoint;

    std::size_t dimension() const { return lower.size(); }

    void validate() const {
        if (lower.empty() || lower.size() != upper.size()) throw DomainError("problem: bounds size mismatch");
        if (!integer.empty() && integer.size() != lower.size()) throw DomainError("problem: integer mask size mismatch");
        for (std::size_t i = 0; i < lower.size(); ++i)
            if (!(lower[i] <= upper[i])) throw DomainError("problem: bounds not ordered");
        if (nObjectives < 1) throw DomainError("problem: at least one objective required");
        if (!evaluate) throw DomainError("problem: missing evaluator");
    }

    bool is_integer(std::size_t i) const { return !integer.empty() && integer[i]; }

    /// Clamp into bounds and round integer variables.
    void repair(std::vector<double>& x) const {
        for (std::size_t i = 0; i < x.size(); ++i) {
            if (is_integer(i)) x[i] = std::round(x[i]);
            x[i] = std::min(std::max(x[i], lower[i]), upper[i]);
        }
    }
};

/// Memoizes evaluations on a design vector quantized to 4 significant digits.
class EvaluationCache {
public:
    explicit EvaluationCache(int digits = 4) : digits_(digits) {}

    std::string key(const std::vector<double>& x) const {
        std::string k;
        char buf[48];
        for (double v : x) {
            std::snprintf(buf, sizeof buf, "%.*e|", digits_ - 1, v);
            k += buf;
        }
        return k;
    }

    std::optional<EvalResult> find(const std::vector<double>& x) const {
        std::lock_guard<std::mutex> lock(mu_);
        auto it = map_.find(key(x));
        if (it == map_.end()) return std::nullopt;
        return it->second;
    }

    void store(const std::vector<double>& x, const EvalResult& r) {
        std::lock_guard<std::mutex> lock(mu_);
        map_.emplace(key(x), r);
    }

    std::size_t size() const {
        std::lock_guard<std::mutex> lock(mu_);
        return map_.size();
    }

    long hits() const { return hits_; }
    void count_hit() { ++hits_; }

private:
    int digits_;
    mutable std::mutex mu_;
    std::map<std::string, EvalResult> map_;
    std::atomic<long> hits_{0};
};

/// Wraps a problem so repeated designs reuse earlier results.
inline Problem cached(const Problem& p, std::shared_ptr<EvaluationCache> cache) {
    Problem q = p;
    auto inner = p.evaluate;
    q.evaluate = [inner, cache](const std::vector<double>& x) {
        if (auto hit = cache->find(x)) {
            cache->count_hit();
            return *hit;
        }
        EvalResult r = inner(x);
        cache->store(x, r);
        return r;
    };
    return q;
}

/// Evaluates a batch across worker threads; results keep input order.
inline std::vector<EvalResult> evaluate_batch(const Problem& p, const std::vector<std::vector<double>>& xs,
                                              int threads) {
    std::vector<EvalResult> out(xs.size());
    const int n = static_cast<int>(xs.size());
    const int workers = std::max(1, std::min(threads, n));
    if (workers == 1) {
        for (int i = 0; i < n; ++i) out[i] = p.evaluate(xs[i]);
        return out;
    }
    std::atomic<int> next{0};
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errors(workers);
    for (int w = 0; w < workers; ++w) {
        pool.emplace_back([&, w] {
            try {
                for (int i = next++; i < n; i = next++) out[i] = p.evaluate(xs[i]);
            } catch (...) {
                errors[w] = std::current_exception();
            }
        });
    }
    for (auto& t : pool) t.join();
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
    return out;
}

/// One evaluated individual as recorded in an archive.
struct ArchiveEntry {
    int generation = 0;
    long evalId = 0;
    std::vector<double> x;
    EvalResult result;
};

} // namespace flapmav::optim
