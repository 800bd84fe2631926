#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <vector>

#include "../errors.hpp"
#include "hypervolume.hpp"
#include "problem.hpp"

namespace flapmav::optim {

struct MoeaOptions {
    int popSize = 200;
    long budget = 30000;
    unsigned long long seed = 1;
    int threads = 1;
    int batchSize = 1;   // offspring evaluated together before sequential insertion
    double etaC = 15.0;
    double crossoverProb = 0.9;
    double etaM = 20.0;
    double mutationProb = -1.0; // default 1/n
    int stallGenerations = 20;
    double stallTolerance = 1e-3;
};

struct MoeaResult {
    std::vector<ArchiveEntry> archive;
    std::vector<ArchiveEntry> population;
    std::vector<double> hypervolume; // per generation, against the final reference
    Point2 reference{};
    long evaluations = 0;
    int generations = 0;
    bool converged = false;
};

namespace detail {

inline double clamp01(double v) { return std::min(1.0, std::max(0.0, v)); }

/// Simulated binary crossover on one variable pair (bounded form).
inline std::pair<double, double> sbx(double a, double b, double lo, double hi, double eta, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> U(0.0, 1.0);
    if (std::abs(a - b) < 1e-14 || hi <= lo) return {a, b};
    const double y1 = std::min(a, b), y2 = std::max(a, b);
    const double u = U(rng);
    auto child = [&](double beta) {
        const double alpha = 2.0 - std::pow(beta, -(eta + 1.0));
        return u <= 1.0 / alpha ? std::pow(u * alpha, 1.0 / (eta + 1.0))
                                : std::pow(1.0 / (2.0 - u * alpha), 1.0 / (eta + 1.0));
    };
    const double beta1 = 1.0 + 2.0 * (y1 - lo) / (y2 - y1);
    const double beta2 = 1.0 + 2.0 * (hi - y2) / (y2 - y1);
    double c1 = 0.5 * ((y1 + y2) - child(beta1) * (y2 - y1));
    double c2 = 0.5 * ((y1 + y2) + child(beta2) * (y2 - y1));
    c1 = std::min(std::max(c1, lo), hi);
    c2 = std::min(std::max(c2, lo), hi);
    if (U(rng) < 0.5) std::swap(c1, c2);
    return {c1, c2};
}

/// Bounded polynomial mutation.
inline double poly_mutation(double x, double lo, double hi, double eta, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> U(0.0, 1.0);
    if (hi <= lo) return x;
    const double d1 = (x - lo) / (hi - lo), d2 = (hi - x) / (hi - lo);
    const double u = U(rng);
    const double p = 1.0 / (eta + 1.0);
    double dq;
    if (u < 0.5) {
        const double v = 2.0 * u + (1.0 - 2.0 * u) * std::pow(1.0 - d1, eta + 1.0);
        dq = std::pow(v, p) - 1.0;
    } else {
        const double v = 2.0 * (1.0 - u) + 2.0 * (u - 0.5) * std::pow(1.0 - d2, eta + 1.0);
        dq = 1.0 - std::pow(v, p);
    }
    return std::min(std::max(x + dq * (hi - lo), lo), hi);
}

} // namespace detail

/// Steady-state SMS-EMOA for two objectives with feasibility-first survival.
class SmsEmoa {
public:
    SmsEmoa(Problem p, MoeaOptions o) : p_(std::move(p)), o_(o), rng_(o.seed) {
        p_.validate();
        if (p_.nObjectives != 2) throw DomainError("moea: exactly two objectives are supported");
        if (o_.popSize < 4) throw DomainError("moea: population size must be >= 4");
        if (o_.batchSize < 1) throw DomainError("moea: batch size must be >= 1");
        if (o_.mutationProb < 0.0) o_.mutationProb = 1.0 / static_cast<double>(p_.dimension());
    }

    MoeaResult run() {
        MoeaResult res;
        std::uniform_real_distribution<double> U(0.0, 1.0);
        const std::size_t n = p_.dimension();

        std::vector<std::vector<double>> init;
        for (int i = 0; i < o_.popSize && static_cast<long>(init.size()) < o_.budget; ++i) {
            std::vector<double> x(n);
            for (std::size_t j = 0; j < n; ++j) x[j] = p_.lower[j] + U(rng_) * (p_.upper[j] - p_.lower[j]);
            p_.repair(x);
            init.push_back(std::move(x));
        }
        const auto initRes = evaluate_batch(p_, init, o_.threads);
        for (std::size_t i = 0; i < init.size(); ++i) {
            ArchiveEntry e{0, res.evaluations++, init[i], initRes[i]};
            res.archive.push_back(e);
            pop_.push_back(e);
        }
        update_reference(res);
        history_.push_back(feasible_front());

        long sinceGen = 0;
        int generation = 0;
        while (res.evaluations < o_.budget) {
            const int b = static_cast<int>(std::min<long>(o_.batchSize, o_.budget - res.evaluations));
            const std::vector<int> rank = ranks();
            std::vector<std::vector<double>> kids;
            for (int k = 0; k < b; ++k) kids.push_back(make_offspring(rank));
            const auto kidRes = evaluate_batch(p_, kids, o_.threads);
            for (int k = 0; k < b; ++k) {
                ArchiveEntry e{generation + 1, res.evaluations++, kids[k], kidRes[k]};
                res.archive.push_back(e);
                pop_.push_back(e);
                reduce();
                if (++sinceGen == o_.popSize) {
                    sinceGen = 0;
                    ++generation;
                    update_reference(res);
                    history_.push_back(feasible_front());
                    if (stalled(res.reference)) {
                        res.converged = true;
                        break;
                    }
                }
            }
            if (res.converged) break;
        }
        res.generations = generation;
        res.population = pop_;
        for (const auto& f : history_) res.hypervolume.push_back(hypervolume_2d(f, res.reference));
        return res;
    }

private:
    /// Fixed reference if the problem has one, else the worst feasible values seen so far plus 10% of their range.
    void update_reference(MoeaResult& res) {
        if (p_.referencePoint) {
            res.reference = {(*p_.referencePoint)[0], (*p_.referencePoint)[1]};
            return;
        }
        for (std::size_t i = seen_; i < res.archive.size(); ++i) {
            const auto& r = res.archive[i].result;
            if (!r.feasible()) continue;
            anyFeasible_ = true;
            for (int m = 0; m < 2; ++m) {
                lo_[m] = std::min(lo_[m], r.objectives[m]);
                hi_[m] = std::max(hi_[m], r.objectives[m]);
            }
        }
        seen_ = res.archive.size();
        if (!anyFeasible_) return;
        for (int m = 0; m < 2; ++m) {
            const double range = hi_[m] - lo_[m];
            res.reference[m] = hi_[m] + (range > 0.0 ? 0.1 * range : 0.1 * std::abs(hi_[m]) + 1e-9);
        }
    }

    std::vector<Point2> feasible_front() const {
        std::vector<Point2> pts;
        for (const auto& e : pop_)
            if (e.result.feasible()) pts.push_back({e.result.objectives[0], e.result.objectives[1]});
        return pts;
    }

    bool stalled(const Point2& ref) const {
        const int g = static_cast<int>(history_.size()) - 1;
        if (g < o_.stallGenerations) return false;
        const double before = hypervolume_2d(history_[g - o_.stallGenerations], ref);
        const double now = hypervolume_2d(history_[g], ref);
        if (before <= 0.0) return false;
        return now - before < o_.stallTolerance * before;
    }

    /// Front index for feasible members; infeasible ones rank after all fronts by violation.
    std::vector<int> ranks() const {
        std::vector<int> r(pop_.size(), 0);
        std::vector<std::vector<double>> objs;
        std::vector<int> idx;
        for (std::size_t i = 0; i < pop_.size(); ++i)
            if (pop_[i].result.feasible()) {
                objs.push_back(pop_[i].result.objectives);
                idx.push_back(static_cast<int>(i));
            }
        const auto fronts = nondominated_fronts(objs);
        for (std::size_t f = 0; f < fronts.size(); ++f)
            for (int k : fronts[f]) r[idx[k]] = static_cast<int>(f);
        const int worst = static_cast<int>(fronts.size());
        for (std::size_t i = 0; i < pop_.size(); ++i)
            if (!pop_[i].result.feasible()) r[i] = worst + 1;
        return r;
    }

    bool better(std::size_t a, std::size_t b, const std::vector<int>& rank) const {
        const auto& A = pop_[a].result;
        const auto& B = pop_[b].result;
        if (A.feasible() != B.feasible()) return A.feasible();
        if (!A.feasible()) return A.violation < B.violation;
        return rank[a] < rank[b];
    }

    std::size_t tournament(const std::vector<int>& rank) {
        std::uniform_int_distribution<std::size_t> pick(0, pop_.size() - 1);
        const std::size_t a = pick(rng_), b = pick(rng_);
        return better(b, a, rank) ? b : a;
    }

    std::vector<double> make_offspring(const std::vector<int>& rank) {
        std::uniform_real_distribution<double> U(0.0, 1.0);
        const auto& pa = pop_[tournament(rank)].x;
        const auto& pb = pop_[tournament(rank)].x;
        std::vector<double> child = pa;
        const bool cross = U(rng_) < o_.crossoverProb;
        for (std::size_t j = 0; j < child.size(); ++j) {
            if (cross && U(rng_) < 0.5)
                child[j] = detail::sbx(pa[j], pb[j], p_.lower[j], p_.upper[j], o_.etaC, rng_).first;
            if (U(rng_) < o_.mutationProb)
                child[j] = detail::poly_mutation(child[j], p_.lower[j], p_.upper[j], o_.etaM, rng_);
        }
        p_.repair(child);
        return child;
    }

    void reduce() {
        std::size_t worst = pop_.size();
        double worstViolation = 0.0;
        for (std::size_t i = 0; i < pop_.size(); ++i)
            if (pop_[i].result.violation > 0.0 && pop_[i].result.violation >= worstViolation) {
                worst = i;
                worstViolation = pop_[i].result.violation;
            }
        if (worst == pop_.size()) {
            std::vector<std::vector<double>> objs;
            for (const auto& e : pop_) objs.push_back(e.result.objectives);
            const auto fronts = nondominated_fronts(objs);
            const auto& last = fronts.back();
            if (last.size() == 1) {
                worst = static_cast<std::size_t>(last[0]);
            } else {
                std::vector<Point2> pts;
                for (int k : last) pts.push_back({objs[k][0], objs[k][1]});
                const auto contrib = p_.referencePoint
                                         ? hypervolume_contributions_2d(pts, {(*p_.referencePoint)[0], (*p_.referencePoint)[1]})
                                         : hypervolume_contributions_2d(pts);
                std::size_t arg = 0;
                for (std::size_t k = 1; k < contrib.size(); ++k)
                    if (contrib[k] < contrib[arg]) arg = k;
                worst = static_cast<std::size_t>(last[arg]);
            }
        }
        pop_.erase(pop_.begin() + static_cast<long>(worst));
    }

    Problem p_;
    MoeaOptions o_;
    std::mt19937_64 rng_;
    std::vector<ArchiveEntry> pop_;
    std::vector<std::vector<Point2>> history_;
    std::size_t seen_ = 0;
    bool anyFeasible_ = false;
    double lo_[2] = {std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity()};
    double hi_[2] = {-std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity()};
};

inline MoeaResult moea_optimize(const Problem& p, const MoeaOptions& o) { return SmsEmoa(p, o).run(); }

} // namespace flapmav::optim
