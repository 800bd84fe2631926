#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <vector>

#include "../errors.hpp"
#include "problem.hpp"

namespace flapmav::optim {

enum class StepRule {
    ParentRatio, // rule sets the parent fraction mu/lambda
    SuccessRate, // rule is also the target success rate of a global step multiplier
};

struct IsresOptions {
    int popSize = 400;
    double gamma = 0.85;
    double alpha = 0.2;
    double rule = 1.0 / 7.0;
    double pf = 0.45;
    long budget = 30000;
    unsigned long long seed = 1;
    int threads = 1;
    int stallGenerations = 20;
    double stallTolerance = 1e-3;
    StepRule stepRule = StepRule::SuccessRate;
};

struct IsresTracePoint {
    int generation = 0;
    long evaluations = 0;
    double bestObjective = 0.0;
    double bestViolation = 0.0;
    bool feasible = false;
};

struct IsresResult {
    std::vector<double> bestX;
    EvalResult best;
    std::vector<IsresTracePoint> trace;
    std::vector<ArchiveEntry> archive;
    long evaluations = 0;
    int generations = 0;
    bool converged = false;
};

/// True when `a` should rank ahead of `b` as best-so-far.
inline bool better_solution(const EvalResult& a, const EvalResult& b) {
    if (a.feasible() != b.feasible()) return a.feasible();
    if (!a.feasible()) return a.violation < b.violation;
    return a.objectives[0] < b.objectives[0];
}

/// Bubble-sort ranking that compares by objective with probability pf when either side is infeasible.
inline std::vector<int> stochastic_rank(const std::vector<EvalResult>& pop, double pf, std::mt19937_64& rng) {
    const int n = static_cast<int>(pop.size());
    std::vector<int> idx(n);
    std::iota(idx.begin(), idx.end(), 0);
    std::uniform_real_distribution<double> U(0.0, 1.0);
    for (int sweep = 0; sweep < n; ++sweep) {
        bool swapped = false;
        for (int j = 0; j + 1 < n; ++j) {
            const EvalResult& a = pop[idx[j]];
            const EvalResult& b = pop[idx[j + 1]];
            const double u = U(rng);
            bool swap;
            if ((a.violation == 0.0 && b.violation == 0.0) || u < pf)
                swap = a.objectives[0] > b.objectives[0];
            else
                swap = a.violation > b.violation;
            if (swap) {
                std::swap(idx[j], idx[j + 1]);
                swapped = true;
            }
        }
        if (!swapped) break;
    }
    return idx;
}

/// Improved stochastic-ranking evolution strategy.
class Isres {
public:
    Isres(Problem p, IsresOptions o) : p_(std::move(p)), o_(o), rng_(o.seed) {
        p_.validate();
        if (o_.popSize < 2) throw DomainError("isres: population must be >= 2");
        if (!(o_.rule > 0.0 && o_.rule <= 1.0)) throw DomainError("isres: rule must be in (0, 1]");
        mu_ = std::max(2, static_cast<int>(o_.rule * o_.popSize));
        mu_ = std::min(mu_, o_.popSize);
    }

    int parents() const { return mu_; }

    IsresResult run() {
        IsresResult res;
        const std::size_t n = p_.dimension();
        const double tau = 1.0 / std::sqrt(2.0 * std::sqrt(static_cast<double>(n)));
        const double tauPrime = 1.0 / std::sqrt(2.0 * static_cast<double>(n));
        std::uniform_real_distribution<double> U(0.0, 1.0);
        std::normal_distribution<double> N(0.0, 1.0);

        const int lambda = static_cast<int>(std::min<long>(o_.popSize, o_.budget));
        std::vector<std::vector<double>> X(lambda, std::vector<double>(n));
        std::vector<std::vector<double>> S(lambda, std::vector<double>(n));
        for (int k = 0; k < lambda; ++k)
            for (std::size_t j = 0; j < n; ++j) {
                X[k][j] = p_.lower[j] + U(rng_) * (p_.upper[j] - p_.lower[j]);
                S[k][j] = (p_.upper[j] - p_.lower[j]) / std::sqrt(static_cast<double>(n));
            }
        for (auto& x : X) p_.repair(x);

        double stepScale = 1.0;
        bool haveBest = false;
        int generation = 0;
        std::vector<double> bestHistory;
        while (true) {
            const auto F = evaluate_batch(p_, X, o_.threads);
            for (std::size_t k = 0; k < X.size(); ++k) {
                res.archive.push_back({generation, res.evaluations++, X[k], F[k]});
                if (!haveBest || better_solution(F[k], res.best)) {
                    res.best = F[k];
                    res.bestX = X[k];
                    haveBest = true;
                }
            }
            res.trace.push_back({generation, res.evaluations, res.best.objectives[0], res.best.violation,
                                 res.best.feasible()});
            if (res.best.feasible()) bestHistory.push_back(res.best.objectives[0]);
            else bestHistory.clear();
            if (stalled(bestHistory)) {
                res.converged = true;
                break;
            }
            if (res.evaluations >= o_.budget) break;

            const std::vector<int> order = stochastic_rank(F, o_.pf, rng_);
            const int mu = std::min<int>(mu_, static_cast<int>(X.size()));
            std::vector<std::vector<double>> PX(mu), PS(mu);
            std::vector<EvalResult> PF(mu);
            for (int i = 0; i < mu; ++i) {
                PX[i] = X[order[i]];
                PS[i] = S[order[i]];
                PF[i] = F[order[i]];
            }

            const int nextLambda = static_cast<int>(std::min<long>(o_.popSize, o_.budget - res.evaluations));
            std::vector<std::vector<double>> NX(nextLambda, std::vector<double>(n));
            std::vector<std::vector<double>> NS(nextLambda, std::vector<double>(n));
            for (int k = 0; k < nextLambda; ++k) {
                const int i = k % mu;
                if (k < mu - 1) {
                    // Differential step along the line from the next-ranked parent to the best one.
                    NS[k] = PS[i];
                    for (std::size_t j = 0; j < n; ++j) NX[k][j] = PX[i][j] + o_.gamma * (PX[0][j] - PX[i + 1][j]);
                } else {
                    const double global = tauPrime * N(rng_);
                    std::vector<double> sig(n);
                    for (std::size_t j = 0; j < n; ++j) sig[j] = PS[i][j] * std::exp(global + tau * N(rng_));
                    for (std::size_t j = 0; j < n; ++j) {
                        double v = 0.0;
                        bool inside = false;
                        for (int attempt = 0; attempt < 10 && !inside; ++attempt) {
                            v = PX[i][j] + stepScale * sig[j] * N(rng_);
                            inside = v >= p_.lower[j] && v <= p_.upper[j];
                        }
                        NX[k][j] = v;
                    }
                    for (std::size_t j = 0; j < n; ++j) NS[k][j] = PS[i][j] + o_.alpha * (sig[j] - PS[i][j]);
                }
                p_.repair(NX[k]);
            }

            if (o_.stepRule == StepRule::SuccessRate && !X.empty()) {
                // Fraction of this generation that beat the parent it was bred from.
                int wins = 0;
                for (int k = 0; k < static_cast<int>(F.size()); ++k)
                    if (better_solution(F[k], PF[std::min(k % mu, mu - 1)])) ++wins;
                const double rate = static_cast<double>(wins) / static_cast<double>(F.size());
                stepScale *= std::exp((rate - o_.rule) / (1.0 - o_.rule) / 3.0);
                stepScale = std::clamp(stepScale, 1e-3, 1e3);
            }

            X = std::move(NX);
            S = std::move(NS);
            ++generation;
            if (X.empty()) break;
        }
        res.generations = generation;
        return res;
    }

private:
    bool stalled(const std::vector<double>& h) const {
        const int g = static_cast<int>(h.size()) - 1;
        if (g < o_.stallGenerations) return false;
        const double before = h[g - o_.stallGenerations];
        return before - h[g] <= o_.stallTolerance * std::abs(before);
    }

    Problem p_;
    IsresOptions o_;
    std::mt19937_64 rng_;
    int mu_ = 2;
};

inline IsresResult isres_optimize(const Problem& p, const IsresOptions& o) { return Isres(p, o).run(); }

} // namespace flapmav::optim
