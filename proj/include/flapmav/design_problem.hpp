#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "analysis.hpp"
#include "evaluation.hpp"
#include "optim/problem.hpp"

namespace flapmav {

enum class Goal { MoLhd, MoMiffs, Mission };

namespace detail {
inline double finite_or(double v, double fallback) { return std::isfinite(v) ? v : fallback; }
} // namespace detail

/// Design search over the five variables. Objectives are minimized:
/// {mbsd, -lhd}, {mbsd, -miffs} or {-aht}. info carries {mbsd, lhd, miffs, aht}, NaN when evaluation failed.
inline optim::Problem design_problem(const EvaluationSettings& settings, Goal goal) {
    optim::Problem p;
    for (const auto& b : DesignPoint::bounds()) {
        p.lower.push_back(b.lo);
        p.upper.push_back(b.hi);
    }
    p.integer = {false, false, false, true, false};
    p.nObjectives = goal == Goal::Mission ? 1 : 2;
    p.evaluate = [settings, goal](const std::vector<double>& x) {
        const DesignPoint d = DesignPoint::from_vector({x[0], x[1], x[2], x[3], x[4]});
        const Evaluation ev = evaluate_design(d, settings);
        optim::EvalResult r;
        const auto& o = ev.objectives;
        const double big = 1e12;
        switch (goal) {
        case Goal::MoLhd: r.objectives = {detail::finite_or(o.mbsd, big), -detail::finite_or(o.lhd, -big)}; break;
        case Goal::MoMiffs: r.objectives = {detail::finite_or(o.mbsd, big), -detail::finite_or(o.miffs, -big)}; break;
        case Goal::Mission: r.objectives = {-detail::finite_or(o.aht, -big)}; break;
        }
        r.violation = ev.violation();
        const double nan = std::nan("");
        r.info = {ev.failed ? nan : o.mbsd, ev.failed ? nan : o.lhd, ev.failed ? nan : o.miffs, ev.failed ? nan : o.aht};
        return r;
    };
    return p;
}

inline const std::vector<std::string>& archive_columns() {
    static const std::vector<std::string> cols{"gen",  "eval_id", "phiAm", "fWing", "R",        "idMotor",  "gammaTr",
                                               "mbsd", "lhd",     "miffs", "aht",   "feasible", "violation"};
    return cols;
}

inline std::vector<double> archive_row(const optim::ArchiveEntry& e) {
    std::vector<double> row{static_cast<double>(e.generation), static_cast<double>(e.evalId)};
    row.insert(row.end(), e.x.begin(), e.x.end());
    row.insert(row.end(), e.result.info.begin(), e.result.info.end());
    row.push_back(e.result.feasible() ? 1.0 : 0.0);
    row.push_back(e.result.violation);
    return row;
}

inline SampleTable archive_table(const std::vector<optim::ArchiveEntry>& archive) {
    SampleTable t;
    t.columns = archive_columns();
    for (const auto& e : archive) t.rows.push_back(archive_row(e));
    return t;
}

/// Rows fit for statistics: feasible unless asked otherwise, and with finite objectives.
inline SampleTable usable_rows(const SampleTable& all, bool includeInfeasible) {
    const std::size_t fcol = all.column("feasible");
    std::vector<std::size_t> oc;
    for (const char* o : {"mbsd", "lhd", "miffs", "aht"}) oc.push_back(all.column(o));
    return all.filter([&](const std::vector<double>& r) {
        if (!includeInfeasible && r[fcol] != 1.0) return false;
        for (std::size_t c : oc)
            if (!std::isfinite(r[c])) return false;
        return true;
    });
}

} // namespace flapmav
