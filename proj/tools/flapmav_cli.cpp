#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "flapmav.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace flapmav;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitInfeasible = 3;
constexpr int kExitNumeric = 4;

struct Common {
    std::string config;
    std::string out = "out";
    std::optional<unsigned long long> seed;
    std::vector<std::string> set;
    int threads = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
    std::optional<int> pop;
    std::optional<long> budget;
};

void add_common(CLI::App* app, Common& c) {
    app->add_option("--config", c.config, "key = value config file");
    app->add_option("--out", c.out, "output directory");
    app->add_option("--seed", c.seed, "random seed (overrides the config)");
    app->add_option("--set", c.set, "extra 'key=value' entries applied after the config file");
    app->add_option("--threads", c.threads, "worker threads for evaluations")->check(CLI::PositiveNumber);
}

void add_optimizer_flags(CLI::App* app, Common& c) {
    app->add_option("--pop", c.pop, "population size")->check(CLI::PositiveNumber);
    app->add_option("--budget", c.budget, "evaluation budget")->check(CLI::PositiveNumber);
}

WorkbenchConfig load(const Common& c) {
    WorkbenchConfig cfg = c.config.empty() ? parse_config_text("", c.set) : load_config(c.config, c.set);
    if (c.seed) cfg.seed = *c.seed;
    cfg.finalize();
    return cfg;
}

fs::path prepare_output(const Common& c, const WorkbenchConfig& cfg) {
    const fs::path out(c.out);
    fs::create_directories(out);
    std::ofstream(out / "config.resolved") << resolved_config(cfg);
    std::ofstream(out / "seed.txt") << cfg.seed << "\n";
    return out;
}

void write_json(const fs::path& p, const json& j) { std::ofstream(p) << j.dump(2) << "\n"; }

template <class A>
json arr(const A& a) {
    return json(std::vector<double>(a.begin(), a.end()));
}

json design_json(const DesignPoint& d) {
    return {{"phiAm_deg", d.phiAm}, {"fWing_Hz", d.fWing}, {"R_m", d.R}, {"idMotor", d.idMotor}, {"gammaTr", d.gammaTr}};
}

json sim_json(const SimResult& r) {
    return {{"lTakeoff_N", r.lTakeoff},
            {"meanLiftPerWing_N", arr(r.meanLiftPerWing)},
            {"achievedAmplitude_rad", arr(r.achievedAmplitude)},
            {"pitchAmplitude_rad", arr(r.pitchAmplitude)},
            {"achievedFrequency_Hz", r.achievedFrequency},
            {"maxMotorSpeed_rad_s", arr(r.maxMotorSpeed)},
            {"maxCurrent_A", arr(r.maxCurrent)},
            {"meanElectricalPower_W", arr(r.meanElectricalPower)},
            {"meanHeat_W", arr(r.meanHeat)},
            {"settled", r.settled},
            {"cyclesUsed", r.cyclesUsed},
            {"tandemClamps", r.tandemClamps}};
}

json check_json(const ConstraintCheck& c) {
    return {{"pass", c.pass}, {"value", c.value}, {"limit", c.limit}, {"margin", c.margin}};
}

json breakdown_json(const MbsdBreakdown& b) {
    return {{"shape_m", b.shape},
            {"trajectory_m", b.trajectory},
            {"cDynamic", b.cDynamic},
            {"cIndividual", b.cIndividual},
            {"mbsd_m", b.total()}};
}

json evaluation_json(const Evaluation& ev) {
    json j;
    j["design"] = design_json(ev.design);
    j["feasible"] = ev.feasible();
    j["violation"] = ev.violation();
    if (ev.failed) {
        j["error"] = ev.error;
        return j;
    }
    const auto& c = ev.constraints;
    j["constraints"] = {{"motorSpeed", check_json(c.motorSpeed)},
                        {"motorCurrent", check_json(c.motorCurrent)},
                        {"motorWeightFraction", check_json(c.motorWeightFraction)},
                        {"liftMargin", check_json(c.liftMargin)},
                        {"cooling", check_json(c.cooling)},
                        {"settled", c.settled},
                        {"positiveLift", c.positiveLift}};
    j["objectives"] = {{"mbsd_m", ev.objectives.mbsd},
                       {"lhd_s", ev.objectives.lhd},
                       {"miffs_m_s", ev.objectives.miffs},
                       {"aht_s", ev.objectives.aht}};
    j["mbsd"] = breakdown_json(ev.mbsd);
    j["energy"] = {{"eTotal_J", ev.eTotal}, {"pHover_W", ev.pHover}, {"pFront_W", ev.pFront}};
    j["frontArea_m2"] = {{"wing", ev.frontArea.wing}, {"actuator", ev.frontArea.actuator}, {"total", ev.frontArea.total}};
    j["hover"] = sim_json(ev.sim);
    j["maxAmplitude"] = sim_json(ev.simMax);
    return j;
}

void write_archive(const fs::path& path, const std::vector<optim::ArchiveEntry>& archive) {
    CsvWriter w(path.string(), "flapmav.archive", 1, archive_columns());
    for (const auto& e : archive) w.row(archive_row(e));
}

// Archive analysis

SampleTable archive_from_csv(const CsvTable& t) {
    const std::string want = "flapmav.archive/";
    if (t.schema.rfind(want, 0) != 0)
        throw ConfigError("expected an archive CSV (schema flapmav.archive), got '" + t.schema + "'");
    return t.table;
}

json analyze_table(const SampleTable& all, bool includeInfeasible, const fs::path& out, unsigned long long seed) {
    const SampleTable t = usable_rows(all, includeInfeasible);
    json summary;
    summary["rows"] = all.rows.size();
    summary["rowsUsed"] = t.rows.size();
    summary["includeInfeasible"] = includeInfeasible;
    if (t.rows.size() < 2) {
        summary["note"] = "fewer than 2 usable rows";
        return summary;
    }

    const std::vector<std::string> cols{"phiAm", "fWing", "R", "idMotor", "gammaTr", "mbsd", "lhd", "miffs", "aht"};
    const auto m = pearson_matrix(t, cols);
    {
        std::vector<std::string> header{"column"};
        header.insert(header.end(), cols.begin(), cols.end());
        CsvWriter w((out / "correlation.csv").string(), "flapmav.correlation", 1, header);
        for (std::size_t i = 0; i < cols.size(); ++i) {
            std::vector<std::string> cells{cols[i]};
            for (double v : m[i]) cells.push_back(CsvWriter::num(v));
            w.row_strings(cells);
        }
    }
    auto corr = [&](const std::string& a, const std::string& b) {
        std::size_t i = 0, j = 0;
        for (std::size_t k = 0; k < cols.size(); ++k) {
            if (cols[k] == a) i = k;
            if (cols[k] == b) j = k;
        }
        return m[i][j];
    };
    summary["pearson"] = {{"mbsd_R", corr("mbsd", "R")}, {"mbsd_lhd", corr("mbsd", "lhd")},
                          {"mbsd_miffs", corr("mbsd", "miffs")}};

    const std::vector<std::string> features{"phiAm", "fWing", "R", "idMotor", "gammaTr"};
    json imp = json::object();
    CsvWriter iw((out / "importance.csv").string(), "flapmav.importance", 1,
                 {"target", "feature", "importance", "mse_increase", "baseline_mse", "signal"});
    for (const std::string target : {"mbsd", "lhd", "miffs"}) {
        try {
            ImportanceOptions o;
            o.seed = seed;
            const auto r = permutation_importance(t, target, features, o);
            json ranks = json::object();
            for (std::size_t i = 0; i < features.size(); ++i) {
                ranks[features[i]] = r.importance[i];
                iw.row_strings({target, features[i], CsvWriter::num(r.importance[i]), CsvWriter::num(r.mseIncrease[i]),
                                CsvWriter::num(r.baselineMse), r.signal ? "1" : "0"});
            }
            std::size_t best = 0;
            for (std::size_t i = 1; i < features.size(); ++i)
                if (r.importance[i] > r.importance[best]) best = i;
            imp[target] = {{"importance", ranks}, {"top", features[best]}, {"signal", r.signal}};
        } catch (const DomainError& e) {
            imp[target] = {{"skipped", e.what()}};
        }
    }
    summary["importance"] = imp;

    const auto mb = t.values("mbsd");
    const auto lhdPer = ratio_study(mb, t.values("lhd"), RatioKind::LhdPerMbsd);
    const auto mbsdPer = ratio_study(mb, t.values("miffs"), RatioKind::MbsdPerMiffs);
    {
        CsvWriter w((out / "ratio.csv").string(), "flapmav.ratio", 1, {"mbsd", "lhd_per_mbsd", "mbsd_per_miffs"});
        for (std::size_t i = 0; i < mb.size(); ++i) w.row({mb[i], lhdPer.ratio[i], mbsdPer.ratio[i]});
        CsvWriter b((out / "ratio_bins.csv").string(), "flapmav.ratio_bins", 1,
                    {"mbsd_lo", "mbsd_hi", "count", "mean_lhd_per_mbsd", "mean_mbsd_per_miffs"});
        for (std::size_t i = 0; i < lhdPer.bins.size(); ++i)
            b.row({lhdPer.bins[i].lo, lhdPer.bins[i].hi, static_cast<double>(lhdPer.bins[i].count),
                   lhdPer.bins[i].meanRatio, mbsdPer.bins[i].meanRatio});
    }
    summary["ratio"] = {{"zeroMbsdRows", lhdPer.zeroMbsdRows},
                        {"lhdPerMbsdIncreasing", lhdPer.monotoneIncreasing},
                        {"lhdPerMbsdDecreasing", lhdPer.monotoneDecreasing},
                        {"mbsdPerMiffsIncreasing", mbsdPer.monotoneIncreasing},
                        {"mbsdPerMiffsDecreasing", mbsdPer.monotoneDecreasing}};
    return summary;
}

// Subcommands

int cmd_simulate(const Common& c, bool trace, bool maxAmplitude) {
    WorkbenchConfig cfg = load(c);
    const fs::path out = prepare_output(c, cfg);
    const SimConfig sc = sim_config_for(cfg.eval.sim.design, cfg.eval);
    std::optional<CsvWriter> tw;
    FlapperSystem::Observer obs;
    if (trace) {
        std::vector<std::string> header{"t"};
        for (int w = 1; w <= kWings; ++w) header.push_back("phi" + std::to_string(w));
        for (int w = 1; w <= kWings; ++w) header.push_back("theta" + std::to_string(w));
        header.push_back("lift");
        header.push_back("power");
        tw.emplace((out / "trace.csv").string(), "flapmav.trace", 1, header);
        obs = [&tw](const StepSample& s) {
            std::vector<double> row{s.t};
            row.insert(row.end(), s.phi.begin(), s.phi.end());
            row.insert(row.end(), s.theta.begin(), s.theta.end());
            double lift = 0.0, power = 0.0;
            for (int w = 0; w < kWings; ++w) {
                lift += s.lift[w];
                power += s.power[w];
            }
            row.push_back(lift);
            row.push_back(power);
            tw->row(row);
        };
    }
    const SimResult r = maxAmplitude ? max_amplitude_run(sc, obs) : simulate(sc, obs);
    json j = {{"design", design_json(sc.design)}, {"motor", sc.motor.name}, {"maxAmplitudeRun", maxAmplitude},
              {"result", sim_json(r)}};
    write_json(out / "simulate.json", j);
    std::cout << j.dump(2) << "\n";
    return kExitOk;
}

int cmd_mbsd(const Common& c) {
    WorkbenchConfig cfg = load(c);
    const fs::path out = prepare_output(c, cfg);
    const DesignPoint& d = cfg.eval.sim.design;
    TrajectoryParams ref = cfg.eval.reference;
    ref.semiSpan = d.R;
    const TrajectoryParams air = aircraft_trajectory(d);
    std::ofstream jl(out / "mbsd.jsonl");
    for (const auto& mode : flight_modes()) {
        json j = breakdown_json(mbsd_breakdown(air, ref, mode, cfg.eval.mbsd));
        j["mode"] = mode.label;
        j["selected"] = mode.label == cfg.eval.mode.label;
        j["design"] = design_json(d);
        jl << j.dump() << "\n";
        if (mode.label == cfg.eval.mode.label) std::cout << j.dump() << "\n";
    }
    const double fLow = std::min(air.frequency, ref.frequency);
    const int n = 2 * cfg.eval.mbsd.samplesPerCycle;
    const double dt = 2.0 / fLow / n;
    CsvWriter w((out / "trajectory_pair.csv").string(), "flapmav.trajectory_pair", 1,
                {"t", "aircraft_x", "aircraft_y", "aircraft_z", "reference_x", "reference_y", "reference_z"});
    for (int i = 0; i < n; ++i) {
        const double t = i * dt;
        const Point3 a = wingtip_position(air, t), r = wingtip_position(ref, t);
        w.row({t, a[0], a[1], a[2], r[0], r[1], r[2]});
    }
    return kExitOk;
}

int cmd_evaluate(const Common& c) {
    WorkbenchConfig cfg = load(c);
    const fs::path out = prepare_output(c, cfg);
    const Evaluation ev = evaluate_design(cfg.eval.sim.design, cfg.eval);
    const json j = evaluation_json(ev);
    write_json(out / "evaluation.json", j);
    std::cout << j.dump(2) << "\n";
    if (ev.failed) return kExitNumeric;
    return ev.feasible() ? kExitOk : kExitInfeasible;
}

optim::SweepAxis parse_axis(const std::string& spec) {
    // name:lo:hi:count
    std::vector<std::string> parts;
    std::size_t start = 0;
    for (std::size_t i = 0; i <= spec.size(); ++i)
        if (i == spec.size() || spec[i] == ':') {
            parts.push_back(spec.substr(start, i - start));
            start = i + 1;
        }
    if (parts.size() != 4) throw ConfigError("axis '" + spec + "' must be name:lo:hi:count");
    optim::SweepAxis a;
    a.name = parts[0];
    bool known = false;
    for (const char* n : DesignPoint::kNames) known = known || a.name == n;
    if (!known) throw ConfigError("axis '" + a.name + "' is not a design variable");
    try {
        a.lo = std::stod(parts[1]);
        a.hi = std::stod(parts[2]);
        a.count = std::stoi(parts[3]);
    } catch (const std::exception&) {
        throw ConfigError("axis '" + spec + "' has a non-numeric field");
    }
    return a;
}

DesignPoint with_axes(DesignPoint d, const optim::SweepGrid& g, const std::vector<double>& p) {
    auto x = d.to_vector();
    for (std::size_t a = 0; a < g.axes.size(); ++a)
        for (std::size_t k = 0; k < DesignPoint::kNames.size(); ++k)
            if (g.axes[a].name == DesignPoint::kNames[k]) x[k] = p[a];
    return DesignPoint::from_vector(x);
}

/// Combined scores for the two trade-offs at several weights; rows that failed stay NaN.
void add_combined_columns(std::vector<std::string>& header, std::vector<std::vector<double>>& rows,
                          const std::vector<optim::SweepRow>& sweepRows, double cap) {
    const std::vector<double> weights{0.0, 0.25, 0.5, 0.75, 1.0};
    std::vector<std::size_t> ok;
    std::vector<double> mb, lhdV, miffsV;
    for (std::size_t i = 0; i < sweepRows.size(); ++i) {
        const auto& v = sweepRows[i].values;
        if (!sweepRows[i].error.empty() || v.size() < 3) continue;
        if (!std::isfinite(v[0]) || !std::isfinite(v[1]) || !std::isfinite(v[2])) continue;
        ok.push_back(i);
        mb.push_back(v[0]);
        lhdV.push_back(std::max(0.0, v[1]));
        miffsV.push_back(std::max(0.0, v[2]));
    }
    const auto inv = optim::inverse_mbsd(mb, cap);
    for (const std::string pair : {"lhd", "miffs"}) {
        const auto& other = pair == "lhd" ? lhdV : miffsV;
        for (double w : weights) {
            header.push_back("c_" + pair + "_w" + CsvWriter::num(w));
            std::vector<double> col(rows.size(), std::nan(""));
            bool usable = !ok.empty() && *std::max_element(other.begin(), other.end()) > 0.0;
            if (usable) {
                const auto cv = optim::combine(inv, other, w);
                for (std::size_t k = 0; k < ok.size(); ++k) col[ok[k]] = cv[k];
            }
            for (std::size_t r = 0; r < rows.size(); ++r) rows[r].push_back(col[r]);
        }
    }
}

json run_sweep(const WorkbenchConfig& cfg, const optim::SweepGrid& grid, const fs::path& csv, int threads) {
    const EvaluationSettings settings = cfg.eval;
    const DesignPoint base = cfg.eval.sim.design;
    const auto rows = optim::sweep(
        grid,
        [&](const std::vector<double>& p) {
            const Evaluation ev = evaluate_design(with_axes(base, grid, p), settings);
            optim::SweepRow r;
            r.values = {ev.objectives.mbsd, ev.objectives.lhd, ev.objectives.miffs, ev.objectives.aht,
                        ev.violation()};
            r.feasible = ev.feasible();
            if (ev.failed) r.error = ev.error;
            return r;
        },
        threads);
    std::vector<std::string> header;
    for (const auto& a : grid.axes) header.push_back(a.name);
    for (const char* n : {"mbsd", "lhd", "miffs", "aht", "violation", "feasible", "failed"}) header.push_back(n);
    std::vector<std::vector<double>> table;
    int feasible = 0, failed = 0;
    for (const auto& r : rows) {
        std::vector<double> row = r.params;
        if (r.error.empty()) row.insert(row.end(), r.values.begin(), r.values.end());
        else row.insert(row.end(), {std::nan(""), std::nan(""), std::nan(""), std::nan(""), 100.0});
        row.push_back(r.feasible ? 1.0 : 0.0);
        row.push_back(r.error.empty() ? 0.0 : 1.0);
        feasible += r.feasible;
        failed += !r.error.empty();
        table.push_back(std::move(row));
    }
    const double cap = 1.0;
    add_combined_columns(header, table, rows, cap);
    CsvWriter w(csv.string(), "flapmav.sweep", 1, header);
    for (const auto& r : table) w.row(r);
    return {{"rows", rows.size()}, {"feasible", feasible}, {"failed", failed}, {"inverseMbsdCap", cap}};
}

int cmd_sweep(const Common& c, const std::vector<std::string>& axes) {
    WorkbenchConfig cfg = load(c);
    optim::SweepGrid grid;
    for (const auto& a : axes) grid.axes.push_back(parse_axis(a));
    grid.validate();
    const fs::path out = prepare_output(c, cfg);
    const json s = run_sweep(cfg, grid, out / "sweep.csv", c.threads);
    write_json(out / "summary.json", s);
    std::cout << s.dump(2) << "\n";
    return kExitOk;
}

json moea_run(WorkbenchConfig& cfg, const Common& c, Goal goal, const fs::path& out) {
    optim::MoeaOptions o = cfg.moea;
    o.threads = c.threads;
    auto problem = optim::cached(design_problem(cfg.eval, goal), std::make_shared<optim::EvaluationCache>());
    const auto res = optim::moea_optimize(problem, o);
    write_archive(out / "archive.csv", res.archive);
    write_archive(out / "population.csv", res.population);
    {
        CsvWriter w((out / "hypervolume.csv").string(), "flapmav.hypervolume", 1, {"generation", "hypervolume"});
        for (std::size_t g = 0; g < res.hypervolume.size(); ++g) w.row({static_cast<double>(g), res.hypervolume[g]});
    }
    std::vector<std::vector<double>> objs;
    std::vector<optim::ArchiveEntry> feasible;
    for (const auto& e : res.population)
        if (e.result.feasible()) {
            feasible.push_back(e);
            objs.push_back(e.result.objectives);
        }
    std::vector<optim::ArchiveEntry> front;
    if (!feasible.empty())
        for (int i : optim::nondominated_fronts(objs).front()) front.push_back(feasible[i]);
    write_archive(out / "front.csv", front);
    json s = {{"goal", goal == Goal::MoLhd ? "mbsd-lhd" : "mbsd-miffs"},
              {"evaluations", res.evaluations},
              {"generations", res.generations},
              {"converged", res.converged},
              {"feasibleInPopulation", feasible.size()},
              {"finalHypervolume", res.hypervolume.empty() ? 0.0 : res.hypervolume.back()},
              {"reference", {res.reference[0], res.reference[1]}}};
    s["analysis"] = analyze_table(read_csv((out / "archive.csv").string()).table, false, out, cfg.seed);
    s["publishedReference"] = {{"pearson_mbsd_span", 0.99}, {"pearson_mbsd_lhd", 0.66},
                           {"mostImportantForMbsd", "R"}};
    return s;
}

int cmd_optimize_mo(const Common& c, const std::string& objective) {
    WorkbenchConfig cfg = load(c);
    if (c.pop) cfg.moea.popSize = *c.pop;
    if (c.budget) cfg.moea.budget = *c.budget;
    const fs::path out = prepare_output(c, cfg);
    const json s = moea_run(cfg, c, objective == "miffs" ? Goal::MoMiffs : Goal::MoLhd, out);
    write_json(out / "summary.json", s);
    std::cout << s.dump(2) << "\n";
    return s["feasibleInPopulation"].get<std::size_t>() > 0 ? kExitOk : kExitInfeasible;
}

int cmd_optimize_mission(const Common& c) {
    WorkbenchConfig cfg = load(c);
    if (c.pop) cfg.isres.popSize = *c.pop;
    if (c.budget) cfg.isres.budget = *c.budget;
    const fs::path out = prepare_output(c, cfg);
    optim::IsresOptions o = cfg.isres;
    o.threads = c.threads;
    auto problem = optim::cached(design_problem(cfg.eval, Goal::Mission), std::make_shared<optim::EvaluationCache>());
    const auto res = optim::isres_optimize(problem, o);
    write_archive(out / "archive.csv", res.archive);
    {
        CsvWriter w((out / "trace.csv").string(), "flapmav.mission_trace", 1,
                    {"generation", "evaluations", "best_aht", "best_violation", "feasible"});
        for (const auto& p : res.trace)
            w.row({static_cast<double>(p.generation), static_cast<double>(p.evaluations), -p.bestObjective,
                   p.bestViolation, p.feasible ? 1.0 : 0.0});
    }
    const DesignPoint best =
        DesignPoint::from_vector({res.bestX[0], res.bestX[1], res.bestX[2], res.bestX[3], res.bestX[4]});
    const Evaluation ev = evaluate_design(best, cfg.eval);
    json s = {{"evaluations", res.evaluations},
              {"generations", res.generations},
              {"converged", res.converged},
              {"feasible", res.best.feasible()},
              {"best", evaluation_json(ev)},
              {"publishedReference",
               {{"aht_s", 763.499},
                {"generations", 60},
                {"evaluations", 26401},
                {"design", {{"R_m", 0.083167}, {"fWing_Hz", 29.605}, {"phiAm_deg", 71.705}, {"gammaTr", 34.175},
                            {"idMotor", 3.780}}},
                {"objectives", {{"mbsd_m", 98.203}, {"lhd_s", 1111.461}, {"miffs_m_s", 7.773}}},
                {"note", "informational; energy and drag constants behind these values are not published"}}}};
    write_json(out / "summary.json", s);
    std::cout << s.dump(2) << "\n";
    return res.best.feasible() ? kExitOk : kExitInfeasible;
}

int cmd_analyze(const Common& c, const std::string& archive, bool includeInfeasible) {
    WorkbenchConfig cfg = load(c);
    const SampleTable t = archive_from_csv(read_csv(archive));
    const fs::path out = prepare_output(c, cfg);
    const json s = analyze_table(t, includeInfeasible, out, cfg.seed);
    write_json(out / "summary.json", s);
    std::cout << s.dump(2) << "\n";
    return s["rowsUsed"].get<std::size_t>() > 0 ? kExitOk : kExitInfeasible;
}

// Published studies

json repro_fig6(const WorkbenchConfig& cfg, const fs::path& out) {
    CsvWriter w((out / "fig6.csv").string(), "flapmav.fig6", 1, {"semi_span_m", "d_shape_m"});
    double lastZero = 0.0;
    for (int mm = 1; mm <= 500; ++mm) {
        const double s = mm * 1e-3;
        const double d = shape_distance(s, cfg.eval.mbsd.sAnimal, cfg.eval.mbsd.eye);
        if (d == 0.0) lastZero = s;
        w.row({s, d});
    }
    return {{"breakpoint_m", lastZero},
            {"slope_m_per_m", 1.0 / cfg.eval.mbsd.eye.cEye},
            {"publishedReference", "zero up to the biological semi-span (30 mm), linear beyond"}};
}

json repro_fig7(const WorkbenchConfig& cfg, const fs::path& out) {
    const double span = cfg.eval.sim.design.R;
    TrajectoryParams ref = cfg.eval.reference;
    ref.semiSpan = span;
    CsvWriter w((out / "fig7.csv").string(), "flapmav.fig7", 1,
                {"amplitude_deg", "frequency_hz", "c_dynamic", "d_trajectory_m", "mbsd_m"});
    json best = json::array();
    for (int a = 20; a <= 100; a += 2) {
        double bestF = 0.0, bestM = std::numeric_limits<double>::infinity();
        for (int k = 0; k <= 120; ++k) {
            const double f = 5.0 + 0.5 * k;
            const TrajectoryParams air{span, f, 0.0, static_cast<double>(a), 0.0};
            const MbsdBreakdown b = mbsd_breakdown(air, ref, cfg.eval.mode, cfg.eval.mbsd);
            w.row({static_cast<double>(a), f, b.cDynamic, b.trajectory, b.total()});
            if (b.total() < bestM) {
                bestM = b.total();
                bestF = f;
            }
        }
        best.push_back({{"amplitude_deg", a}, {"bestFrequency_hz", bestF}, {"mbsd_m", bestM}});
    }
    return {{"semiSpan_m", span},
            {"amplitudeConvention", "full stroke"},
            {"minimumPerAmplitude", best},
            {"publishedReference", "smallest MBSD near the 39.9 Hz reference frequency"}};
}

json repro_table6(const WorkbenchConfig& cfg, const fs::path& out) {
    struct Row {
        const char* name;
        double span;
        std::optional<TrajectoryParams> trajectory;
        double shape, traj, total;
    };
    const std::vector<Row> rows{
        {"Festo BionicOpter", 0.315, std::nullopt, 417.9, 0.0, 417.9},
        {"DragonflEye", 0.030, std::nullopt, 0.0, 0.0, 0.0},
        {"DEIFLY Nimble", 0.16497, std::nullopt, 197.9, 0.0, 197.9},
        {"QV", 0.075012, std::nullopt, 66.0, 0.0, 66.0},
        {"DDD-1", 0.100, TrajectoryParams{0.100, 23.0, 0.0, 150.0, 0.0}, 102.6, 10.3, 112.9},
    };
    CsvWriter w((out / "table6.csv").string(), "flapmav.table6", 1,
                {"aircraft", "semi_span_m", "d_shape_m", "d_trajectory_m", "mbsd_m", "c_dynamic", "published_d_shape_m",
                 "published_d_trajectory_m", "published_mbsd_m"});
    json j = json::array();
    for (const auto& r : rows) {
        TrajectoryParams ref = cfg.eval.reference;
        ref.semiSpan = r.span;
        const TrajectoryParams air = r.trajectory ? *r.trajectory : ref;
        const MbsdBreakdown b = mbsd_breakdown(air, ref, cfg.eval.mode, cfg.eval.mbsd);
        w.row_strings({r.name, CsvWriter::num(r.span), CsvWriter::num(b.shape), CsvWriter::num(b.trajectory),
                       CsvWriter::num(b.total()), CsvWriter::num(b.cDynamic), CsvWriter::num(r.shape),
                       CsvWriter::num(r.traj), CsvWriter::num(r.total)});
        j.push_back({{"aircraft", r.name}, {"mbsd", breakdown_json(b)}, {"publishedMbsd_m", r.total}});
    }
    return {{"rows", j},
            {"note", "spans other than DDD-1 are back-derived from the published shape distances; "
                     "aircraft without published kinematics use the reference trajectory"}};
}

json repro_sweeps(const WorkbenchConfig& cfg, const fs::path& out, int threads) {
    const optim::SweepAxis f{"fWing", 15.0, 50.0, 70};
    const optim::SweepAxis s{"R", 0.05, 0.12, 28};
    const optim::SweepAxis a{"phiAm", 10.0, 85.0, 38};
    json j;
    j["frequency_span"] = run_sweep(cfg, {{f, s}}, out / "sweep_frequency_span.csv", threads);
    j["frequency_amplitude"] = run_sweep(cfg, {{f, a}}, out / "sweep_frequency_amplitude.csv", threads);
    j["amplitude_span"] = run_sweep(cfg, {{a, s}}, out / "sweep_amplitude_span.csv", threads);
    return j;
}

int cmd_repro(const Common& c, const std::string& study) {
    WorkbenchConfig cfg = load(c);
    if (study == "mission") return cmd_optimize_mission(c);
    if (study == "mo-lhd" || study == "mo-miffs") {
        if (c.pop) cfg.moea.popSize = *c.pop;
        if (c.budget) cfg.moea.budget = *c.budget;
    }
    const fs::path out = prepare_output(c, cfg);
    json s;
    int code = kExitOk;
    if (study == "fig6") s = repro_fig6(cfg, out);
    else if (study == "fig7") s = repro_fig7(cfg, out);
    else if (study == "table6") s = repro_table6(cfg, out);
    else if (study == "sweeps") s = repro_sweeps(cfg, out, c.threads);
    else {
        s = moea_run(cfg, c, study == "mo-miffs" ? Goal::MoMiffs : Goal::MoLhd, out);
        if (s["feasibleInPopulation"].get<std::size_t>() == 0) code = kExitInfeasible;
    }
    s["study"] = study;
    write_json(out / "summary.json", s);
    std::cout << s.dump(2) << "\n";
    return code;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Dragonfly-inspired flapping-wing design workbench"};
    app.require_subcommand(1);
    Common common;

    auto* sim = app.add_subcommand("simulate", "integrate the four-wing system for the configured design");
    add_common(sim, common);
    bool trace = false, maxAmp = false;
    sim->add_flag("--trace", trace, "write a per-step trace CSV");
    sim->add_flag("--max-amplitude", maxAmp, "run the maximum-amplitude case instead of the nominal one");

    auto* mb = app.add_subcommand("mbsd", "stealth distance decomposition for the configured design");
    add_common(mb, common);

    auto* ev = app.add_subcommand("evaluate", "full pipeline: simulation, constraints and the four objectives");
    add_common(ev, common);

    auto* sw = app.add_subcommand("sweep", "full-factorial sweep over design variables");
    add_common(sw, common);
    std::vector<std::string> axes;
    sw->add_option("--axis", axes, "name:lo:hi:count, repeatable")->required();

    auto* mo = app.add_subcommand("optimize-mo", "two-objective search (MBSD against LHD or MIFFS)");
    add_common(mo, common);
    add_optimizer_flags(mo, common);
    std::string objective = "lhd";
    mo->add_option("--objective", objective, "second objective")->check(CLI::IsMember({"lhd", "miffs"}));

    auto* mi = app.add_subcommand("optimize-mission", "maximize additional hover time under the constraints");
    add_common(mi, common);
    add_optimizer_flags(mi, common);

    auto* an = app.add_subcommand("analyze", "correlation, importance and ratio statistics of an archive");
    add_common(an, common);
    std::string archive;
    bool includeInfeasible = false;
    an->add_option("--archive", archive, "archive CSV from an optimizer run")->required()->check(CLI::ExistingFile);
    an->add_flag("--include-infeasible", includeInfeasible, "use every row instead of feasible rows only");

    auto* re = app.add_subcommand("repro", "rerun one of the published studies");
    add_common(re, common);
    add_optimizer_flags(re, common);
    std::string study;
    re->add_option("study", study, "fig6 | fig7 | table6 | sweeps | mo-lhd | mo-miffs | mission")
        ->required()
        ->check(CLI::IsMember({"fig6", "fig7", "table6", "sweeps", "mo-lhd", "mo-miffs", "mission"}));

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitConfig;
    }

    try {
        if (*sim) return cmd_simulate(common, trace, maxAmp);
        if (*mb) return cmd_mbsd(common);
        if (*ev) return cmd_evaluate(common);
        if (*sw) return cmd_sweep(common, axes);
        if (*mo) return cmd_optimize_mo(common, objective);
        if (*mi) return cmd_optimize_mission(common);
        if (*an) return cmd_analyze(common, archive, includeInfeasible);
        if (*re) return cmd_repro(common, study);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const LookupError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const DomainError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const SimulationError& e) {
        std::cerr << "numeric failure: " << e.what() << "\n";
        return kExitNumeric;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitNumeric;
    }
    return kExitOk;
}
