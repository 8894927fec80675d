#include "qpde/config.hpp"
#include "qpde/io.hpp"
#include "qpde/rubin.hpp"

#include <json.hpp>

#include <chrono>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

namespace qpde {

namespace {

using nlohmann::json;

const std::set<std::string> kPipelines = {
    "transform", "solve-heat", "solve-wave", "solve-forced-wave",
    "verify",    "kernel-table", "limit-study"};
const std::set<std::string> kFamilies = {"gaussian-bump", "indicator",
                                         "polynomial-window", "kernel-sample"};

DataSelector parse_selector(const json& j, const std::string& where,
                            std::vector<std::string>& errs) {
    DataSelector sel;
    if (j.contains("csv")) {
        sel.csv_path = j.at("csv").get<std::string>();
        return sel;
    }
    if (!j.contains("family")) {
        errs.push_back(where + ": needs either \"family\" or \"csv\"");
        return sel;
    }
    sel.family = j.at("family").get<std::string>();
    if (!kFamilies.count(sel.family))
        errs.push_back(where + ": unknown data family \"" + sel.family + '"');
    if (j.contains("params"))
        for (auto it = j.at("params").begin(); it != j.at("params").end(); ++it)
            sel.params[it.key()] = it.value().get<double>();
    return sel;
}

} // namespace

RunConfig parse_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("config: cannot open " + path);
    json j;
    try {
        j = json::parse(in);
    } catch (const json::exception& e) {
        throw ConfigError(std::string("config: malformed JSON: ") + e.what());
    }

    RunConfig cfg;
    std::vector<std::string> errs;
    try {
        if (j.contains("q")) cfg.q = j["q"].get<double>();
        if (j.contains("k_min")) cfg.k_min = j["k_min"].get<int>();
        if (j.contains("k_max")) cfg.k_max = j["k_max"].get<int>();
        if (j.contains("mode")) cfg.mode = j["mode"].get<std::string>();
        if (j.contains("precision_digits"))
            cfg.precision_digits = j["precision_digits"].get<unsigned>();
        if (j.contains("pipeline")) cfg.pipeline = j["pipeline"].get<std::string>();
        if (j.contains("T")) cfg.T = j["T"].get<double>();
        if (j.contains("time_nodes")) cfg.time_nodes = j["time_nodes"].get<int>();
        if (j.contains("quad_panels")) cfg.quad_panels = j["quad_panels"].get<int>();
        if (j.contains("out")) cfg.out_dir = j["out"].get<std::string>();
        if (j.contains("trajectory_csv"))
            cfg.trajectory_csv = j["trajectory_csv"].get<std::string>();
        if (j.contains("limit_qs")) cfg.limit_qs = j["limit_qs"].get<std::vector<double>>();

        if (j.contains("problem")) {
            const json& p = j["problem"];
            if (p.contains("kind")) cfg.problem_kind = p["kind"].get<std::string>();
            if (p.contains("m")) cfg.m = p["m"].get<double>();
            if (p.contains("b")) cfg.b = p["b"].get<double>();
        }
        if (j.contains("initial"))
            cfg.initial = parse_selector(j["initial"], "initial", errs);
        if (j.contains("initial_velocity"))
            cfg.initial_velocity = parse_selector(j["initial_velocity"], "initial_velocity", errs);
        if (j.contains("forcing")) {
            ForcingSelector fs;
            fs.space = parse_selector(j["forcing"], "forcing", errs);
            if (j["forcing"].contains("time")) {
                const json& t = j["forcing"]["time"];
                if (t.contains("kind")) fs.time_kind = t["kind"].get<std::string>();
                if (t.contains("rate")) fs.rate = t["rate"].get<double>();
            }
            cfg.forcing = fs;
        }
    } catch (const json::exception& e) {
        throw ConfigError(std::string("config: type error: ") + e.what());
    }

    if (!(cfg.q > 0.0 && cfg.q < 1.0))
        errs.push_back("q must satisfy 0 < q < 1");
    if (cfg.k_min > cfg.k_max) errs.push_back("k_min must not exceed k_max");
    if (cfg.mode != "full" && cfg.mode != "half")
        errs.push_back("mode must be \"full\" or \"half\"");
    if (!(cfg.T > 0.0)) errs.push_back("T must be positive");
    if (cfg.time_nodes < 2) errs.push_back("time_nodes must be at least 2");
    if (cfg.quad_panels < 1) errs.push_back("quad_panels must be at least 1");
    if (!cfg.pipeline.empty() && !kPipelines.count(cfg.pipeline))
        errs.push_back("unknown pipeline \"" + cfg.pipeline + '"');
    if (!cfg.problem_kind.empty() && cfg.problem_kind != "heat" &&
        cfg.problem_kind != "wave" && cfg.problem_kind != "forced-wave")
        errs.push_back("problem.kind must be heat, wave or forced-wave");
    if (cfg.problem_kind == "heat" && !(cfg.m > 0.0))
        errs.push_back("heat requires m > 0");
    if (cfg.problem_kind == "wave" || cfg.problem_kind == "forced-wave") {
        if (!(cfg.b > 0.0)) errs.push_back("wave requires b > 0");
        if (!(cfg.m > 0.0)) errs.push_back("wave requires m > 0");
        if (!(cfg.b * cfg.b < 4.0 * cfg.m))
            errs.push_back("wave requires b^2 < 4m");
    }
    if (!(cfg.time_nodes < 2) && cfg.limit_qs.size() < 2 && cfg.pipeline == "limit-study")
        errs.push_back("limit-study requires at least two q values in limit_qs");

    if (!errs.empty()) {
        std::ostringstream os;
        os << "config: " << errs.size() << " constraint violation(s):";
        for (const auto& e : errs) os << "\n  - " << e;
        throw ConfigError(os.str());
    }
    return cfg;
}

namespace {

SignedLatticeFunction materialize(const DataSelector& sel, const LatticeSpec& spec,
                                  const KernelTable* kernel) {
    if (!sel.csv_path.empty()) return read_lattice_csv(sel.csv_path, spec);
    return make_family(sel.family, sel.params, spec, kernel);
}

Forcing materialize_forcing(const ForcingSelector& fs, const LatticeSpec& spec,
                            const KernelTable* kernel) {
    SignedLatticeFunction g = materialize(fs.space, spec, kernel);
    std::function<double(double)> time;
    if (fs.time_kind == "constant") time = [](double) { return 1.0; };
    else if (fs.time_kind == "exp") time = [r = fs.rate](double t) { return std::exp(-r * t); };
    else if (fs.time_kind == "poly") time = [r = fs.rate](double t) { return std::pow(t, r); };
    else throw ConfigError("config: unknown forcing time kind \"" + fs.time_kind + '"');
    return Forcing(std::move(g), std::move(time));
}

std::vector<TimeGrid> refinement_grids(double T, int finest_nodes) {
    // coarse-to-fine halving sequence ending at finest_nodes
    std::vector<int> ns{finest_nodes};
    while (ns.back() >= 9 && (ns.back() - 1) % 2 == 0 && ns.size() < 3)
        ns.push_back((ns.back() - 1) / 2 + 1);
    std::vector<TimeGrid> grids;
    for (auto it = ns.rbegin(); it != ns.rend(); ++it)
        grids.push_back(TimeGrid::uniform(T, *it));
    return grids;
}

json check_to_json(const CheckResult& c) {
    json e;
    e["name"] = c.name;
    e["measured"] = c.measured;
    e["tolerance"] = c.tolerance;
    e["pass"] = c.pass;
    if (std::isfinite(c.order)) e["order"] = c.order;
    if (!c.note.empty()) e["note"] = c.note;
    return e;
}

json report_to_json(const VerificationReport& rep) {
    json arr = json::array();
    for (const auto& c : rep.checks) arr.push_back(check_to_json(c));
    return arr;
}

int finish(const RunConfig& cfg, const VerificationReport& rep, json report) {
    report["checks"] = report_to_json(rep);
    report["all_pass"] = rep.all_pass();
    write_atomic(cfg.out_dir + "/report.json", report.dump(2) + "\n");
    return rep.all_pass() ? 0 : 4;
}

} // namespace

int run(const RunConfig& cfg) {
    const LatticeSpec spec(QParam(cfg.q), cfg.k_min, cfg.k_max);
    const TransformMode mode =
        cfg.mode == "full" ? TransformMode::full_line : TransformMode::half_line;

    if (cfg.pipeline == "limit-study") {
        const VerificationReport rep = classical_limit_study(cfg.limit_qs);
        json report;
        report["pipeline"] = cfg.pipeline;
        return finish(cfg, rep, report);
    }

    auto kernel = std::make_shared<const KernelTable>(
        build_kernel_table(spec, 1e-14, cfg.precision_digits));

    if (cfg.pipeline == "kernel-table") {
        write_atomic(cfg.out_dir + "/kernel.csv", kernel->to_csv());
        VerificationReport rep;
        const double eig = kernel->eigen_residual_hp(0);
        rep.add({"kernel-eigen-residual-hp", eig, 1e-8, eig <= 1e-8,
                 std::numeric_limits<double>::quiet_NaN(),
                 "extended-precision five-point eigen check at lambda = 1"});
        json report;
        report["pipeline"] = cfg.pipeline;
        report["working_digits"] = kernel->working_digits();
        report["max_cancellation_log10"] = kernel->max_cancellation_log10();
        report["m_range"] = {kernel->m_min(), kernel->m_max()};
        return finish(cfg, rep, report);
    }

    // transform/solve/verify pipelines need a transform config; the
    // half-line pair does not calibrate (it does not invert), so it runs
    // at the analytic constant with that fact recorded.
    TransformConfig tc = mode == TransformMode::full_line
                             ? calibrate(spec, mode, kernel)
                             : analytic_config(spec, mode, kernel);
    json report;
    report["pipeline"] = cfg.pipeline;
    report["mode"] = cfg.mode;
    report["c_q"] = tc.c_q;
    report["analytic_c_q"] = tc.analytic_c_q;
    if (std::isfinite(tc.raw_scale)) {
        report["raw_scale"] = tc.raw_scale;
        report["calibration_residual"] = tc.calibration_residual;
    } else {
        report["calibration"] = "half-line pair is not invertible; analytic constant 1/(2 pi_q) used verbatim";
    }

    if (cfg.pipeline == "transform") {
        if (!cfg.initial) throw ConfigError("config: transform needs \"initial\" data");
        const SignedLatticeFunction f = materialize(*cfg.initial, spec, kernel.get());
        const SpectralFunction g = forward(f, tc);
        const SpectralFunction gs = forward_structured(f, tc);
        double diff = 0.0, scale = 0.0;
        for (size_t i = 0; i < g.values.size(); ++i) {
            diff = std::max(diff, std::abs(g.values[i] - gs.values[i]));
            scale = std::max(scale, std::abs(g.values[i]));
        }
        const double rel = scale == 0.0 ? 0.0 : diff / scale;
        write_atomic(cfg.out_dir + "/spectra.csv", spectra_to_csv(g));
        VerificationReport rep;
        rep.add({"structured-vs-naive-forward", rel, 1e-12, rel <= 1e-12,
                 std::numeric_limits<double>::quiet_NaN(), ""});
        return finish(cfg, rep, report);
    }

    const int nq = cfg.quad_panels;
    VerificationReport rep;

    if (cfg.pipeline == "solve-heat" ||
        (cfg.pipeline == "verify" && cfg.problem_kind == "heat")) {
        if (!cfg.initial) throw ConfigError("config: heat needs \"initial\" data");
        const SignedLatticeFunction phi = materialize(*cfg.initial, spec, kernel.get());
        Forcing forcing;
        if (cfg.forcing) forcing = materialize_forcing(*cfg.forcing, spec, kernel.get());
        const HeatProblem prob(cfg.m, phi, forcing, cfg.T);

        std::vector<SolutionTrajectory> trajs;
        for (const auto& grid : refinement_grids(cfg.T, cfg.time_nodes))
            trajs.push_back(solve_heat(prob, grid, tc, nq));
        const SolutionTrajectory& fine = trajs.back();

        if (!cfg.trajectory_csv.empty()) {
            auto [times, profiles] = read_solution_csv(cfg.trajectory_csv, spec);
            const SolutionTrajectory ref = solve_heat(prob, TimeGrid(times.back(), times), tc, nq);
            double worst = 0.0;
            for (size_t i = 0; i < profiles.size(); ++i) {
                SignedLatticeFunction d(spec);
                const auto& a = profiles[i];
                const auto& b = ref.physical.samples[i];
                for (size_t v = 0; v < d.pos.size(); ++v) {
                    d.pos[v] = a.pos[v] - b.pos[v];
                    d.neg[v] = a.neg[v] - b.neg[v];
                }
                const double nb = l2_norm_full(b);
                worst = std::max(worst, nb == 0.0 ? l2_norm_full(d) : l2_norm_full(d) / nb);
            }
            rep.add({"stored-trajectory-vs-recomputed", worst, 1e-8, worst <= 1e-8,
                     std::numeric_limits<double>::quiet_NaN(), cfg.trajectory_csv});
        }

        rep.merge(residual_heat_physical(trajs, prob));
        rep.merge(apriori_heat(fine, prob, tc, nq));
        if (forcing.is_zero()) {
            // damping: ||u_hat(t)|| <= e^{-tm} ||phi_hat||
            const double nphi = l2_norm(fine.spectral.samples[0]);
            double worst = 0.0;
            for (int i = 0; i < fine.grid.size(); ++i)
                worst = std::max(worst, l2_norm(fine.spectral.samples[i]) /
                                            (std::exp(-fine.grid.nodes[i] * cfg.m) * nphi));
            rep.add({"heat-damping-envelope", worst, 1.0 + 1e-9, worst <= 1.0 + 1e-9,
                     std::numeric_limits<double>::quiet_NaN(),
                     "max over nodes of ||u_hat(t)|| / (e^{-tm} ||phi_hat||)"});
        }
        write_atomic(cfg.out_dir + "/solution.csv", solution_to_csv(fine));
        write_atomic(cfg.out_dir + "/spectra_final.csv",
                     spectra_to_csv(fine.spectral.samples.back()));
        report["provenance"] = fine.provenance;
        return finish(cfg, rep, report);
    }

    if (cfg.pipeline == "solve-wave" ||
        (cfg.pipeline == "verify" && cfg.problem_kind == "wave")) {
        if (!cfg.initial || !cfg.initial_velocity)
            throw ConfigError("config: wave needs \"initial\" and \"initial_velocity\"");
        const SignedLatticeFunction phi = materialize(*cfg.initial, spec, kernel.get());
        const SignedLatticeFunction psi = materialize(*cfg.initial_velocity, spec, kernel.get());
        const WaveProblem prob(cfg.b, cfg.m, phi, psi, cfg.T);

        std::vector<SolutionTrajectory> trajs;
        for (const auto& grid : refinement_grids(cfg.T, cfg.time_nodes))
            trajs.push_back(solve_wave(prob, grid, tc));
        const SolutionTrajectory& fine = trajs.back();

        rep.merge(residual_wave_physical(trajs, cfg.b, cfg.m, phi, psi, Forcing()));
        // kernel path vs spectral path at t = T/2
        {
            const double t = cfg.T / 2.0;
            const SignedLatticeFunction kp = wave_kernel_path(t, prob, tc);
            const TimeGrid g2 = TimeGrid::uniform(t, 3);
            const SolutionTrajectory sp = solve_wave(prob, g2, tc);
            const auto& us = sp.physical.samples[2];
            SignedLatticeFunction d(spec);
            for (size_t v = 0; v < d.pos.size(); ++v) {
                d.pos[v] = kp.pos[v] - us.pos[v];
                d.neg[v] = kp.neg[v] - us.neg[v];
            }
            const double rel = l2_norm_full(d) / l2_norm_full(us);
            rep.add({"wave-kernel-path-vs-spectral", rel, 1e-6, rel <= 1e-6,
                     std::numeric_limits<double>::quiet_NaN(), "t = T/2"});
        }
        write_atomic(cfg.out_dir + "/solution.csv", solution_to_csv(fine));
        write_atomic(cfg.out_dir + "/spectra_final.csv",
                     spectra_to_csv(fine.spectral.samples.back()));
        report["provenance"] = fine.provenance;
        return finish(cfg, rep, report);
    }

    if (cfg.pipeline == "solve-forced-wave" ||
        (cfg.pipeline == "verify" && cfg.problem_kind == "forced-wave")) {
        if (!cfg.forcing) throw ConfigError("config: forced-wave needs \"forcing\"");
        const Forcing forcing = materialize_forcing(*cfg.forcing, spec, kernel.get());
        const ForcedWaveProblem prob(cfg.b, cfg.m, forcing, cfg.T);

        std::vector<SolutionTrajectory> trajs;
        for (const auto& grid : refinement_grids(cfg.T, cfg.time_nodes))
            trajs.push_back(solve_forced_wave(prob, grid, tc, nq));
        const SolutionTrajectory& fine = trajs.back();

        SignedLatticeFunction zero(spec);
        rep.merge(residual_wave_physical(trajs, cfg.b, cfg.m, zero, zero, forcing));
        write_atomic(cfg.out_dir + "/solution.csv", solution_to_csv(fine));
        write_atomic(cfg.out_dir + "/spectra_final.csv",
                     spectra_to_csv(fine.spectral.samples.back()));
        report["provenance"] = fine.provenance;
        return finish(cfg, rep, report);
    }

    if (cfg.pipeline == "verify") {
        // no problem kind: run the standing battery (uniqueness + limits)
        rep.merge(uniqueness_probe(ProblemKind::heat, spec, tc));
        rep.merge(uniqueness_probe(ProblemKind::wave, spec, tc));
        rep.merge(uniqueness_probe(ProblemKind::forced_wave, spec, tc));
        rep.merge(classical_limit_study(cfg.limit_qs));
        return finish(cfg, rep, report);
    }

    throw ConfigError("config: no pipeline selected");
}

} // namespace qpde
