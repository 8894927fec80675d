#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "qpde/config.hpp"
#include "qpde/io.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

using namespace qpde;
namespace fs = std::filesystem;

namespace {

fs::path scratch_dir() {
    static fs::path dir = [] {
        fs::path p = fs::temp_directory_path() / "qpde_test_io";
        fs::remove_all(p);
        fs::create_directories(p);
        return p;
    }();
    return dir;
}

std::string write_temp(const std::string& name, const std::string& content) {
    const fs::path p = scratch_dir() / name;
    write_atomic(p.string(), content);
    return p.string();
}

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    REQUIRE(in.good());
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

} // namespace

TEST_CASE("fmt_sci17 round-trips doubles") {
    for (double v : {1.0, -0.12345678901234567, 3.0e-300, 7.25e88, 0.0}) {
        const std::string s = fmt_sci17(v);
        CHECK(std::stod(s) == v);
        CHECK(s.find('e') != std::string::npos);
    }
}

TEST_CASE("write_atomic creates directories and replaces content") {
    const fs::path p = scratch_dir() / "sub" / "nested" / "out.txt";
    write_atomic(p.string(), "first\n");
    CHECK(slurp(p.string()) == "first\n");
    write_atomic(p.string(), "second\n");
    CHECK(slurp(p.string()) == "second\n");
    // no temp files left behind
    int entries = 0;
    for (auto& e : fs::directory_iterator(p.parent_path())) {
        (void)e;
        ++entries;
    }
    CHECK(entries == 1);
}

TEST_CASE("data families evaluate their formulas") {
    const LatticeSpec s(QParam(0.5), -3, 10);
    const auto g = make_family("gaussian-bump", {{"a", 2.0}}, s);
    CHECK(std::abs(g.at_pos(1) - std::exp(-2.0 * 0.25)) < 1e-15);
    CHECK(std::abs(g.at_neg(1) - std::exp(-2.0 * 0.25)) < 1e-15);

    const auto ind = make_family("indicator", {{"k0", 2.0}}, s);
    CHECK(ind.at_pos(2) == cplx(1.0, 0.0));
    CHECK(ind.at_neg(2) == cplx(1.0, 0.0));
    CHECK(std::abs(ind.at_pos(3)) == 0.0);

    const auto pw = make_family("polynomial-window", {{"n", 3.0}, {"a", 1.0}}, s);
    const double x = s.point(1);
    CHECK(std::abs(pw.at_pos(1) - x * x * x * std::exp(-x * x)) < 1e-15);
    CHECK(std::abs(pw.at_neg(1) - (-x) * (-x) * (-x) * std::exp(-x * x)) < 1e-15);

    const auto ks = make_family("kernel-sample", {{"j0", 1.0}}, s);
    CHECK(std::abs(ks.at_pos(0) - e_q2_imag(0.5, s.q)) < 1e-13);
    CHECK(std::abs(ks.at_neg(0) - e_q2_imag(-0.5, s.q)) < 1e-13);

    CHECK_THROWS_AS(make_family("no-such-family", {}, s), std::invalid_argument);
}

TEST_CASE("lattice CSV round trip; out-of-window indices rejected") {
    const LatticeSpec s(QParam(0.5), -2, 6);
    const std::string path = write_temp("lattice.csv",
                                        "k,sign,re,im\n"
                                        "0,+1,1.5,-0.25\n"
                                        "3,-1,0.75,0\n");
    const auto f = read_lattice_csv(path, s);
    CHECK(f.at_pos(0) == cplx(1.5, -0.25));
    CHECK(f.at_neg(3) == cplx(0.75, 0.0));
    CHECK(std::abs(f.at_pos(1)) == 0.0);

    const std::string bad = write_temp("lattice_bad.csv",
                                       "k,sign,re,im\n"
                                       "99,+1,1,0\n");
    CHECK_THROWS(read_lattice_csv(bad, s));
}

TEST_CASE("solution CSV round trip") {
    const LatticeSpec s(QParam(0.5), -8, 28);
    const TransformConfig cfg = calibrate(s, TransformMode::full_line);
    auto phi = make_family("gaussian-bump", {{"a", 1.0}}, s);
    HeatProblem p(1.0, phi, Forcing(), 0.5);
    const auto traj = solve_heat(p, TimeGrid::uniform(0.5, 5), cfg);
    const std::string path = write_temp("solution.csv", solution_to_csv(traj));
    const auto [times, profiles] = read_solution_csv(path, s);
    REQUIRE(times.size() == 5);
    REQUIRE(profiles.size() == 5);
    for (size_t n = 0; n < times.size(); ++n) {
        CHECK(times[n] == doctest::Approx(traj.grid.nodes[n]).epsilon(1e-15));
        for (size_t i = 0; i < profiles[n].pos.size(); ++i) {
            CHECK(std::abs(profiles[n].pos[i] - traj.physical.samples[n].pos[i]) < 1e-15);
            CHECK(std::abs(profiles[n].neg[i] - traj.physical.samples[n].neg[i]) < 1e-15);
        }
    }
}

TEST_CASE("parse_config: defaults, and every violation reported at once") {
    const std::string ok = write_temp("ok.json", R"({
        "pipeline": "solve-heat",
        "problem": {"kind": "heat"},
        "initial": {"family": "gaussian-bump", "params": {"a": 1.0}}
    })");
    const RunConfig cfg = parse_config(ok);
    CHECK(cfg.q == 0.5);
    CHECK(cfg.k_min == -12);
    CHECK(cfg.k_max == 40);
    CHECK(cfg.mode == "full");
    CHECK(cfg.time_nodes == 65);
    CHECK(cfg.T == 1.0);
    CHECK(cfg.initial.has_value());
    CHECK(cfg.initial->family == "gaussian-bump");

    const std::string bad_q = write_temp("bad_q.json", R"({"q": 1.2, "pipeline": "transform"})");
    try {
        parse_config(bad_q);
        FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
        CHECK(std::string(e.what()).find("0 < q < 1") != std::string::npos);
    }

    const std::string bad_wave = write_temp("bad_wave.json", R"({
        "pipeline": "solve-wave",
        "problem": {"kind": "wave", "b": 3.0, "m": 2.0}
    })");
    try {
        parse_config(bad_wave);
        FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
        CHECK(std::string(e.what()).find("b^2 < 4m") != std::string::npos);
    }

    const std::string multi = write_temp("multi.json", R"({
        "q": -1.0, "T": 0.0, "mode": "sideways", "pipeline": "transform"
    })");
    try {
        parse_config(multi);
        FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
        const std::string msg = e.what();
        CHECK(msg.find("0 < q < 1") != std::string::npos);
        CHECK(msg.find("T must be positive") != std::string::npos);
        CHECK(msg.find("mode") != std::string::npos);
    }

    CHECK_THROWS_AS(parse_config((scratch_dir() / "missing.json").string()), ConfigError);
    const std::string malformed = write_temp("malformed.json", "{not json");
    CHECK_THROWS_AS(parse_config(malformed), ConfigError);
}

TEST_CASE("run(): kernel-table pipeline writes the CSV and a passing report") {
    RunConfig cfg;
    cfg.k_min = -8;
    cfg.k_max = 28;
    cfg.pipeline = "kernel-table";
    cfg.out_dir = (scratch_dir() / "kt").string();
    fs::create_directories(cfg.out_dir);
    CHECK(run(cfg) == 0);
    const std::string csv = slurp(cfg.out_dir + "/kernel.csv");
    CHECK(csv.rfind("m,argument,re,im,certified_error\n", 0) == 0);
    const std::string rep = slurp(cfg.out_dir + "/report.json");
    CHECK(rep.find("\"all_pass\": true") != std::string::npos);
    CHECK(rep.find("working_digits") != std::string::npos);
}

TEST_CASE("run(): transform pipeline is deterministic") {
    RunConfig cfg;
    cfg.k_min = -8;
    cfg.k_max = 28;
    cfg.pipeline = "transform";
    DataSelector sel;
    sel.family = "gaussian-bump";
    sel.params["a"] = 1.0;
    cfg.initial = sel;
    cfg.out_dir = (scratch_dir() / "tr1").string();
    fs::create_directories(cfg.out_dir);
    CHECK(run(cfg) == 0);
    const std::string first = slurp(cfg.out_dir + "/spectra.csv");
    cfg.out_dir = (scratch_dir() / "tr2").string();
    fs::create_directories(cfg.out_dir);
    CHECK(run(cfg) == 0);
    CHECK(slurp(cfg.out_dir + "/spectra.csv") == first);
}

TEST_CASE("run(): heat verify pipeline passes, corrupted stored trajectory exits 4") {
    RunConfig cfg;
    cfg.k_min = -8;
    cfg.k_max = 28;
    cfg.pipeline = "solve-heat";
    cfg.problem_kind = "heat";
    cfg.time_nodes = 33;
    DataSelector sel;
    sel.family = "gaussian-bump";
    sel.params["a"] = 1.0;
    cfg.initial = sel;
    cfg.out_dir = (scratch_dir() / "heat").string();
    fs::create_directories(cfg.out_dir);
    CHECK(run(cfg) == 0);
    const std::string solution = slurp(cfg.out_dir + "/solution.csv");

    // re-verify against the stored trajectory: consistent
    RunConfig v = cfg;
    v.pipeline = "verify";
    v.trajectory_csv = cfg.out_dir + "/solution.csv";
    v.out_dir = (scratch_dir() / "heat_v").string();
    fs::create_directories(v.out_dir);
    CHECK(run(v) == 0);

    // corrupt one stored value: the re-check must fail with exit code 4
    std::string bad = solution;
    const auto pos = bad.rfind("\n", bad.size() - 2);
    std::string last = bad.substr(pos + 1);
    bad = bad.substr(0, pos + 1);
    // scale the re_u column of the last row by 10
    std::istringstream ls(last);
    std::string t, k, sign, x, re, im;
    std::getline(ls, t, ',');
    std::getline(ls, k, ',');
    std::getline(ls, sign, ',');
    std::getline(ls, x, ',');
    std::getline(ls, re, ',');
    std::getline(ls, im);
    bad += t + ',' + k + ',' + sign + ',' + x + ',' + fmt_sci17(std::stod(re) + 1.0) + ',' + im + '\n';
    const std::string bad_path = write_temp("solution_bad.csv", bad);
    v.trajectory_csv = bad_path;
    v.out_dir = (scratch_dir() / "heat_bad").string();
    fs::create_directories(v.out_dir);
    CHECK(run(v) == 4);
}

TEST_CASE("run(): limit-study pipeline") {
    RunConfig cfg;
    cfg.pipeline = "limit-study";
    cfg.limit_qs = {0.9, 0.99};
    cfg.out_dir = (scratch_dir() / "lim").string();
    fs::create_directories(cfg.out_dir);
    CHECK(run(cfg) == 0);
    const std::string rep = slurp(cfg.out_dir + "/report.json");
    CHECK(rep.find("\"all_pass\": true") != std::string::npos);
}
