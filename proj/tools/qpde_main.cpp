// Batch front door: runs transforms, solvers and verification from a JSON
// config and writes CSV data plus a machine-readable report.
//
// Exit codes: 0 ok, 2 config error, 3 numeric error, 4 verification failure.

#include "qpde/config.hpp"
#include "qpde/kernel.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <exception>

int main(int argc, char** argv) {
    CLI::App app{"q-calculus transform and Cauchy-problem toolkit"};
    app.require_subcommand(1);

    std::string config_path, out_dir, mode;
    unsigned precision_digits = 0;
    app.add_option("--config", config_path, "JSON run configuration");
    app.add_option("--out", out_dir, "output directory (overrides config)");
    app.add_option("--mode", mode, "transform mode: full | half (overrides config)")
        ->check(CLI::IsMember({"full", "half"}));
    app.add_option("--precision-digits", precision_digits,
                   "kernel-table working digits (0 = automatic)");

    const char* subs[] = {"transform",  "solve-heat",  "solve-wave", "solve-forced-wave",
                          "verify",     "kernel-table", "limit-study"};
    for (const char* s : subs) app.add_subcommand(s, "");

    CLI11_PARSE(app, argc, argv);

    try {
        qpde::RunConfig cfg =
            config_path.empty() ? qpde::RunConfig{} : qpde::parse_config(config_path);
        cfg.pipeline = app.get_subcommands().front()->get_name();
        if (!out_dir.empty()) cfg.out_dir = out_dir;
        if (!mode.empty()) cfg.mode = mode;
        if (precision_digits != 0) cfg.precision_digits = precision_digits;
        const int rc = qpde::run(cfg);
        if (rc == 0) std::fprintf(stderr, "ok: report written to %s/report.json\n",
                                  cfg.out_dir.c_str());
        else std::fprintf(stderr, "verification failure: see %s/report.json\n",
                          cfg.out_dir.c_str());
        return rc;
    } catch (const qpde::ConfigError& e) {
        std::fprintf(stderr, "%s\n", e.what());
        return 2;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "numeric error: %s\n", e.what());
        return 3;
    }
}
