#ifndef QPDE_CONFIG_HPP
#define QPDE_CONFIG_HPP

#include "qpde/verification.hpp"

#include <map>
#include <optional>
#include <string>

namespace qpde {

/// Raised on malformed or constraint-violating run configurations; the
/// message lists every violated constraint at once.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Selector for lattice data: a named analytic family with parameters, or
/// a user CSV (columns k,sign,re,im).
struct DataSelector {
    std::string family; // empty when csv is used
    std::map<std::string, double> params;
    std::string csv_path; // empty when a family is used
};

/// Separable forcing f(t,x) = time_profile(t) * g(x).
struct ForcingSelector {
    DataSelector space;
    std::string time_kind = "constant"; // constant | exp | poly
    double rate = 1.0;                  // exp: e^{-rate t}; poly: t^rate
};

struct RunConfig {
    double q = 0.5;
    int k_min = -12;
    int k_max = 40;
    std::string mode = "full"; // full | half
    unsigned precision_digits = 0;

    std::string pipeline; // transform | solve-heat | solve-wave | solve-forced-wave |
                          // verify | kernel-table | limit-study
    std::string problem_kind; // heat | wave | forced-wave (empty when unused)
    double m = 1.0;
    double b = 1.0;
    double T = 1.0;
    int time_nodes = 65;
    int quad_panels = 8;

    std::optional<DataSelector> initial;          // phi (or transform input)
    std::optional<DataSelector> initial_velocity; // psi (wave)
    std::optional<ForcingSelector> forcing;
    std::string trajectory_csv; // verify pipeline: stored solution to re-check
    std::vector<double> limit_qs = {0.9, 0.99, 0.999};

    std::string out_dir = ".";
};

/// Parses and validates the JSON config; throws ConfigError listing every
/// violated constraint. Fields not present take the documented defaults.
RunConfig parse_config(const std::string& path);

/// Executes the configured pipeline, writing CSV artifacts and a JSON
/// report into cfg.out_dir. Returns the process exit code:
/// 0 ok, 4 when a requested verification fails.
int run(const RunConfig& cfg);

} // namespace qpde

#endif
