#include "qpde/io.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <sstream>

namespace qpde {

std::string fmt_sci17(double v) {
    std::ostringstream os;
    os << std::scientific << std::setprecision(16) << v;
    return os.str();
}

void write_atomic(const std::string& path, const std::string& content) {
    namespace fs = std::filesystem;
    const fs::path target(path);
    const fs::path dir = target.parent_path().empty() ? "." : target.parent_path();
    fs::create_directories(dir);
    const fs::path tmp = dir / (target.filename().string() + ".tmp");
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("write_atomic: cannot open " + tmp.string());
        out << content;
        if (!out) throw std::runtime_error("write_atomic: write failed for " + tmp.string());
    }
    fs::rename(tmp, target);
}

namespace {

double param_of(const std::map<std::string, double>& params, const std::string& key,
                double dflt) {
    auto it = params.find(key);
    return it == params.end() ? dflt : it->second;
}

} // namespace

SignedLatticeFunction make_family(const std::string& name,
                                  const std::map<std::string, double>& params,
                                  const LatticeSpec& spec, const KernelTable* kernel) {
    SignedLatticeFunction f(spec);
    if (name == "gaussian-bump") {
        const double a = param_of(params, "a", 1.0);
        for (int k = spec.k_min; k <= spec.k_max; ++k) {
            const double x = spec.point(k);
            f.at_pos(k) = std::exp(-a * x * x);
            f.at_neg(k) = f.at_pos(k);
        }
    } else if (name == "indicator") {
        const int k0 = static_cast<int>(param_of(params, "k0", 0.0));
        if (k0 < spec.k_min || k0 > spec.k_max)
            throw std::invalid_argument("indicator: k0 outside the lattice window");
        f.at_pos(k0) = 1.0;
        f.at_neg(k0) = 1.0;
    } else if (name == "polynomial-window") {
        const int n = static_cast<int>(param_of(params, "n", 2.0));
        const double a = param_of(params, "a", 1.0);
        for (int k = spec.k_min; k <= spec.k_max; ++k) {
            const double x = spec.point(k);
            f.at_pos(k) = std::pow(x, n) * std::exp(-a * x * x);
            f.at_neg(k) = std::pow(-x, n) * std::exp(-a * x * x);
        }
    } else if (name == "kernel-sample") {
        const int j0 = static_cast<int>(param_of(params, "j0", 0.0));
        for (int k = spec.k_min; k <= spec.k_max; ++k) {
            if (kernel && kernel->covers(k + j0)) {
                f.at_pos(k) = kernel->at(k + j0);
                f.at_neg(k) = std::conj(kernel->at(k + j0));
            } else {
                f.at_pos(k) = e_q2_imag(spec.point(k + j0), spec.q);
                f.at_neg(k) = std::conj(f.at_pos(k));
            }
        }
    } else {
        throw std::invalid_argument("unknown data family: " + name);
    }
    return f;
}

SignedLatticeFunction band_limited_bump(const TransformConfig& cfg, int j0, int j1) {
    if (!(j0 < j1)) throw std::invalid_argument("band_limited_bump: need j0 < j1");
    if (j0 < cfg.spec.k_min || j1 > cfg.spec.k_max)
        throw std::invalid_argument("band_limited_bump: band outside the frequency window");
    SpectralFunction g(cfg.spec);
    for (int j = j0 + 1; j < j1; ++j) {
        const double s = double(j - j0) / double(j1 - j0);
        g.at(j) = std::exp(-1.0 / (s * (1.0 - s)));
    }
    return inverse(g, cfg);
}

SignedLatticeFunction read_lattice_csv(const std::string& path, const LatticeSpec& spec) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("read_lattice_csv: cannot open " + path);
    SignedLatticeFunction f(spec);
    std::string line;
    bool first = true;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        if (first) {
            first = false;
            if (line.rfind("k,", 0) == 0) continue; // header
        }
        std::istringstream ls(line);
        std::string tok;
        int col = 0;
        int k = 0, sign = 0;
        double re = 0.0, im = 0.0;
        while (std::getline(ls, tok, ',')) {
            switch (col) {
                case 0: k = std::stoi(tok); break;
                case 1: sign = std::stoi(tok); break;
                case 2: re = std::stod(tok); break;
                case 3: im = std::stod(tok); break;
                default: throw std::runtime_error("read_lattice_csv: too many columns");
            }
            ++col;
        }
        if (col != 4) throw std::runtime_error("read_lattice_csv: expected 4 columns, got line: " + line);
        if (k < spec.k_min || k > spec.k_max)
            throw std::runtime_error("read_lattice_csv: index k outside the lattice window");
        if (sign == 1) f.at_pos(k) = {re, im};
        else if (sign == -1) f.at_neg(k) = {re, im};
        else throw std::runtime_error("read_lattice_csv: sign must be +-1");
    }
    f.check_finite();
    return f;
}

std::pair<std::vector<double>, std::vector<SignedLatticeFunction>>
read_solution_csv(const std::string& path, const LatticeSpec& spec) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("read_solution_csv: cannot open " + path);
    std::vector<double> times;
    std::vector<SignedLatticeFunction> profiles;
    std::string line;
    bool first = true;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        if (first) {
            first = false;
            if (line.rfind("t,", 0) == 0) continue;
        }
        std::istringstream ls(line);
        std::string tok;
        double t = 0.0, re = 0.0, im = 0.0;
        int k = 0, sign = 0, col = 0;
        while (std::getline(ls, tok, ',')) {
            switch (col) {
                case 0: t = std::stod(tok); break;
                case 1: k = std::stoi(tok); break;
                case 2: sign = std::stoi(tok); break;
                case 3: break; // x is redundant with (k, sign)
                case 4: re = std::stod(tok); break;
                case 5: im = std::stod(tok); break;
                default: throw std::runtime_error("read_solution_csv: too many columns");
            }
            ++col;
        }
        if (col != 6) throw std::runtime_error("read_solution_csv: expected 6 columns");
        if (times.empty() || t != times.back()) {
            times.push_back(t);
            profiles.emplace_back(spec);
        }
        if (k < spec.k_min || k > spec.k_max)
            throw std::runtime_error("read_solution_csv: index k outside the lattice window");
        auto& u = profiles.back();
        if (sign == 1) u.at_pos(k) = {re, im};
        else if (sign == -1) u.at_neg(k) = {re, im};
        else throw std::runtime_error("read_solution_csv: sign must be +-1");
    }
    if (times.empty()) throw std::runtime_error("read_solution_csv: no data rows in " + path);
    return {std::move(times), std::move(profiles)};
}

} // namespace qpde
