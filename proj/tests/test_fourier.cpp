#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "qpde/fourier.hpp"
#include "qpde/io.hpp"
#include "qpde/quadrature.hpp"

#include <chrono>
#include <cmath>
#include <random>

using namespace qpde;

namespace {

const LatticeSpec& ref_spec() {
    static LatticeSpec s(QParam(0.5), -12, 40);
    return s;
}

const TransformConfig& ref_cfg() {
    static TransformConfig cfg = calibrate(ref_spec(), TransformMode::full_line);
    return cfg;
}

double rel_l2_full(const SignedLatticeFunction& a, const SignedLatticeFunction& b) {
    SignedLatticeFunction d(a.spec);
    for (size_t i = 0; i < d.pos.size(); ++i) {
        d.pos[i] = a.pos[i] - b.pos[i];
        d.neg[i] = a.neg[i] - b.neg[i];
    }
    return l2_norm_full(d) / l2_norm_full(b);
}

} // namespace

TEST_CASE("forward: zero maps to zero; half-line indicator is a single term") {
    const auto& cfg = ref_cfg();
    SignedLatticeFunction z(ref_spec());
    const auto g = forward(z, cfg);
    for (const auto& v : g.values) CHECK(std::abs(v) == 0.0);

    const TransformConfig half = analytic_config(ref_spec(), TransformMode::half_line, cfg.kernel);
    SignedLatticeFunction ind(ref_spec());
    ind.at_pos(0) = 1.0;
    const auto gh = forward(ind, half);
    for (int j = -3; j <= 6; ++j) {
        const cplx want = half.c_q * 0.5 * std::conj(cfg.kernel->at(j));
        CHECK(std::abs(gh.at(j) - want) < 1e-15);
    }
}

TEST_CASE("forward matches a naive independent double loop") {
    const auto& cfg = ref_cfg();
    const auto& s = ref_spec();
    SignedLatticeFunction f(s);
    for (int k = s.k_min; k <= s.k_max; ++k) {
        const double x = s.point(k);
        f.at_pos(k) = std::exp(-1.3 * x * x);
        f.at_neg(k) = f.at_pos(k);
    }
    const auto g = forward(f, cfg);
    double worst = 0.0, scale = 0.0;
    for (int j = s.k_min; j <= s.k_max; ++j) {
        cplx acc = 0.0;
        for (int k = s.k_min; k <= s.k_max; ++k) {
            const double x = s.point(k);
            acc += x * (f.at_pos(k) * e_q2_imag(-x * s.point(j), s.q) +
                        f.at_neg(k) * e_q2_imag(x * s.point(j), s.q));
        }
        acc *= cfg.c_q * 0.5;
        worst = std::max(worst, std::abs(g.at(j) - acc));
        scale = std::max(scale, std::abs(acc));
    }
    CHECK(worst / scale <= 1e-12);
}

TEST_CASE("calibration: identity on the probe family, idempotent, raw scale recorded") {
    const auto& cfg = ref_cfg();
    CHECK(cfg.calibration_residual <= 1e-8);
    CHECK(std::abs(cfg.raw_scale - 1.0) < 1e-6); // closed-form constant is essentially exact
    CHECK(cfg.c_q / cfg.analytic_c_q == doctest::Approx(1.0).epsilon(1e-6));

    const TransformConfig again = calibrate(ref_spec(), TransformMode::full_line, cfg.kernel);
    CHECK(again.c_q == doctest::Approx(cfg.c_q).epsilon(1e-12));
}

TEST_CASE("half-line pair does not invert: calibration failure with diagnostics") {
    CHECK_THROWS_AS(calibrate(ref_spec(), TransformMode::half_line, ref_cfg().kernel),
                    CalibrationError);
}

TEST_CASE("round trip and single-frequency inverse") {
    const auto& cfg = ref_cfg();
    const auto f = band_limited_bump(cfg, 0, 10);
    CHECK(rel_l2_full(inverse(forward(f, cfg), cfg), f) <= 1e-8);

    // half-line single-frequency example is the printed display verbatim
    const TransformConfig half = analytic_config(ref_spec(), TransformMode::half_line, cfg.kernel);
    SpectralFunction g(ref_spec());
    g.at(2) = 1.0;
    const auto chk = inverse(g, half);
    for (int k = -3; k <= 6; ++k) {
        const cplx want = half.c_q * 0.5 * std::pow(0.5, 2) * cfg.kernel->at(k + 2);
        CHECK(std::abs(chk.at_pos(k) - want) < 1e-15);
        CHECK(std::abs(chk.at_neg(k) - std::conj(want)) < 1e-15);
    }
}

TEST_CASE("conjugate pairing on real data") {
    const auto& cfg = ref_cfg();
    const auto& s = ref_spec();
    std::mt19937 rng(17);
    std::uniform_real_distribution<double> U(-1.0, 1.0);
    SignedLatticeFunction f(s), swapped(s);
    for (int k = s.k_min; k <= s.k_max; ++k) {
        f.at_pos(k) = U(rng);
        f.at_neg(k) = U(rng);
        swapped.at_pos(k) = f.at_neg(k);
        swapped.at_neg(k) = f.at_pos(k);
    }
    const auto g = forward(f, cfg);
    const auto gs = forward(swapped, cfg);
    for (size_t i = 0; i < g.values.size(); ++i)
        CHECK(std::abs(gs.values[i] - std::conj(g.values[i])) <
              1e-13 * (1.0 + std::abs(g.values[i])));
}

TEST_CASE("Parseval residual") {
    const auto& cfg = ref_cfg();
    const auto& s = ref_spec();
    const auto f = band_limited_bump(cfg, 0, 10);
    const double r = parseval_residual(f, cfg);
    CHECK(r <= 1e-8);

    // scale invariance of the ratio
    SignedLatticeFunction fs(s);
    for (size_t i = 0; i < fs.pos.size(); ++i) {
        fs.pos[i] = 7.25 * f.pos[i];
        fs.neg[i] = 7.25 * f.neg[i];
    }
    CHECK(parseval_residual(fs, cfg) == doctest::Approx(r).epsilon(1e-9));

    // narrow even indicator at a mid-lattice point: truncation-limited
    SignedLatticeFunction ind(s);
    ind.at_pos(5) = 1.0;
    ind.at_neg(5) = 1.0;
    CHECK(parseval_residual(ind, cfg) <= 1e-6);

    SignedLatticeFunction z(s);
    CHECK_THROWS_AS(parseval_residual(z, cfg), std::invalid_argument);
}

TEST_CASE("diagonalization residual") {
    const auto& cfg = ref_cfg();
    const auto& s = ref_spec();
    SignedLatticeFunction f(s);
    for (int k = s.k_min; k <= s.k_max; ++k) {
        const double x = s.point(k);
        f.at_pos(k) = x * x * std::exp(-x * x);
        f.at_neg(k) = f.at_pos(k);
    }
    CHECK(diagonalization_residual(f, cfg) <= 1e-6);
    SignedLatticeFunction z(s);
    CHECK_THROWS_AS(diagonalization_residual(z, cfg), std::invalid_argument);
}

TEST_CASE("structured forward agrees with the naive sum on random inputs") {
    const auto& cfg = ref_cfg();
    const auto& s = ref_spec();
    std::mt19937 rng(23);
    std::uniform_real_distribution<double> U(-1.0, 1.0);
    for (int trial = 0; trial < 100; ++trial) {
        SignedLatticeFunction f(s);
        for (auto& v : f.pos) v = {U(rng), U(rng)};
        for (auto& v : f.neg) v = {U(rng), U(rng)};
        const auto a = forward(f, cfg);
        const auto b = forward_structured(f, cfg);
        double worst = 0.0, scale = 0.0;
        for (size_t i = 0; i < a.values.size(); ++i) {
            worst = std::max(worst, std::abs(a.values[i] - b.values[i]));
            scale = std::max(scale, std::abs(a.values[i]));
        }
        CHECK(worst / scale <= 1e-12);
    }
    SignedLatticeFunction z(s);
    const auto bz = forward_structured(z, cfg);
    for (const auto& v : bz.values) CHECK(std::abs(v) == 0.0);
}

TEST_CASE("linearity of forward and inverse") {
    const auto& cfg = ref_cfg();
    const auto& s = ref_spec();
    std::mt19937 rng(29);
    std::uniform_real_distribution<double> U(-1.0, 1.0);
    SignedLatticeFunction f(s), g(s), h(s);
    for (int k = s.k_min; k <= s.k_max; ++k) {
        f.at_pos(k) = {U(rng), U(rng)};
        f.at_neg(k) = {U(rng), U(rng)};
        g.at_pos(k) = {U(rng), U(rng)};
        g.at_neg(k) = {U(rng), U(rng)};
        h.at_pos(k) = 1.5 * f.at_pos(k) + 2.5 * g.at_pos(k);
        h.at_neg(k) = 1.5 * f.at_neg(k) + 2.5 * g.at_neg(k);
    }
    const auto Fh = forward(h, cfg);
    const auto Ff = forward(f, cfg);
    const auto Fg = forward(g, cfg);
    for (size_t i = 0; i < Fh.values.size(); ++i) {
        const cplx want = 1.5 * Ff.values[i] + 2.5 * Fg.values[i];
        CHECK(std::abs(Fh.values[i] - want) < 1e-13 * (1.0 + std::abs(want)));
    }
}

TEST_CASE("spectra CSV schema") {
    const auto& cfg = ref_cfg();
    SpectralFunction g(LatticeSpec(QParam(0.5), 0, 2));
    g.at(0) = {1.0, -2.0};
    const std::string csv = spectra_to_csv(g);
    CHECK(csv.rfind("j,xi,re,im\n", 0) == 0);
    CHECK(csv.find("1.0000000000000000e+00") != std::string::npos);
    (void)cfg;
}
