#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "qpde/kernel.hpp"

#include <cmath>
#include <sstream>

using namespace qpde;

TEST_CASE("q^2-trigonometric series against 60-digit oracles") {
    QParam q(0.5);
    // independent high-precision summation oracles, frozen
    CHECK(cos_q2(1.0, q).value == doctest::Approx(0.83649494534734317839).epsilon(1e-14));
    CHECK(sin_q2(1.0, q).value == doctest::Approx(0.90639386286161405504).epsilon(1e-14));
    CHECK(cos_q2(8.0, q, 1e-16).value == doctest::Approx(0.13979783502854175).epsilon(1e-13));
    CHECK(sin_q2(8.0, q, 1e-16).value == doctest::Approx(0.036095491169089109).epsilon(1e-13));
    // deep-cancellation argument handled by precision escalation
    CHECK(cos_q2(64.0, q, 1e-16).value == doctest::Approx(-7.0986242811893890e-8).epsilon(1e-12));
    CHECK(sin_q2(64.0, q, 1e-16).value == doctest::Approx(-2.2194040459239896e-9).epsilon(1e-12));
}

TEST_CASE("series report max term and certified bound") {
    QParam q(0.5);
    const SeriesResult r = cos_q2(8.0, q);
    CHECK(r.max_term > 10.0); // cancellation happened
    CHECK(r.err_bound > 0.0);
    CHECK(r.err_bound < 1e-10);
    CHECK(std::abs(r.value) < r.max_term);
}

TEST_CASE("e_q2_imag: conjugate symmetry and special values") {
    QParam q(0.5);
    const cplx a = e_q2_imag(1.25, q);
    const cplx b = e_q2_imag(-1.25, q);
    CHECK(a.real() == b.real());
    CHECK(a.imag() == -b.imag());
    CHECK(e_q2_imag(0.0, q) == cplx(1.0, 0.0));
}

TEST_CASE("kernel table: coverage, certified errors, recurrence vs series") {
    QParam q(0.5);
    LatticeSpec spec(q, -12, 40);
    const KernelTable t = build_kernel_table(spec);

    CHECK(t.m_min() == 2 * -12 - 4);
    CHECK(t.m_max() == 2 * 40 + 4);
    for (int m = t.m_min(); m <= t.m_max(); ++m) {
        CHECK(t.err(m) > 0.0); // every row carries a certified bound
        CHECK(t.err(m) <= 1e-14 * std::max(1.0, std::abs(t.at(m))));
    }

    // overlap window: the recurrence entries must match the independent
    // direct-series evaluation
    for (int m = -1; m >= -8; --m) {
        const cplx direct = e_q2_imag(std::pow(0.5, m), q, 1e-18);
        const cplx tab = t.at(m);
        CHECK(std::abs(tab - direct) <= 1e-10 * std::abs(direct));
    }

    CHECK_THROWS_AS(t.at(t.m_min() - 1), std::out_of_range);
}

TEST_CASE("kernel table: extended-precision eigenrelation residual") {
    LatticeSpec spec(QParam(0.5), -12, 40);
    const KernelTable t = build_kernel_table(spec);
    for (int j = -3; j <= 6; ++j) CHECK(t.eigen_residual_hp(j) <= 1e-8);
}

TEST_CASE("kernel table CSV schema") {
    LatticeSpec spec(QParam(0.5), -2, 4);
    const KernelTable t = build_kernel_table(spec);
    std::istringstream in(t.to_csv());
    std::string header;
    std::getline(in, header);
    CHECK(header == "m,argument,re,im,certified_error");
    int rows = 0;
    std::string line;
    while (std::getline(in, line))
        if (!line.empty()) ++rows;
    CHECK(rows == t.m_max() - t.m_min() + 1);
}

TEST_CASE("series rejects nonsensical tolerance") {
    CHECK_THROWS_AS(cos_q2(1.0, QParam(0.5), -1.0), std::invalid_argument);
}
