#include "qpde/lattice.hpp"
#include "qpde/detail/bigfloat.hpp"

#include <cmath>
#include <limits>

namespace qpde {

using detail::bigfloat;
using detail::PrecisionGuard;

std::vector<double> lattice_points(const LatticeSpec& spec) {
    std::vector<double> pts;
    pts.reserve(spec.size());
    for (int k = spec.k_min; k <= spec.k_max; ++k) pts.push_back(spec.point(k));
    return pts;
}

void SignedLatticeFunction::check_finite() const {
    for (const auto& v : pos)
        if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
            throw std::invalid_argument("SignedLatticeFunction: non-finite sample");
    for (const auto& v : neg)
        if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
            throw std::invalid_argument("SignedLatticeFunction: non-finite sample");
}

double q_bracket(double alpha, QParam q) {
    if (alpha == 0.0) return 0.0;
    return (1.0 - std::pow(q.value(), alpha)) / (1.0 - q.value());
}

double q_factorial(int n, QParam q) {
    if (n < 0) throw std::invalid_argument("q_factorial: n must be >= 0");
    double r = 1.0;
    for (int i = 1; i <= n; ++i) r *= q_bracket(static_cast<double>(i), q);
    return r;
}

double q_pochhammer(double a, int n, QParam q) {
    if (n < 0) throw std::invalid_argument("q_pochhammer: n must be >= 0");
    double r = 1.0;
    double aq = a;
    for (int k = 0; k < n; ++k) {
        r *= 1.0 - aq;
        aq *= q.value();
    }
    return r;
}

InfiniteProduct q_pochhammer_inf(double a, QParam q, double eps) {
    if (!(eps > 0.0)) throw std::invalid_argument("q_pochhammer_inf: eps must be positive");
    if (std::abs(a) >= 1.0)
        throw std::invalid_argument("q_pochhammer_inf: requires |a| < 1 for convergence");

    // Evaluated in extended precision and rounded once at the end; the
    // dropped tail satisfies |log prod_{k>=K}(1-aq^k)| <= sum |aq^k|/(1-|aq^k|).
    PrecisionGuard guard(80);
    const bigfloat qb(q.value());
    bigfloat prod(1);
    bigfloat aq(a);
    while (abs(aq) >= eps) {
        prod *= 1 - aq;
        aq *= qb;
    }
    const double tail = std::abs(static_cast<double>(aq)) / (1.0 - q.value());
    const double bound = std::expm1(tail / (1.0 - std::abs(static_cast<double>(aq))));
    return {static_cast<double>(prod), std::abs(bound)};
}

double q_gamma(double x, QParam q) {
    if (x <= 0.0 && x == std::floor(x))
        throw std::domain_error("q_gamma: pole at nonpositive integer argument");

    PrecisionGuard guard(80);
    const bigfloat qb(q.value());
    const bigfloat eps = pow(bigfloat(10), -40);

    auto poch_inf = [&](const bigfloat& a0) {
        bigfloat prod(1), aq(a0);
        while (abs(aq) >= eps) {
            prod *= 1 - aq;
            aq *= qb;
        }
        return prod;
    };

    const bigfloat num = poch_inf(qb);
    const bigfloat den = poch_inf(pow(qb, bigfloat(x)));
    const bigfloat r = num / den * pow(1 - qb, bigfloat(1.0 - x));
    return static_cast<double>(r);
}

double pi_q(QParam q) {
    const QParam q2(q.value() * q.value());
    return q_gamma(0.5, q2) / std::sqrt(1.0 + q.value());
}

} // namespace qpde
