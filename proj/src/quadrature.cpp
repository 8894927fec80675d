#include "qpde/quadrature.hpp"

#include <algorithm>
#include <cmath>

namespace qpde {

TimeGrid::TimeGrid(double T_, std::vector<double> nodes_) : T(T_), nodes(std::move(nodes_)) {
    if (!(T > 0.0)) throw std::invalid_argument("TimeGrid: horizon must be positive");
    if (nodes.size() < 2 || nodes.front() != 0.0 || nodes.back() != T)
        throw std::invalid_argument("TimeGrid: nodes must run from 0 to T");
    for (size_t i = 1; i < nodes.size(); ++i)
        if (!(nodes[i] > nodes[i - 1]))
            throw std::invalid_argument("TimeGrid: nodes must be strictly increasing");
}

TimeGrid TimeGrid::uniform(double T, int n_nodes) {
    if (n_nodes < 2) throw std::invalid_argument("TimeGrid::uniform: need at least 2 nodes");
    std::vector<double> ns(n_nodes);
    for (int i = 0; i < n_nodes; ++i) ns[i] = T * double(i) / double(n_nodes - 1);
    ns.front() = 0.0;
    ns.back() = T;
    return TimeGrid(T, std::move(ns));
}

double TimeGrid::step() const {
    const double h = nodes[1] - nodes[0];
    for (size_t i = 1; i < nodes.size(); ++i)
        if (std::abs((nodes[i] - nodes[i - 1]) - h) > 1e-12 * T)
            throw std::logic_error("TimeGrid::step: grid is not uniform");
    return h;
}

QuadResult jackson_integral_finite(const std::function<cplx(double)>& f, double x,
                                   QParam q, int K) {
    if (!(x > 0.0)) throw std::invalid_argument("jackson_integral_finite: x must be positive");
    if (K < 0) throw std::invalid_argument("jackson_integral_finite: K must be >= 0");
    const double qq = q.value();
    cplx acc = 0.0;
    double w = 1.0; // q^k
    cplx term = 0.0;
    for (int k = 0; k <= K; ++k) {
        const cplx v = f(w * x);
        if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
            throw std::domain_error("jackson_integral_finite: non-finite sample");
        term = w * v;
        acc += term;
        w *= qq;
    }
    return {(1.0 - qq) * x * acc, (1.0 - qq) * x * std::abs(term)};
}

ImproperQuadResult jackson_integral_improper(const std::function<cplx(double)>& f,
                                             const LatticeSpec& spec) {
    const double q = spec.q.value();
    cplx acc = 0.0;
    double t_low = 0.0, t_high = 0.0;
    for (int k = spec.k_min; k <= spec.k_max; ++k) {
        const double w = spec.point(k);
        const cplx v = f(w);
        if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
            throw std::domain_error("jackson_integral_improper: non-finite sample");
        const cplx term = w * v;
        acc += term;
        if (k == spec.k_min) t_high = (1.0 - q) * std::abs(term);
        if (k == spec.k_max) t_low = (1.0 - q) * std::abs(term);
    }
    return {(1.0 - q) * acc, t_low, t_high};
}

ImproperQuadResult jackson_integral_improper(const SpectralFunction& f) {
    const double q = f.spec.q.value();
    cplx acc = 0.0;
    double t_low = 0.0, t_high = 0.0;
    for (int j = f.spec.k_min; j <= f.spec.k_max; ++j) {
        const cplx term = f.spec.point(j) * f.at(j);
        acc += term;
        if (j == f.spec.k_min) t_high = (1.0 - q) * std::abs(term);
        if (j == f.spec.k_max) t_low = (1.0 - q) * std::abs(term);
    }
    return {(1.0 - q) * acc, t_low, t_high};
}

double l2_norm(const SignedLatticeFunction& f) {
    const double q = f.spec.q.value();
    double acc = 0.0;
    for (int k = f.spec.k_min; k <= f.spec.k_max; ++k)
        acc += f.spec.point(k) * std::norm(f.at_pos(k));
    return std::sqrt((1.0 - q) * acc);
}

double l2_norm(const SpectralFunction& f) {
    const double q = f.spec.q.value();
    double acc = 0.0;
    for (int j = f.spec.k_min; j <= f.spec.k_max; ++j)
        acc += f.spec.point(j) * std::norm(f.at(j));
    return std::sqrt((1.0 - q) * acc);
}

double l2_norm_full(const SignedLatticeFunction& f) {
    const double q = f.spec.q.value();
    double acc = 0.0;
    for (int k = f.spec.k_min; k <= f.spec.k_max; ++k)
        acc += f.spec.point(k) * (std::norm(f.at_pos(k)) + std::norm(f.at_neg(k)));
    return std::sqrt((1.0 - q) * acc);
}

double sobolev_norm(const SpectralFunction& u_hat, double s) {
    const double q = u_hat.spec.q.value();
    double acc = 0.0;
    for (int j = u_hat.spec.k_min; j <= u_hat.spec.k_max; ++j) {
        const double xi = u_hat.spec.point(j);
        acc += xi * std::pow(1.0 + xi * xi, s) * std::norm(u_hat.at(j));
    }
    return std::sqrt((1.0 - q) * acc);
}

namespace {

// n-th finite-difference time derivative (order 2) of the family at node i.
SpectralFunction fd_derivative(const TimeIndexedFamily<SpectralFunction>& u, int n, int i) {
    const double h = u.grid.step();
    const int last = u.grid.size() - 1;
    const auto& s = u.samples;
    SpectralFunction out(s[0].spec);
    const int nv = static_cast<int>(out.values.size());
    auto lin = [&](std::initializer_list<std::pair<double, int>> terms, double denom) {
        for (int v = 0; v < nv; ++v) {
            cplx acc = 0.0;
            for (const auto& [c, idx] : terms) acc += c * s[idx].values[v];
            out.values[v] = acc / denom;
        }
    };
    if (n == 1) {
        if (i == 0) lin({{-3.0, 0}, {4.0, 1}, {-1.0, 2}}, 2.0 * h);
        else if (i == last) lin({{3.0, last}, {-4.0, last - 1}, {1.0, last - 2}}, 2.0 * h);
        else lin({{1.0, i + 1}, {-1.0, i - 1}}, 2.0 * h);
    } else if (n == 2) {
        if (i == 0) lin({{2.0, 0}, {-5.0, 1}, {4.0, 2}, {-1.0, 3}}, h * h);
        else if (i == last) lin({{2.0, last}, {-5.0, last - 1}, {4.0, last - 2}, {-1.0, last - 3}}, h * h);
        else lin({{1.0, i + 1}, {-2.0, i}, {1.0, i - 1}}, h * h);
    } else {
        throw std::invalid_argument("fd_derivative: only orders 1 and 2 are supported");
    }
    return out;
}

} // namespace

double ck_norm(const TimeIndexedFamily<SpectralFunction>& u, int k,
               const std::function<double(const SpectralFunction&)>& space_norm) {
    if (k < 0 || k > 2) throw std::invalid_argument("ck_norm: k must be 0, 1 or 2");
    if (u.grid.size() < 2 * k + 2)
        throw std::invalid_argument("ck_norm: grid too coarse for requested k");
    double total = 0.0;
    for (int n = 0; n <= k; ++n) {
        double worst = 0.0;
        for (int i = 0; i < u.grid.size(); ++i) {
            const double v = n == 0 ? space_norm(u.samples[i])
                                    : space_norm(fd_derivative(u, n, i));
            worst = std::max(worst, v);
        }
        total += worst;
    }
    return total;
}

cplx time_quadrature(const std::function<cplx(double)>& g, double t, int n_panels) {
    if (n_panels < 1) throw std::invalid_argument("time_quadrature: need at least one panel");
    if (t == 0.0) return 0.0;
    // 4-point Gauss-Legendre on [-1,1]
    static const double xg[4] = {-0.8611363115940526, -0.3399810435848563,
                                 0.3399810435848563, 0.8611363115940526};
    static const double wg[4] = {0.3478548451374538, 0.6521451548625461,
                                 0.6521451548625461, 0.3478548451374538};
    const double h = t / n_panels;
    cplx acc = 0.0;
    for (int p = 0; p < n_panels; ++p) {
        const double a = p * h;
        for (int i = 0; i < 4; ++i)
            acc += wg[i] * g(a + 0.5 * h * (xg[i] + 1.0));
    }
    return acc * (0.5 * h);
}

} // namespace qpde
