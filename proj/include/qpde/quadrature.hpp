#ifndef QPDE_QUADRATURE_HPP
#define QPDE_QUADRATURE_HPP

#include "qpde/lattice.hpp"

#include <functional>

namespace qpde {

/// Time nodes on [0,T], both endpoints included, strictly increasing.
struct TimeGrid {
    double T;
    std::vector<double> nodes;

    TimeGrid(double T_, std::vector<double> nodes_);
    static TimeGrid uniform(double T, int n_nodes);

    int size() const { return static_cast<int>(nodes.size()); }
    double step() const; // throws if the grid is not uniform
};

/// One spatial (or spectral) profile per time node.
template <typename X>
struct TimeIndexedFamily {
    TimeGrid grid;
    std::vector<X> samples; // samples.size() == grid.size()

    TimeIndexedFamily(TimeGrid g, std::vector<X> s)
        : grid(std::move(g)), samples(std::move(s)) {
        if (samples.size() != static_cast<size_t>(grid.size()))
            throw std::invalid_argument("TimeIndexedFamily: one sample per node required");
    }
};

struct QuadResult {
    cplx value;
    double last_term; // magnitude of the last included term (tail indicator)
};

/// (1-q) x sum_{k=0..K} q^k f(q^k x); the q-integral over [0,x] truncated at depth K.
QuadResult jackson_integral_finite(const std::function<cplx(double)>& f, double x,
                                   QParam q, int K);

struct ImproperQuadResult {
    cplx value;
    double term_low;  // |term| at k_max (small-x end)
    double term_high; // |term| at k_min (large-x end)
};

/// (1-q) sum_{k_min..k_max} q^k f(q^k); the improper q-integral truncated
/// to the lattice window, with both endpoint terms reported.
ImproperQuadResult jackson_integral_improper(const std::function<cplx(double)>& f,
                                             const LatticeSpec& spec);
ImproperQuadResult jackson_integral_improper(const SpectralFunction& f);

/// Positive-lattice L^2_q norm: (sum_k (1-q) q^k |f(q^k)|^2)^{1/2}.
double l2_norm(const SignedLatticeFunction& f);
double l2_norm(const SpectralFunction& f);
/// Full signed-line variant (both signs carry the Jackson weight).
double l2_norm_full(const SignedLatticeFunction& f);

/// (int_0^inf (1+xi^2)^s |u_hat|^2 d_q xi)^{1/2} on the frequency lattice.
double sobolev_norm(const SpectralFunction& u_hat, double s);

/// sum_{n=0..k} max_t ||d^n u / dt^n (t)|| with finite-difference time
/// derivatives (second order; one-sided at the endpoints). Requires a
/// uniform grid with at least 2k+1 nodes.
double ck_norm(const TimeIndexedFamily<SpectralFunction>& u, int k,
               const std::function<double(const SpectralFunction&)>& space_norm);

/// Composite Gauss-Legendre (4-point per panel) for int_0^t g(tau) dtau.
cplx time_quadrature(const std::function<cplx(double)>& g, double t, int n_panels);

} // namespace qpde

#endif
