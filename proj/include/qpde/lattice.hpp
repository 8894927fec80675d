#ifndef QPDE_LATTICE_HPP
#define QPDE_LATTICE_HPP

#include <cmath>
#include <complex>
#include <stdexcept>
#include <vector>

namespace qpde {

using cplx = std::complex<double>;

/// Deformation parameter, restricted to 0 < q < 1.
class QParam {
public:
    explicit QParam(double q) : q_(q) {
        if (!(q > 0.0 && q < 1.0))
            throw std::invalid_argument("QParam: q must satisfy 0 < q < 1");
    }
    double value() const { return q_; }

private:
    double q_;
};

/// Truncated geometric lattice {q^k : k_min <= k <= k_max}. Signed
/// functions live on the points +-q^k; k increasing means x decreasing.
struct LatticeSpec {
    QParam q;
    int k_min;
    int k_max;

    LatticeSpec(QParam q_, int kmin, int kmax) : q(q_), k_min(kmin), k_max(kmax) {
        if (k_min > k_max)
            throw std::invalid_argument("LatticeSpec: k_min must not exceed k_max");
    }

    int size() const { return k_max - k_min + 1; }
    int index(int k) const { return k - k_min; }
    double point(int k) const { return std::pow(q.value(), k); }

    bool operator==(const LatticeSpec& o) const {
        return q.value() == o.q.value() && k_min == o.k_min && k_max == o.k_max;
    }
};

/// q^k for k = k_min..k_max, in k order (strictly decreasing values).
std::vector<double> lattice_points(const LatticeSpec& spec);

/// Complex samples at +q^k (pos) and -q^k (neg), index k - k_min.
struct SignedLatticeFunction {
    LatticeSpec spec;
    std::vector<cplx> pos;
    std::vector<cplx> neg;

    explicit SignedLatticeFunction(const LatticeSpec& s)
        : spec(s), pos(s.size()), neg(s.size()) {}

    cplx& at_pos(int k) { return pos[spec.index(k)]; }
    cplx& at_neg(int k) { return neg[spec.index(k)]; }
    cplx at_pos(int k) const { return pos[spec.index(k)]; }
    cplx at_neg(int k) const { return neg[spec.index(k)]; }

    /// Throws if any sample is non-finite.
    void check_finite() const;
};

/// Complex samples on the positive frequency lattice xi = q^j.
struct SpectralFunction {
    LatticeSpec spec;
    std::vector<cplx> values;

    explicit SpectralFunction(const LatticeSpec& s) : spec(s), values(s.size()) {}

    cplx& at(int j) { return values[spec.index(j)]; }
    cplx at(int j) const { return values[spec.index(j)]; }
};

/// [alpha]_q = (1 - q^alpha) / (1 - q).
double q_bracket(double alpha, QParam q);

/// [n]_q! = prod_{i=1..n} [i]_q, empty product for n = 0.
double q_factorial(int n, QParam q);

/// Finite q-Pochhammer prod_{k=0..n-1} (1 - a q^k).
double q_pochhammer(double a, int n, QParam q);

/// Infinite product (a; q)_inf, truncated once |a q^k| < eps.
/// tail_bound is a rigorous bound on the dropped relative tail.
struct InfiniteProduct {
    double value;
    double tail_bound;
};
InfiniteProduct q_pochhammer_inf(double a, QParam q, double eps = 1e-30);

/// Gamma_q(x) = (q;q)_inf / (q^x;q)_inf * (1-q)^{1-x}. Throws
/// std::domain_error at the poles x = 0, -1, -2, ...
double q_gamma(double x, QParam q);

/// pi_q = Gamma_{q^2}(1/2) / sqrt(1+q) (the transform normalization constant).
double pi_q(QParam q);

} // namespace qpde

#endif
