#include "qpde/rubin.hpp"

#include <cmath>
#include <limits>

namespace qpde {

namespace {

// Numerator of the five-point formula at +q^k / -q^k given neighbour samples.
inline cplx stencil_pos(const SignedLatticeFunction& f, int k) {
    return f.at_pos(k - 1) + f.at_neg(k - 1) - f.at_pos(k + 1) + f.at_neg(k + 1) -
           2.0 * f.at_neg(k);
}

inline cplx stencil_neg(const SignedLatticeFunction& f, int k) {
    return f.at_neg(k - 1) + f.at_pos(k - 1) - f.at_neg(k + 1) + f.at_pos(k + 1) -
           2.0 * f.at_pos(k);
}

} // namespace

SignedLatticeFunction rubin_d(const SignedLatticeFunction& f) {
    const LatticeSpec& s = f.spec;
    if (s.k_max - s.k_min < 2)
        throw std::invalid_argument("rubin_d: range too small (need k_max - k_min >= 2)");
    LatticeSpec out_spec(s.q, s.k_min + 1, s.k_max - 1);
    SignedLatticeFunction out(out_spec);
    const double omq = 1.0 - s.q.value();
    for (int k = out_spec.k_min; k <= out_spec.k_max; ++k) {
        const double x = s.point(k);
        out.at_pos(k) = stencil_pos(f, k) / (2.0 * x * omq);
        out.at_neg(k) = stencil_neg(f, k) / (2.0 * (-x) * omq);
    }
    return out;
}

SignedLatticeFunction rubin_d2(const SignedLatticeFunction& f) {
    if (f.spec.k_max - f.spec.k_min < 4)
        throw std::invalid_argument("rubin_d2: range too small (need k_max - k_min >= 4)");
    return rubin_d(rubin_d(f));
}

SignedLatticeFunction rubin_d_callable(const std::function<cplx(double)>& f,
                                       const LatticeSpec& spec) {
    // Sample one index beyond each end, apply the stencil, keep the full range.
    LatticeSpec wide(spec.q, spec.k_min - 1, spec.k_max + 1);
    SignedLatticeFunction samples(wide);
    for (int k = wide.k_min; k <= wide.k_max; ++k) {
        const double x = wide.point(k);
        samples.at_pos(k) = f(x);
        samples.at_neg(k) = f(-x);
    }
    samples.check_finite();
    return rubin_d(samples);
}

int conditioning_cutoff(const LatticeSpec& spec, double safety) {
    const double eps = std::numeric_limits<double>::epsilon();
    const double q = spec.q.value();
    int cut = spec.k_min - 1;
    for (int k = spec.k_min; k <= spec.k_max; ++k) {
        if (std::pow(q, 2 * k) >= safety * eps) cut = k;
    }
    return cut;
}

} // namespace qpde
