#ifndef QPDE_RUBIN_HPP
#define QPDE_RUBIN_HPP

#include "qpde/lattice.hpp"

#include <functional>

namespace qpde {

/// Five-point Rubin q-difference operator on signed lattice samples:
///   D_q f(x) = [f(q^-1 x) + f(-q^-1 x) - f(qx) + f(-qx) - 2 f(-x)] / (2x(1-q))
/// The output range shrinks by one index at each end (boundary policy:
/// shrink, never pad). Requires k_max - k_min >= 2.
SignedLatticeFunction rubin_d(const SignedLatticeFunction& f);

/// rubin_d applied twice; range shrinks by two at each end. Requires
/// k_max - k_min >= 4.
SignedLatticeFunction rubin_d2(const SignedLatticeFunction& f);

/// Same stencil for a pointwise-evaluable f (arguments +-q^{k_min-1} ..
/// +-q^{k_max+1} must be evaluable); full output range, no shrinkage.
/// The callable receives signed abscissae.
SignedLatticeFunction rubin_d_callable(const std::function<cplx(double)>& f,
                                       const LatticeSpec& spec);

/// Largest k for which the stencil's rounding noise ~ eps/q^{2k} stays a
/// factor `safety` below 1; residual norms in verification are restricted
/// to k <= conditioning_cutoff to avoid drowning in small-x noise.
int conditioning_cutoff(const LatticeSpec& spec, double safety = 1e9);

} // namespace qpde

#endif
