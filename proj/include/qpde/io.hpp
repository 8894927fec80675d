#ifndef QPDE_IO_HPP
#define QPDE_IO_HPP

#include "qpde/fourier.hpp"

#include <map>
#include <string>

namespace qpde {

/// 17-significant-digit scientific formatting (round-trip safe for double).
std::string fmt_sci17(double v);

/// Writes content to path atomically (temp file in the same directory,
/// then rename).
void write_atomic(const std::string& path, const std::string& content);

/// Named analytic data families sampled on the signed lattice:
///   gaussian-bump      exp(-a x^2)                params: a (default 1)
///   indicator          1 at +-q^k0 (even)          params: k0 (default 0)
///   polynomial-window  x^n exp(-a x^2)             params: n (default 2), a (default 1)
///   kernel-sample      e_{q^2}(i q^j0 x)           params: j0 (default 0)
SignedLatticeFunction make_family(const std::string& name,
                                  const std::map<std::string, double>& params,
                                  const LatticeSpec& spec,
                                  const KernelTable* kernel = nullptr);

/// Band-limited test datum: spectrum exp(-1/(s(1-s))) on s = (j-j0)/(j1-j0),
/// zero outside (j0, j1); returned in physical space via the inverse
/// transform. Hard compact spectral support makes finite-difference
/// residual orders clean.
SignedLatticeFunction band_limited_bump(const TransformConfig& cfg, int j0, int j1);

/// Reads user data CSV (columns k,sign,re,im); missing lattice points are
/// zero, indices outside the spec are rejected.
SignedLatticeFunction read_lattice_csv(const std::string& path, const LatticeSpec& spec);

/// Reads a stored solution CSV (columns t,k,sign,x,re_u,im_u) back into a
/// time-indexed family on the given lattice.
std::pair<std::vector<double>, std::vector<SignedLatticeFunction>>
read_solution_csv(const std::string& path, const LatticeSpec& spec);

} // namespace qpde

#endif
