#ifndef QPDE_SOLVERS_HPP
#define QPDE_SOLVERS_HPP

#include "qpde/fourier.hpp"
#include "qpde/quadrature.hpp"

#include <functional>
#include <optional>
#include <string>

namespace qpde {

/// Forcing f(t, x) evaluated at signed lattice abscissae. Either a
/// callable (transformed on demand at quadrature nodes) or a time-indexed
/// sample family (interpolated linearly between its nodes).
class Forcing {
public:
    Forcing(); // identically zero
    explicit Forcing(std::function<cplx(double t, double x)> f);
    explicit Forcing(TimeIndexedFamily<SignedLatticeFunction> samples);
    /// Separable f(t, x) = time(t) * space(x), evaluated exactly.
    Forcing(SignedLatticeFunction space, std::function<double(double)> time);

    bool is_zero() const { return kind_ == Kind::zero; }
    /// Worst-case linear-interpolation gap h^2/8 * max second difference
    /// (0 for callables); reported, never hidden.
    double interpolation_error_hint() const;
    SignedLatticeFunction profile(double t, const LatticeSpec& spec) const;

private:
    enum class Kind { zero, callable, sampled, separable } kind_;
    std::function<cplx(double, double)> fn_;
    std::optional<TimeIndexedFamily<SignedLatticeFunction>> family_;
    std::optional<SignedLatticeFunction> space_;
    std::function<double(double)> time_;
};

struct HeatProblem {
    double m; // strictly positive
    SignedLatticeFunction phi;
    Forcing forcing;
    double T;

    HeatProblem(double m_, SignedLatticeFunction phi_, Forcing f, double T_);
};

struct WaveProblem {
    double b, m; // b > 0, m > 0, b^2 < 4m
    SignedLatticeFunction phi, psi;
    double T;

    WaveProblem(double b_, double m_, SignedLatticeFunction phi_,
                SignedLatticeFunction psi_, double T_);
};

struct ForcedWaveProblem {
    double b, m; // as WaveProblem; zero initial data implied
    Forcing forcing;
    double T;

    ForcedWaveProblem(double b_, double m_, Forcing f, double T_);
};

/// Per-frequency mode data of the homogeneous wave solution.
struct SpectralCoefficients {
    std::vector<cplx> G1, G2, omega; // omega = sqrt(b^2 - 4(m+xi^2)), principal branch
    LatticeSpec spec;
};

struct SolutionTrajectory {
    TimeGrid grid;
    TimeIndexedFamily<SpectralFunction> spectral;
    TimeIndexedFamily<SignedLatticeFunction> physical;
    std::string provenance; // problem/config digest and tolerances
};

/// u_hat(t,xi) = phi_hat e^{-t(m+xi^2)}
///             + int_0^t e^{-(t-tau)(m+xi^2)} f_hat(tau,xi) dtau,
/// Duhamel integral by composite Gauss-Legendre with nq panels; physical
/// field by inverse transform at every node.
SolutionTrajectory solve_heat(const HeatProblem& p, const TimeGrid& grid,
                              const TransformConfig& cfg, int nq = 8);

SpectralCoefficients wave_coefficients(const WaveProblem& p, const TransformConfig& cfg);

/// u_hat(t,xi) = G1 e^{(-b/2 + omega/2)t} + G2 e^{(-b/2 - omega/2)t} with
/// G1 = [1/2 + b/(2 omega)] phi_hat + psi_hat/omega,
/// G2 = [1/2 - b/(2 omega)] phi_hat - psi_hat/omega.
SolutionTrajectory solve_wave(const WaveProblem& p, const TimeGrid& grid,
                              const TransformConfig& cfg);

/// Physical-space propagators of the homogeneous wave problem:
///   Phi(t,x,y) = e^{-bt/2}/(8 pi_q^2) * int K(t,xi) e_{q^2}(-i xi y) e_{q^2}(i xi x) d_q xi
///   Psi(t,x,y) = e^{-bt/2}/(4 pi_q^2) * int (e^{wt/2}-e^{-wt/2})/w ... d_q xi
/// with K(t,xi) = e^{wt/2} + e^{-wt/2} + b (e^{wt/2} - e^{-wt/2})/w,
/// frequency integrals over the signed lattice (Hermitian sum). Points are
/// addressed as (k, sign).
struct SignedPoint {
    int k;
    int sign; // +1 or -1
};
struct WaveKernels {
    std::function<double(SignedPoint x, SignedPoint y)> Phi, Psi;
};
WaveKernels wave_kernels(double t, const WaveProblem& p, const TransformConfig& cfg);

/// u(t,x) = int Phi(t,x,y) phi(y) d_q y + int Psi(t,x,y) psi(y) d_q y with
/// signed-line Jackson integration in y; the O(N^2) audit path that must
/// agree with solve_wave's spectral path.
SignedLatticeFunction wave_kernel_path(double t, const WaveProblem& p,
                                       const TransformConfig& cfg);

/// u_hat(t,xi) = int_0^t f_hat(tau,xi)
///               [e^{(-b/2+w/2)(t-tau)} - e^{(-b/2-w/2)(t-tau)}]/w dtau.
SolutionTrajectory solve_forced_wave(const ForcedWaveProblem& p, const TimeGrid& grid,
                                     const TransformConfig& cfg, int nq = 8);

/// (e^{w d/2} - e^{-w d/2})/w, with the |w d| < 1e-6 removable-singularity
/// guard evaluated by series d(1 + (wd)^2/24 + (wd)^4/1920).
cplx sinhc_factor(cplx w, double d);

/// Max over nodes and points of |Im u| relative to max |u| (real data must
/// produce essentially real fields).
double imaginary_residue(const SolutionTrajectory& traj);

/// CSV rows: t,k,sign,x,re_u,im_u
std::string solution_to_csv(const SolutionTrajectory& traj);

} // namespace qpde

#endif
