#ifndef QPDE_VERIFICATION_HPP
#define QPDE_VERIFICATION_HPP

#include "qpde/solvers.hpp"

#include <string>
#include <vector>

namespace qpde {

struct CheckResult {
    std::string name;
    double measured;
    double tolerance;
    bool pass;
    double order;     // convergence-order estimate; NaN where not applicable
    std::string note; // free-form context (weights, windows, scales)
};

struct VerificationReport {
    std::vector<CheckResult> checks;

    void add(CheckResult c) { checks.push_back(std::move(c)); }
    void merge(const VerificationReport& other);
    bool all_pass() const;
    std::string to_json() const;
};

struct ResidualOptions {
    double ic_tol = 1e-6;       // initial-condition residual tolerance
    double order_lo = 1.8;      // accepted convergence-order window
    double order_hi = 2.2;
    double small_resid = 1e-10; // residual below this passes without an order fit
};

/// PDE residual u_t - D_q^2 u + m u - f at interior lattice points
/// (restricted to k <= conditioning_cutoff) and interior times, over a
/// refinement sequence of trajectories (coarse to fine, same problem).
/// Reports the finest residual norms, the fitted order, and the
/// initial-condition residual ||u(0) - phi|| / ||phi|| (which is what
/// catches multiplicative corruption of homogeneous solutions).
VerificationReport residual_heat_physical(const std::vector<SolutionTrajectory>& trajs,
                                          const HeatProblem& p,
                                          const ResidualOptions& opt = {});

/// Same for u_tt + b u_t + m u - D_q^2 u - f, with both Cauchy residuals:
/// ||u(0) - phi||/||phi|| and the order-2 finite-difference u_t(0) vs psi.
VerificationReport residual_wave_physical(const std::vector<SolutionTrajectory>& trajs,
                                          double b, double m,
                                          const SignedLatticeFunction& phi,
                                          const SignedLatticeFunction& psi,
                                          const Forcing& forcing,
                                          const ResidualOptions& opt = {});

/// A priori bounds at every node:
///   ||u(t)||^2 <= t int_0^t ||f(tau)||^2 dtau + e^{-2tm} ||phi||^2 + slack,
/// in the spectral L^2_q norm and in both weighted candidates for the
/// second-order bound: weight (1+xi^2)^2 (the Sobolev W^2_q reading) and
/// weight xi^2 (the printed display). slack = 1e-6 * rhs.
VerificationReport apriori_heat(const SolutionTrajectory& traj, const HeatProblem& p,
                                const TransformConfig& cfg, int nq = 8);

enum class ProblemKind { heat, wave, forced_wave };

/// Runs the solver with all data zero and asserts
/// max_t ||u(t)||_{L^2_q} <= 1e-12.
VerificationReport uniqueness_probe(ProblemKind kind, const LatticeSpec& spec,
                                    const TransformConfig& cfg);

/// Tabulates rubin_d vs the classical derivative for x^2, x^3, x^5 on a
/// fixed compact window and |e_{q^2}(ix) - e^{ix}| on (0,4], across the
/// given q values (increasing toward 1); reports the error-vs-(1-q)
/// decade ratios and monotonicity.
VerificationReport classical_limit_study(const std::vector<double>& qs);

/// Multiplies every field value by `factor` (detector-soundness probe).
SolutionTrajectory corrupt_trajectory(const SolutionTrajectory& traj, double factor);

} // namespace qpde

#endif
