#ifndef QPDE_KERNEL_HPP
#define QPDE_KERNEL_HPP

#include "qpde/lattice.hpp"

#include <memory>
#include <string>

namespace qpde {

/// Raised when a requested tolerance cannot be met within the precision budget.
class PrecisionError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Result of a controlled series summation. max_term is the largest
/// intermediate term magnitude (the cancellation indicator); err_bound
/// is a certified bound on the absolute error of value.
struct SeriesResult {
    double value;
    double max_term;
    double err_bound;
};

/// cos_{q^2}(z) = sum (-1)^k q^{k(k+1)} z^{2k} / [2k]_q!
SeriesResult cos_q2(double z, QParam q, double tol = 1e-14);

/// sin_{q^2}(z) = sum (-1)^k q^{k(k+1)} z^{2k+1} / [2k+1]_q!
SeriesResult sin_q2(double z, QParam q, double tol = 1e-14);

/// e_{q^2}(ix) = cos_{q^2}(x) + i sin_{q^2}(x). Conjugate symmetry in x
/// holds by construction (real series coefficients).
cplx e_q2_imag(double x, QParam q, double tol = 1e-14);

/// Tabulated kernel values e_{q^2}(i q^m) for every index sum m = k + j
/// reachable by the transform on a lattice window, plus margin for the
/// Rubin stencil. Small arguments (m >= 0) come from the direct series;
/// large arguments (m < 0) from the outward lattice recurrence
///   cos(q^{-1}u) = cos(u) - u(1-q) sin(u)
///   sin(q^{-1}u) = sin(u) + q^{-1}u(1-q) cos(q^{-1}u)
/// marched jointly in extended precision. Every entry carries a
/// certified absolute error bound.
class KernelTable {
public:
    /// e_{q^2}(i q^m); use conj() for the -i q^m argument.
    cplx at(int m) const;
    /// Certified absolute error bound of at(m).
    double err(int m) const;

    int m_min() const { return m_min_; }
    int m_max() const { return m_max_; }
    bool covers(int m) const { return m >= m_min_ && m <= m_max_; }

    const LatticeSpec& spec() const { return spec_; }
    unsigned working_digits() const { return digits_; }
    /// log10 of the largest intermediate magnitude met while building
    /// (the cancellation the direct series would have suffered).
    double max_cancellation_log10() const { return max_cancel_log10_; }

    /// Five-point Rubin eigen-residual evaluated in the table's extended
    /// precision: max over the window of
    ///   |D_q^2 e_{q^2}(i lambda .)(x) + lambda^2 e_{q^2}(i lambda x)| / |lambda^2 e(..)|
    /// for lambda = q^j. Runs on the high-precision values, so it tests
    /// the identity itself rather than double rounding.
    double eigen_residual_hp(int j) const;

    /// CSV rows: m,argument,re,im,certified_error
    std::string to_csv() const;

    KernelTable(KernelTable&&) noexcept;
    KernelTable& operator=(KernelTable&&) noexcept;
    ~KernelTable();

private:
    friend KernelTable build_kernel_table(const LatticeSpec&, double, unsigned);
    KernelTable(const LatticeSpec& s);

    LatticeSpec spec_;
    int m_min_ = 0, m_max_ = 0;
    std::vector<cplx> values_;
    std::vector<double> err_;
    unsigned digits_ = 0;
    double max_cancel_log10_ = 0.0;

    struct HighPrec; // extended-precision snapshot, kept for audit checks
    std::unique_ptr<HighPrec> hp_;
};

/// Builds the table over m in [2 k_min - 4, 2 k_max + 4]. Starts from
/// `digits` working digits (0 = automatic estimate) and escalates until
/// every certified bound satisfies err <= tol * max(1, |value|); throws
/// PrecisionError if the escalation cap is hit.
KernelTable build_kernel_table(const LatticeSpec& spec, double tol = 1e-14,
                               unsigned digits = 0);

} // namespace qpde

#endif
