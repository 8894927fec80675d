#include "qpde/fourier.hpp"
#include "qpde/quadrature.hpp"
#include "qpde/rubin.hpp"

#include <fftw3.h>

#include <cmath>
#include <iomanip>
#include <limits>
#include <sstream>

namespace qpde {

namespace {

// Forward sum with an explicit frequency window [j_min, j_max].
SpectralFunction forward_window(const SignedLatticeFunction& f, int j_min, int j_max,
                                const TransformConfig& cfg) {
    const LatticeSpec& s = f.spec;
    const double q = s.q.value();
    const KernelTable& K = *cfg.kernel;
    if (!K.covers(s.k_min + j_min) || !K.covers(s.k_max + j_max))
        throw std::out_of_range("forward: kernel table does not cover all index sums");
    SpectralFunction out(LatticeSpec(s.q, j_min, j_max));
    const double pref = cfg.c_q * (1.0 - q);
    for (int j = j_min; j <= j_max; ++j) {
        cplx acc = 0.0;
        for (int k = s.k_min; k <= s.k_max; ++k) {
            const cplx ker = K.at(k + j); // e_{q^2}(+i q^{k+j})
            acc += s.point(k) * f.at_pos(k) * std::conj(ker);
            if (cfg.mode == TransformMode::full_line)
                acc += s.point(k) * f.at_neg(k) * ker;
        }
        out.at(j) = pref * acc;
    }
    return out;
}

} // namespace

SpectralFunction forward(const SignedLatticeFunction& f, const TransformConfig& cfg) {
    return forward_window(f, f.spec.k_min, f.spec.k_max, cfg);
}

SignedLatticeFunction inverse(const SpectralFunction& g, const TransformConfig& cfg) {
    const LatticeSpec& s = g.spec;
    const double q = s.q.value();
    const KernelTable& K = *cfg.kernel;
    if (!K.covers(2 * s.k_min) || !K.covers(2 * s.k_max))
        throw std::out_of_range("inverse: kernel table does not cover all index sums");
    SignedLatticeFunction out(s);
    const double pref = cfg.c_q * (1.0 - q);
    for (int k = s.k_min; k <= s.k_max; ++k) {
        cplx pos = 0.0, neg = 0.0;
        for (int j = s.k_min; j <= s.k_max; ++j) {
            const double w = s.point(j);
            const cplx ker = K.at(k + j);
            const cplx gj = g.at(j);
            if (cfg.mode == TransformMode::full_line) {
                // signed frequency lattice via the Hermitian rule g(-xi) = conj g(xi)
                pos += w * (gj * ker + std::conj(gj) * std::conj(ker));
                neg += w * (gj * std::conj(ker) + std::conj(gj) * ker);
            } else {
                pos += w * gj * ker;
                neg += w * gj * std::conj(ker);
            }
        }
        out.at_pos(k) = pref * pos;
        out.at_neg(k) = pref * neg;
    }
    return out;
}

namespace {

std::shared_ptr<const KernelTable> ensure_kernel(const LatticeSpec& spec,
                                                 std::shared_ptr<const KernelTable> kernel,
                                                 unsigned digits) {
    if (kernel) {
        if (!(kernel->spec() == spec))
            throw std::invalid_argument("transform config: kernel table built for another lattice");
        return kernel;
    }
    return std::make_shared<KernelTable>(build_kernel_table(spec, 1e-14, digits));
}

SignedLatticeFunction gaussian_probe(const LatticeSpec& spec, double a) {
    SignedLatticeFunction f(spec);
    for (int k = spec.k_min; k <= spec.k_max; ++k) {
        const double x = spec.point(k);
        f.at_pos(k) = std::exp(-a * x * x);
        f.at_neg(k) = f.at_pos(k); // even
    }
    return f;
}

double inner_over_norm(const SignedLatticeFunction& r, const SignedLatticeFunction& f) {
    // Re<r,f> / <f,f> with the signed-line Jackson weight.
    const LatticeSpec& s = f.spec;
    double num = 0.0, den = 0.0;
    for (int k = s.k_min; k <= s.k_max; ++k) {
        const double w = s.point(k);
        num += w * (std::real(r.at_pos(k) * std::conj(f.at_pos(k))) +
                    std::real(r.at_neg(k) * std::conj(f.at_neg(k))));
        den += w * (std::norm(f.at_pos(k)) + std::norm(f.at_neg(k)));
    }
    return num / den;
}

double rel_diff_full(const SignedLatticeFunction& r, const SignedLatticeFunction& f) {
    SignedLatticeFunction d(f.spec);
    for (size_t i = 0; i < d.pos.size(); ++i) {
        d.pos[i] = r.pos[i] - f.pos[i];
        d.neg[i] = r.neg[i] - f.neg[i];
    }
    return l2_norm_full(d) / l2_norm_full(f);
}

} // namespace

TransformConfig analytic_config(const LatticeSpec& spec, TransformMode mode,
                             std::shared_ptr<const KernelTable> kernel,
                             unsigned precision_digits) {
    const double analytic_c = 1.0 / (2.0 * pi_q(spec.q));
    return {spec, mode, analytic_c, analytic_c,
            std::numeric_limits<double>::quiet_NaN(),
            std::numeric_limits<double>::quiet_NaN(),
            ensure_kernel(spec, std::move(kernel), precision_digits)};
}

TransformConfig calibrate(const LatticeSpec& spec, TransformMode mode,
                          std::shared_ptr<const KernelTable> kernel,
                          unsigned precision_digits) {
    TransformConfig cfg = analytic_config(spec, mode, std::move(kernel), precision_digits);

    const double as[3] = {1.0, 2.0, 0.5};
    double scales[3];
    for (int i = 0; i < 3; ++i) {
        const SignedLatticeFunction f = gaussian_probe(spec, as[i]);
        const SignedLatticeFunction r = inverse(forward(f, cfg), cfg);
        scales[i] = inner_over_norm(r, f);
    }
    const double mean = (scales[0] + scales[1] + scales[2]) / 3.0;
    double spread = 0.0;
    for (double s : scales) spread = std::max(spread, std::abs(s - mean));
    if (!(mean > 0.0) || spread > 1e-6 * std::abs(mean)) {
        std::ostringstream os;
        os << "calibrate: probe family produced inconsistent round-trip scales: "
           << std::scientific << std::setprecision(6) << scales[0] << ", " << scales[1]
           << ", " << scales[2] << " (the forward/inverse pair in this mode does not "
           << "compose to a multiple of the identity)";
        throw CalibrationError(os.str());
    }

    cfg.raw_scale = mean;
    cfg.c_q = cfg.analytic_c_q / std::sqrt(mean);

    double worst = 0.0;
    for (double a : as) {
        const SignedLatticeFunction f = gaussian_probe(spec, a);
        worst = std::max(worst, rel_diff_full(inverse(forward(f, cfg), cfg), f));
    }
    cfg.calibration_residual = worst;
    if (worst > 1e-6) {
        std::ostringstream os;
        os << "calibrate: round trip is not a scalar multiple of the identity "
           << "(post-rescale probe residual " << std::scientific << std::setprecision(3)
           << worst << "); the forward/inverse pair in this mode does not invert";
        throw CalibrationError(os.str());
    }
    return cfg;
}

double parseval_residual(const SignedLatticeFunction& f, const TransformConfig& cfg) {
    const double nf = l2_norm(f);
    if (nf == 0.0) throw std::invalid_argument("parseval_residual: zero input rejected");
    const double ng = l2_norm(forward(f, cfg));
    return std::abs(ng - nf) / nf;
}

double diagonalization_residual(const SignedLatticeFunction& f, const TransformConfig& cfg) {
    const SignedLatticeFunction d2 = rubin_d2(f);
    const int j_min = d2.spec.k_min, j_max = d2.spec.k_max;
    const SpectralFunction a = forward_window(d2, j_min, j_max, cfg);
    const SpectralFunction b = forward_window(f, j_min, j_max, cfg);
    SpectralFunction num(a.spec), den(a.spec);
    for (int j = j_min; j <= j_max; ++j) {
        const double xi2 = b.spec.point(j) * b.spec.point(j);
        den.at(j) = xi2 * b.at(j);
        num.at(j) = a.at(j) + den.at(j);
    }
    const double nd = l2_norm(den);
    if (nd == 0.0) throw std::invalid_argument("diagonalization_residual: zero input rejected");
    return l2_norm(num) / nd;
}

SpectralFunction forward_structured(const SignedLatticeFunction& f, const TransformConfig& cfg) {
    const LatticeSpec& s = f.spec;
    const KernelTable& K = *cfg.kernel;
    const int N = s.size();
    if (!K.covers(2 * s.k_min) || !K.covers(2 * s.k_max)) return forward(f, cfg);

    // f_hat(j) = pref * sum_k a_k b_{k+j} is a correlation along m = k+j.
    // Realized as linear convolution of the reversed weight sequence with
    // the kernel sequence, via complex FFT (two passes: conj-kernel against
    // the positive samples, kernel against the negative samples).
    const int M = 2 * N - 1;          // m-range size
    const int L_min = N + M - 1;      // linear convolution length
    int L = 1;
    while (L < L_min) L <<= 1;

    std::vector<cplx> acc(N, 0.0);
    std::vector<std::complex<double>> A(L), B(L), C(L);
    fftw_plan plan_a = fftw_plan_dft_1d(L, reinterpret_cast<fftw_complex*>(A.data()),
                                        reinterpret_cast<fftw_complex*>(A.data()),
                                        FFTW_FORWARD, FFTW_ESTIMATE);
    fftw_plan plan_b = fftw_plan_dft_1d(L, reinterpret_cast<fftw_complex*>(B.data()),
                                        reinterpret_cast<fftw_complex*>(B.data()),
                                        FFTW_FORWARD, FFTW_ESTIMATE);
    fftw_plan plan_c = fftw_plan_dft_1d(L, reinterpret_cast<fftw_complex*>(C.data()),
                                        reinterpret_cast<fftw_complex*>(C.data()),
                                        FFTW_BACKWARD, FFTW_ESTIMATE);

    const int passes = cfg.mode == TransformMode::full_line ? 2 : 1;
    for (int pass = 0; pass < passes; ++pass) {
        std::fill(A.begin(), A.end(), 0.0);
        std::fill(B.begin(), B.end(), 0.0);
        for (int i = 0; i < N; ++i) {
            const int k = s.k_min + i;
            const cplx a = s.point(k) * (pass == 0 ? f.at_pos(k) : f.at_neg(k));
            A[N - 1 - i] = a; // reversed
        }
        for (int mi = 0; mi < M; ++mi) {
            const cplx ker = K.at(2 * s.k_min + mi);
            B[mi] = pass == 0 ? std::conj(ker) : ker;
        }
        fftw_execute(plan_a);
        fftw_execute(plan_b);
        for (int i = 0; i < L; ++i) C[i] = A[i] * B[i];
        fftw_execute(plan_c);
        for (int j = 0; j < N; ++j) acc[j] += C[j + N - 1] / double(L);
    }
    fftw_destroy_plan(plan_a);
    fftw_destroy_plan(plan_b);
    fftw_destroy_plan(plan_c);

    SpectralFunction out(s);
    const double pref = cfg.c_q * (1.0 - s.q.value());
    for (int j = 0; j < N; ++j) out.values[j] = pref * acc[j];
    return out;
}

std::string spectra_to_csv(const SpectralFunction& g) {
    std::ostringstream os;
    os << "j,xi,re,im\n";
    os << std::scientific << std::setprecision(16);
    for (int j = g.spec.k_min; j <= g.spec.k_max; ++j)
        os << j << ',' << g.spec.point(j) << ',' << g.at(j).real() << ','
           << g.at(j).imag() << '\n';
    return os.str();
}

} // namespace qpde
