#include "qpde/solvers.hpp"

#include <cmath>
#include <iomanip>
#include <sstream>

namespace qpde {

Forcing::Forcing() : kind_(Kind::zero) {}
Forcing::Forcing(std::function<cplx(double, double)> f)
    : kind_(Kind::callable), fn_(std::move(f)) {}
Forcing::Forcing(TimeIndexedFamily<SignedLatticeFunction> samples)
    : kind_(Kind::sampled), family_(std::move(samples)) {}
Forcing::Forcing(SignedLatticeFunction space, std::function<double(double)> time)
    : kind_(Kind::separable), space_(std::move(space)), time_(std::move(time)) {}

double Forcing::interpolation_error_hint() const {
    if (kind_ != Kind::sampled) return 0.0;
    const auto& fam = *family_;
    if (fam.grid.size() < 3) return 0.0;
    const double h = fam.grid.step();
    double worst = 0.0;
    for (int i = 1; i + 1 < fam.grid.size(); ++i) {
        const auto& a = fam.samples[i - 1];
        const auto& b = fam.samples[i];
        const auto& c = fam.samples[i + 1];
        for (size_t v = 0; v < b.pos.size(); ++v) {
            worst = std::max(worst, std::abs(a.pos[v] - 2.0 * b.pos[v] + c.pos[v]));
            worst = std::max(worst, std::abs(a.neg[v] - 2.0 * b.neg[v] + c.neg[v]));
        }
    }
    return worst / 8.0; // h^2/8 * |f''| with f'' ~ second difference / h^2
}

SignedLatticeFunction Forcing::profile(double t, const LatticeSpec& spec) const {
    SignedLatticeFunction out(spec);
    if (kind_ == Kind::zero) return out;
    if (kind_ == Kind::callable) {
        for (int k = spec.k_min; k <= spec.k_max; ++k) {
            const double x = spec.point(k);
            out.at_pos(k) = fn_(t, x);
            out.at_neg(k) = fn_(t, -x);
        }
        out.check_finite();
        return out;
    }
    if (kind_ == Kind::separable) {
        if (!(space_->spec == spec))
            throw std::invalid_argument("Forcing: space profile lives on another lattice");
        const double w = time_(t);
        out = *space_;
        for (auto& v : out.pos) v *= w;
        for (auto& v : out.neg) v *= w;
        return out;
    }
    const auto& fam = *family_;
    if (!(fam.samples[0].spec == spec))
        throw std::invalid_argument("Forcing: sample family lives on another lattice");
    const auto& ns = fam.grid.nodes;
    if (t <= ns.front()) return fam.samples.front();
    if (t >= ns.back()) return fam.samples.back();
    size_t i = 1;
    while (ns[i] < t) ++i;
    const double w = (t - ns[i - 1]) / (ns[i] - ns[i - 1]);
    const auto& a = fam.samples[i - 1];
    const auto& b = fam.samples[i];
    for (size_t v = 0; v < out.pos.size(); ++v) {
        out.pos[v] = (1.0 - w) * a.pos[v] + w * b.pos[v];
        out.neg[v] = (1.0 - w) * a.neg[v] + w * b.neg[v];
    }
    return out;
}

HeatProblem::HeatProblem(double m_, SignedLatticeFunction phi_, Forcing f, double T_)
    : m(m_), phi(std::move(phi_)), forcing(std::move(f)), T(T_) {
    if (!(m > 0.0)) throw std::invalid_argument("HeatProblem: m must be positive");
    if (!(T > 0.0)) throw std::invalid_argument("HeatProblem: T must be positive");
}

WaveProblem::WaveProblem(double b_, double m_, SignedLatticeFunction phi_,
                         SignedLatticeFunction psi_, double T_)
    : b(b_), m(m_), phi(std::move(phi_)), psi(std::move(psi_)), T(T_) {
    if (!(b > 0.0)) throw std::invalid_argument("WaveProblem: b must be positive");
    if (!(m > 0.0)) throw std::invalid_argument("WaveProblem: m must be positive");
    if (!(b * b < 4.0 * m))
        throw std::invalid_argument("WaveProblem: requires b^2 < 4m");
    if (!(T > 0.0)) throw std::invalid_argument("WaveProblem: T must be positive");
    if (!(phi.spec == psi.spec))
        throw std::invalid_argument("WaveProblem: phi and psi must share one lattice");
}

ForcedWaveProblem::ForcedWaveProblem(double b_, double m_, Forcing f, double T_)
    : b(b_), m(m_), forcing(std::move(f)), T(T_) {
    if (!(b > 0.0)) throw std::invalid_argument("ForcedWaveProblem: b must be positive");
    if (!(m > 0.0)) throw std::invalid_argument("ForcedWaveProblem: m must be positive");
    if (!(b * b < 4.0 * m))
        throw std::invalid_argument("ForcedWaveProblem: requires b^2 < 4m");
    if (!(T > 0.0)) throw std::invalid_argument("ForcedWaveProblem: T must be positive");
}

cplx sinhc_factor(cplx w, double d) {
    const cplx wd = w * d;
    if (std::abs(wd) < 1e-6) {
        const cplx wd2 = wd * wd;
        return d * (1.0 + wd2 / 24.0 + wd2 * wd2 / 1920.0);
    }
    return (std::exp(wd * 0.5) - std::exp(-wd * 0.5)) / w;
}

namespace {

std::string digest(std::initializer_list<double> params, const TransformConfig& cfg,
                   const TimeGrid& grid, const char* kind) {
    std::ostringstream os;
    os << kind << " q=" << cfg.spec.q.value() << " k=[" << cfg.spec.k_min << ','
       << cfg.spec.k_max << "] mode="
       << (cfg.mode == TransformMode::full_line ? "full" : "half") << " nodes="
       << grid.size() << " T=" << grid.T << " params=";
    for (double p : params) os << p << ';';
    os << " c_q=" << std::setprecision(17) << cfg.c_q;
    return os.str();
}

SolutionTrajectory assemble(const TimeGrid& grid, std::vector<SpectralFunction> spec_hist,
                            const TransformConfig& cfg, std::string prov) {
    std::vector<SignedLatticeFunction> phys;
    phys.reserve(spec_hist.size());
    for (const auto& g : spec_hist) phys.push_back(inverse(g, cfg));
    return {grid, TimeIndexedFamily<SpectralFunction>(grid, std::move(spec_hist)),
            TimeIndexedFamily<SignedLatticeFunction>(grid, std::move(phys)),
            std::move(prov)};
}

} // namespace

SolutionTrajectory solve_heat(const HeatProblem& p, const TimeGrid& grid,
                              const TransformConfig& cfg, int nq) {
    if (nq < 1) throw std::invalid_argument("solve_heat: nq must be >= 1");
    if (!(grid.T <= p.T + 1e-12))
        throw std::invalid_argument("solve_heat: grid exceeds the problem horizon");
    const LatticeSpec& s = p.phi.spec;
    const SpectralFunction phi_hat = forward(p.phi, cfg);
    const int N = s.size();

    std::vector<SpectralFunction> hist;
    hist.reserve(grid.size());
    for (double t : grid.nodes) {
        SpectralFunction u(s);
        std::vector<cplx> duh(N, 0.0);
        if (!p.forcing.is_zero() && t > 0.0) {
            // one forward transform per quadrature node, all frequencies at once
            static const double xg[4] = {-0.8611363115940526, -0.3399810435848563,
                                         0.3399810435848563, 0.8611363115940526};
            static const double wg[4] = {0.3478548451374538, 0.6521451548625461,
                                         0.6521451548625461, 0.3478548451374538};
            const double h = t / nq;
            for (int pnl = 0; pnl < nq; ++pnl)
                for (int i = 0; i < 4; ++i) {
                    const double tau = pnl * h + 0.5 * h * (xg[i] + 1.0);
                    const SpectralFunction fh = forward(p.forcing.profile(tau, s), cfg);
                    const double w = 0.5 * h * wg[i];
                    for (int j = 0; j < N; ++j) {
                        const double xi = s.point(s.k_min + j);
                        duh[j] += w * std::exp(-(t - tau) * (p.m + xi * xi)) * fh.values[j];
                    }
                }
        }
        for (int j = 0; j < N; ++j) {
            const double xi = s.point(s.k_min + j);
            u.values[j] = phi_hat.values[j] * std::exp(-t * (p.m + xi * xi)) + duh[j];
        }
        hist.push_back(std::move(u));
    }
    return assemble(grid, std::move(hist), cfg,
                    digest({p.m, double(nq)}, cfg, grid, "heat"));
}

SpectralCoefficients wave_coefficients(const WaveProblem& p, const TransformConfig& cfg) {
    const LatticeSpec& s = p.phi.spec;
    const SpectralFunction phi_hat = forward(p.phi, cfg);
    const SpectralFunction psi_hat = forward(p.psi, cfg);
    SpectralCoefficients c{{}, {}, {}, s};
    const int N = s.size();
    c.G1.resize(N);
    c.G2.resize(N);
    c.omega.resize(N);
    for (int j = 0; j < N; ++j) {
        const double xi = s.point(s.k_min + j);
        // radicand strictly negative under b^2 < 4m: omega = i sqrt(4(m+xi^2)-b^2)
        const cplx w = std::sqrt(cplx(p.b * p.b - 4.0 * (p.m + xi * xi), 0.0));
        c.omega[j] = w;
        const cplx ph = phi_hat.values[j], ps = psi_hat.values[j];
        c.G1[j] = (0.5 + p.b / (2.0 * w)) * ph + ps / w;
        c.G2[j] = (0.5 - p.b / (2.0 * w)) * ph - ps / w;
    }
    return c;
}

SolutionTrajectory solve_wave(const WaveProblem& p, const TimeGrid& grid,
                              const TransformConfig& cfg) {
    if (!(grid.T <= p.T + 1e-12))
        throw std::invalid_argument("solve_wave: grid exceeds the problem horizon");
    const LatticeSpec& s = p.phi.spec;
    const SpectralCoefficients co = wave_coefficients(p, cfg);
    const int N = s.size();

    std::vector<SpectralFunction> hist;
    hist.reserve(grid.size());
    for (double t : grid.nodes) {
        SpectralFunction u(s);
        for (int j = 0; j < N; ++j) {
            const cplx w = co.omega[j];
            u.values[j] = co.G1[j] * std::exp((-p.b * 0.5) * t + w * (0.5 * t)) +
                          co.G2[j] * std::exp((-p.b * 0.5) * t - w * (0.5 * t));
        }
        hist.push_back(std::move(u));
    }
    return assemble(grid, std::move(hist), cfg,
                    digest({p.b, p.m}, cfg, grid, "wave"));
}

WaveKernels wave_kernels(double t, const WaveProblem& p, const TransformConfig& cfg) {
    const LatticeSpec s = p.phi.spec;
    const double q = s.q.value();
    const double piq = pi_q(s.q);
    const double pref_phi = std::exp(-p.b * t / 2.0) / (8.0 * piq * piq);
    const double pref_psi = std::exp(-p.b * t / 2.0) / (4.0 * piq * piq);
    const int N = s.size();

    // K(t, q^j) and the sinhc factor, both real under b^2 < 4m.
    auto Kfac = std::make_shared<std::vector<double>>(N);
    auto Sfac = std::make_shared<std::vector<double>>(N);
    for (int j = 0; j < N; ++j) {
        const double xi = s.point(s.k_min + j);
        const cplx w = std::sqrt(cplx(p.b * p.b - 4.0 * (p.m + xi * xi), 0.0));
        const cplx sh = sinhc_factor(w, t);
        const cplx kf = std::exp(w * (0.5 * t)) + std::exp(-w * (0.5 * t)) + p.b * sh;
        (*Kfac)[j] = kf.real();
        (*Sfac)[j] = sh.real();
    }

    auto kernel = [s, q, cfg](std::shared_ptr<std::vector<double>> fac, double pref) {
        return [s, q, cfg, fac, pref](SignedPoint x, SignedPoint y) -> double {
            const KernelTable& K = *cfg.kernel;
            double acc = 0.0;
            for (int j = s.k_min; j <= s.k_max; ++j) {
                const cplx ex = K.at(x.k + j);
                const cplx ey = K.at(y.k + j);
                // e_{q^2}(-i xi y) e_{q^2}(i xi x) at xi = q^j, plus the
                // Hermitian mirror frequency (-xi), i.e. twice the real part
                const cplx exs = x.sign > 0 ? ex : std::conj(ex);
                const cplx eys = y.sign > 0 ? std::conj(ey) : ey;
                acc += s.point(j) * (*fac)[s.index(j)] * 2.0 * std::real(eys * exs);
            }
            return pref * (1.0 - q) * acc;
        };
    };
    return {kernel(Kfac, pref_phi), kernel(Sfac, pref_psi)};
}

SignedLatticeFunction wave_kernel_path(double t, const WaveProblem& p,
                                       const TransformConfig& cfg) {
    const LatticeSpec& s = p.phi.spec;
    const double q = s.q.value();
    const WaveKernels wk = wave_kernels(t, p, cfg);
    SignedLatticeFunction u(s);
    for (int k = s.k_min; k <= s.k_max; ++k) {
        for (int sx : {+1, -1}) {
            double acc = 0.0;
            for (int ky = s.k_min; ky <= s.k_max; ++ky) {
                const double w = (1.0 - q) * s.point(ky);
                for (int sy : {+1, -1}) {
                    const cplx phv = sy > 0 ? p.phi.at_pos(ky) : p.phi.at_neg(ky);
                    const cplx psv = sy > 0 ? p.psi.at_pos(ky) : p.psi.at_neg(ky);
                    acc += w * (wk.Phi({k, sx}, {ky, sy}) * phv.real() +
                                wk.Psi({k, sx}, {ky, sy}) * psv.real());
                }
            }
            (sx > 0 ? u.at_pos(k) : u.at_neg(k)) = acc;
        }
    }
    return u;
}

SolutionTrajectory solve_forced_wave(const ForcedWaveProblem& p, const TimeGrid& grid,
                                     const TransformConfig& cfg, int nq) {
    if (nq < 1) throw std::invalid_argument("solve_forced_wave: nq must be >= 1");
    if (!(grid.T <= p.T + 1e-12))
        throw std::invalid_argument("solve_forced_wave: grid exceeds the problem horizon");
    const LatticeSpec& s = cfg.spec;
    const int N = s.size();

    std::vector<cplx> omega(N);
    for (int j = 0; j < N; ++j) {
        const double xi = s.point(s.k_min + j);
        omega[j] = std::sqrt(cplx(p.b * p.b - 4.0 * (p.m + xi * xi), 0.0));
    }

    static const double xg[4] = {-0.8611363115940526, -0.3399810435848563,
                                 0.3399810435848563, 0.8611363115940526};
    static const double wg[4] = {0.3478548451374538, 0.6521451548625461,
                                 0.6521451548625461, 0.3478548451374538};

    std::vector<SpectralFunction> hist;
    hist.reserve(grid.size());
    for (double t : grid.nodes) {
        SpectralFunction u(s);
        if (!p.forcing.is_zero() && t > 0.0) {
            const double h = t / nq;
            for (int pnl = 0; pnl < nq; ++pnl)
                for (int i = 0; i < 4; ++i) {
                    const double tau = pnl * h + 0.5 * h * (xg[i] + 1.0);
                    const SpectralFunction fh = forward(p.forcing.profile(tau, s), cfg);
                    const double w = 0.5 * h * wg[i];
                    const double d = t - tau;
                    for (int j = 0; j < N; ++j) {
                        // [e^{s1 d} - e^{s2 d}]/omega = e^{-b d/2} sinhc
                        const cplx g = std::exp(-p.b * d * 0.5) * sinhc_factor(omega[j], d);
                        u.values[j] += w * g * fh.values[j];
                    }
                }
        }
        hist.push_back(std::move(u));
    }
    return assemble(grid, std::move(hist), cfg,
                    digest({p.b, p.m, double(nq)}, cfg, grid, "forced-wave"));
}

double imaginary_residue(const SolutionTrajectory& traj) {
    double worst_im = 0.0, scale = 0.0;
    for (const auto& u : traj.physical.samples)
        for (size_t v = 0; v < u.pos.size(); ++v) {
            worst_im = std::max({worst_im, std::abs(u.pos[v].imag()), std::abs(u.neg[v].imag())});
            scale = std::max({scale, std::abs(u.pos[v]), std::abs(u.neg[v])});
        }
    return scale == 0.0 ? 0.0 : worst_im / scale;
}

std::string solution_to_csv(const SolutionTrajectory& traj) {
    std::ostringstream os;
    os << "t,k,sign,x,re_u,im_u\n";
    os << std::scientific << std::setprecision(16);
    for (int i = 0; i < traj.grid.size(); ++i) {
        const double t = traj.grid.nodes[i];
        const auto& u = traj.physical.samples[i];
        const LatticeSpec& s = u.spec;
        for (int k = s.k_min; k <= s.k_max; ++k) {
            const double x = s.point(k);
            os << t << ',' << k << ",+1," << x << ',' << u.at_pos(k).real() << ','
               << u.at_pos(k).imag() << '\n';
            os << t << ',' << k << ",-1," << -x << ',' << u.at_neg(k).real() << ','
               << u.at_neg(k).imag() << '\n';
        }
    }
    return os.str();
}

} // namespace qpde
