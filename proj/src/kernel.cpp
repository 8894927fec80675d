#include "qpde/kernel.hpp"
#include "qpde/detail/bigfloat.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <iomanip>

namespace qpde {

using detail::bigfloat;
using detail::PrecisionGuard;

namespace {

// log10 scan of the series term magnitudes: returns (max log10 |term|,
// term count to reach tail < 10^{log_tail_target}).
struct TermScan {
    double max_log10;
    int terms;
};

TermScan scan_terms(double z, double q, bool odd, double log_tail_target) {
    const double lz = std::log10(std::abs(z));
    const double lq = std::log10(q);
    double lbracket_fact = 0.0; // log10 [n]_q! accumulated
    double max_log = odd ? lz : 0.0;
    int n = 0; // factorial index already accumulated
    int k = 0;
    while (true) {
        const int deg = odd ? 2 * k + 1 : 2 * k;
        while (n < deg) {
            ++n;
            lbracket_fact += std::log10((1.0 - std::pow(q, n)) / (1.0 - q));
        }
        const double lt = k * (k + 1) * lq + deg * lz - lbracket_fact;
        max_log = std::max(max_log, lt);
        if (lt < log_tail_target && k > 2) return {max_log, k + 1};
        ++k;
        if (k > 100000) return {max_log, k};
    }
}

// One series summation in the current bigfloat precision.
// Terms are generated by the exact ratio recurrence.
bigfloat sum_series_hp(const bigfloat& z, const bigfloat& q, bool odd, int terms) {
    const bigfloat z2 = z * z;
    const bigfloat one(1);
    bigfloat term = odd ? z : one;
    bigfloat acc = term;
    for (int k = 0; k + 1 < terms; ++k) {
        // ratio t_{k+1}/t_k = -q^{2k+2} z^2 / ([deg+1]_q [deg+2]_q)
        const int deg = odd ? 2 * k + 1 : 2 * k;
        const bigfloat b1 = (one - pow(q, deg + 1)) / (one - q);
        const bigfloat b2 = (one - pow(q, deg + 2)) / (one - q);
        term *= -pow(q, 2 * k + 2) * z2 / (b1 * b2);
        acc += term;
    }
    return acc;
}

SeriesResult series_eval(double z, QParam qp, double tol, bool odd) {
    if (!(tol > 0.0)) throw std::invalid_argument("series tolerance must be positive");
    const double q = qp.value();
    if (z == 0.0) return {odd ? 0.0 : 1.0, odd ? 0.0 : 1.0, 0.0};

    const double log_target = std::log10(tol) - 3.0;
    const TermScan scan = scan_terms(z, q, odd, log_target);
    const double max_term = std::pow(10.0, scan.max_log10);

    // Working digits so that rounding at the cancellation peak stays under tol.
    const double need = scan.max_log10 - std::log10(tol) + 10.0;
    if (need > 50000.0)
        throw PrecisionError("series: requested tolerance needs more than 50000 digits");

    if (need < 14.0) {
        // Plain double summation is safe.
        double term = odd ? z : 1.0;
        double acc = term;
        const double z2 = z * z;
        for (int k = 0; k + 1 < scan.terms; ++k) {
            const int deg = odd ? 2 * k + 1 : 2 * k;
            const double b1 = (1.0 - std::pow(q, deg + 1)) / (1.0 - q);
            const double b2 = (1.0 - std::pow(q, deg + 2)) / (1.0 - q);
            term *= -std::pow(q, 2 * k + 2) * z2 / (b1 * b2);
            acc += term;
        }
        const double err = max_term * 1e-15 * scan.terms + std::pow(10.0, log_target);
        return {acc, max_term, err};
    }

    const unsigned digits = static_cast<unsigned>(std::ceil(need)) + 10;
    PrecisionGuard guard(digits);
    const bigfloat r = sum_series_hp(bigfloat(z), bigfloat(q), odd, scan.terms);
    const double err = std::pow(10.0, scan.max_log10 - static_cast<double>(digits) + 2.0) +
                       std::pow(10.0, log_target);
    return {static_cast<double>(r), max_term, err};
}

} // namespace

SeriesResult cos_q2(double z, QParam q, double tol) { return series_eval(z, q, tol, false); }
SeriesResult sin_q2(double z, QParam q, double tol) { return series_eval(z, q, tol, true); }

cplx e_q2_imag(double x, QParam q, double tol) {
    const bool neg = x < 0.0;
    const double ax = std::abs(x);
    const SeriesResult c = cos_q2(ax, q, tol);
    const SeriesResult s = sin_q2(ax, q, tol);
    return {c.value, neg ? -s.value : s.value};
}

// ---------------------------------------------------------------------------

struct KernelTable::HighPrec {
    std::vector<bigfloat> c, s; // index m - m_min
};

KernelTable::KernelTable(const LatticeSpec& s) : spec_(s) {}
KernelTable::KernelTable(KernelTable&&) noexcept = default;
KernelTable& KernelTable::operator=(KernelTable&&) noexcept = default;
KernelTable::~KernelTable() = default;

cplx KernelTable::at(int m) const {
    if (!covers(m)) throw std::out_of_range("KernelTable: index sum outside table");
    return values_[m - m_min_];
}

double KernelTable::err(int m) const {
    if (!covers(m)) throw std::out_of_range("KernelTable: index sum outside table");
    return err_[m - m_min_];
}

std::string KernelTable::to_csv() const {
    std::ostringstream os;
    os << "m,argument,re,im,certified_error\n";
    os << std::scientific << std::setprecision(16);
    for (int m = m_min_; m <= m_max_; ++m) {
        const cplx v = values_[m - m_min_];
        os << m << ',' << std::pow(spec_.q.value(), m) << ',' << v.real() << ','
           << v.imag() << ',' << err_[m - m_min_] << '\n';
    }
    return os.str();
}

double KernelTable::eigen_residual_hp(int j) const {
    PrecisionGuard guard(digits_);
    const bigfloat q(spec_.q.value());
    const bigfloat one(1);
    const bigfloat lam = pow(q, j);

    // f(sigma q^k) = e_{q^2}(i lam sigma q^k): even part c_{k+j}, odd part i s_{k+j}.
    // Apply the five-point formula twice on the even/odd split:
    //   D(even c)(x) = [c(q^{-1}x) - c(x)] / (x(1-q))   (odd result)
    //   D(odd  s)(x) = [s(x) - s(qx)] / (x(1-q))        (even result)
    // so D f = D(c) + i D(s), and D^2 f likewise.
    auto cv = [&](int m) -> const bigfloat& { return hp_->c[m - m_min_]; };
    auto sv = [&](int m) -> const bigfloat& { return hp_->s[m - m_min_]; };

    double worst = 0.0;
    for (int k = spec_.k_min; k <= spec_.k_max; ++k) {
        const int m = k + j;
        if (m - 2 < m_min_ || m + 2 > m_max_) continue;
        const bigfloat x = pow(q, k);
        // first application at arguments q^{k-1}, q^k, q^{k+1}
        bigfloat dc[3], ds[3];
        for (int o = -1; o <= 1; ++o) {
            const bigfloat xo = pow(q, k + o);
            dc[o + 1] = (cv(m + o - 1) - cv(m + o)) / (xo * (one - q)); // odd
            ds[o + 1] = (sv(m + o) - sv(m + o + 1)) / (xo * (one - q)); // even
        }
        // second application at x = q^k:
        // odd function g: D g(x) = [g(x) - g(qx)] / (x(1-q)); g = dc (odd)
        const bigfloat d2_from_c = (dc[1] - dc[2]) / (x * (one - q));
        // even function h: D h(x) = [h(q^{-1}x) - h(x)] / (x(1-q)); h = ds (even)
        const bigfloat d2_from_s = (ds[0] - ds[1]) / (x * (one - q));
        // D^2 f = d2_from_c + i * d2_from_s ; target -lam^2 (c + i s)
        const bigfloat tre = -lam * lam * cv(m);
        const bigfloat tim = -lam * lam * sv(m);
        const bigfloat er = d2_from_c - tre;
        const bigfloat ei = d2_from_s - tim;
        const bigfloat resid = sqrt((er * er + ei * ei) / (tre * tre + tim * tim));
        double r = static_cast<double>(resid);
        if (r == 0.0 && resid != 0) r = 1e-320; // below double range
        worst = std::max(worst, r);
    }
    return worst;
}

KernelTable build_kernel_table(const LatticeSpec& spec, double tol, unsigned digits) {
    if (!(tol > 0.0)) throw std::invalid_argument("build_kernel_table: tol must be positive");
    const double q = spec.q.value();
    const int m_lo = 2 * spec.k_min - 4;
    const int m_hi = 2 * spec.k_max + 4;
    const int M = std::max(0, -m_lo);

    // Cancellation at the deepest argument and recurrence error growth are
    // both of order q^{-M^2}; budget for the product of the two.
    const double lq10 = std::log10(1.0 / q);
    unsigned est = static_cast<unsigned>(std::ceil(2.0 * (double(M) * M + M) * lq10)) + 60;
    unsigned d = std::max({digits == 0 ? 0u : digits, 60u, digits == 0 ? est : 0u});

    KernelTable table(spec);
    table.m_min_ = m_lo;
    table.m_max_ = m_hi;

    const int n_entries = m_hi - m_lo + 1;
    for (int attempt = 0; attempt < 4; ++attempt) {
        PrecisionGuard guard(d);
        const bigfloat qb(q);
        const bigfloat one(1);
        const double round_log = -static_cast<double>(d) + 2.0;
        // Bounds below double's subnormal range are clamped up to this floor;
        // a clamped-up bound is still a valid bound.
        auto to_err = [round_log](double scaled) {
            const double lg = std::log10(scaled) + round_log;
            return lg < -320.0 ? 1e-320 : std::pow(10.0, lg);
        };

        std::vector<bigfloat> cs(n_entries), ss(n_entries);
        std::vector<double> err(n_entries, 0.0);
        double max_cancel = 0.0;

        // Direct series at m >= 0 (arguments <= 1: no cancellation to speak of).
        for (int m = m_hi; m >= 0; --m) {
            const double z = std::pow(q, m);
            const TermScan sc_c = scan_terms(z, q, false, -double(d) + 5.0);
            const TermScan sc_s = scan_terms(z, q, true, -double(d) + 5.0);
            const bigfloat zb = pow(qb, m);
            cs[m - m_lo] = sum_series_hp(zb, qb, false, sc_c.terms);
            ss[m - m_lo] = sum_series_hp(zb, qb, true, sc_s.terms);
            err[m - m_lo] = to_err(10.0);
        }

        // Outward recurrence for m < 0, marched jointly with an error bound.
        // dc/ds_ are tracked in units of the base rounding 10^round_log so
        // they never underflow.
        double dc = 10.0;
        double ds_ = 10.0;
        for (int m = -1; m >= m_lo; --m) {
            const bigfloat u = pow(qb, m + 1); // previous argument
            const bigfloat a = u * (one - qb);
            const bigfloat& c_prev = cs[m + 1 - m_lo];
            const bigfloat& s_prev = ss[m + 1 - m_lo];
            bigfloat c_new = c_prev - a * s_prev;
            bigfloat s_new = s_prev + a / qb * c_new;
            cs[m - m_lo] = c_new;
            ss[m - m_lo] = s_new;
            const double au = static_cast<double>(a);
            const double mag = std::max(std::abs(static_cast<double>(c_new)),
                                        std::abs(static_cast<double>(s_new)));
            const double ulp = std::max(mag, 1.0);
            dc = dc + au * ds_ + ulp;
            ds_ = ds_ + (au / q) * dc + ulp;
            err[m - m_lo] = to_err(std::max(dc, ds_));
            max_cancel = std::max(max_cancel, std::log10(std::max(au, 1.0)));
        }
        // cancellation indicator: direct-series peak at the deepest argument
        if (m_lo < 0)
            max_cancel = scan_terms(std::pow(q, m_lo), q, false, 0.0).max_log10;

        bool ok = true;
        for (int m = m_lo; m <= m_hi; ++m) {
            const double mag = std::hypot(static_cast<double>(cs[m - m_lo]),
                                          static_cast<double>(ss[m - m_lo]));
            if (err[m - m_lo] > tol * std::max(1.0, mag)) { ok = false; break; }
        }
        if (!ok && attempt < 3) {
            d *= 2;
            continue;
        }
        if (!ok)
            throw PrecisionError("build_kernel_table: precision budget exhausted before "
                                 "certifying the requested range");

        table.values_.resize(n_entries);
        table.err_ = std::move(err);
        for (int i = 0; i < n_entries; ++i)
            table.values_[i] = {static_cast<double>(cs[i]), static_cast<double>(ss[i])};
        table.digits_ = d;
        table.max_cancel_log10_ = max_cancel;
        table.hp_ = std::make_unique<KernelTable::HighPrec>();
        table.hp_->c = std::move(cs);
        table.hp_->s = std::move(ss);
        break;
    }
    return table;
}

} // namespace qpde
