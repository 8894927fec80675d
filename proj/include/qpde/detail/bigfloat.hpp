#ifndef QPDE_DETAIL_BIGFLOAT_HPP
#define QPDE_DETAIL_BIGFLOAT_HPP

#include <boost/multiprecision/mpfr.hpp>

namespace qpde::detail {

// Variable-precision real; precision is per-value, taken from the
// thread-local default at construction time.
using bigfloat = boost::multiprecision::mpfr_float;

// Scoped override of the default working precision (decimal digits).
class PrecisionGuard {
public:
    explicit PrecisionGuard(unsigned digits10)
        : saved_(bigfloat::default_precision()) {
        bigfloat::default_precision(digits10);
    }
    ~PrecisionGuard() { bigfloat::default_precision(saved_); }
    PrecisionGuard(const PrecisionGuard&) = delete;
    PrecisionGuard& operator=(const PrecisionGuard&) = delete;

private:
    unsigned saved_;
};

} // namespace qpde::detail

#endif
