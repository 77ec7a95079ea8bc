#pragma once

#include <cstdint>
#include <string>
#include <gmpxx.h>

namespace oweil {

// Exact arbitrary-precision rational. All scalar values that leave the
// integer fast paths are held in this type; equality is always exact.
using Rational = mpq_class;
using BigInt = mpz_class;

inline Rational rational_from(long num, long den = 1) {
    Rational r(num, den);
    r.canonicalize();
    return r;
}

inline bool is_integer(const Rational& r) { return r.get_den() == 1; }

inline std::string to_string(const Rational& r) { return r.get_str(); }

inline double to_double(const Rational& r) { return r.get_d(); }

} // namespace oweil
