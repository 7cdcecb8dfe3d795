#pragma once

#include <gmpxx.h>

#include <string>

#include "admcov/errors.hpp"

namespace admcov {

using Rational = mpq_class;
using Integer = mpz_class;

inline Rational make_rational(long num, long den = 1) {
    Rational q(num, den);
    q.canonicalize();
    return q;
}

// "num/den", or just "num" when the denominator is 1.
inline std::string to_string(const Rational& q) {
    if (q.get_den() == 1) return q.get_num().get_str();
    return q.get_num().get_str() + "/" + q.get_den().get_str();
}

inline Rational parse_rational(const std::string& s) {
    Rational q;
    if (s.empty() || q.set_str(s, 10) != 0) throw InputError("bad rational: " + s);
    if (q.get_den() == 0) throw InputError("zero denominator: " + s);
    q.canonicalize();
    return q;
}

inline Rational factorial(unsigned n) {
    Integer f;
    mpz_fac_ui(f.get_mpz_t(), n);
    return Rational(f);
}

}  // namespace admcov
