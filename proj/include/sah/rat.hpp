/**
 * Exact rational scalars on top of GMP, plus small parsing/formatting helpers.
 */
#pragma once

#include <boost/multiprecision/gmp.hpp>
#include <stdexcept>
#include <string>

namespace sah {

using Int = boost::multiprecision::mpz_int;
using Rat = boost::multiprecision::mpq_rational;

/** Parse "n" or "n/d" into a canonical rational. */
inline Rat parse_rat(const std::string& s) {
    if (s.empty()) throw std::invalid_argument("empty rational literal");
    Rat r(s);
    // mpq string construction does not canonicalize; do it explicitly.
    mpq_canonicalize(r.backend().data());
    return r;
}

inline Int num(const Rat& r) { return boost::multiprecision::numerator(r); }
inline Int den(const Rat& r) { return boost::multiprecision::denominator(r); }

inline int sgn(const Rat& r) { return r.sign(); }
inline int sgn(const Int& z) { return z.sign(); }

inline Rat rat_abs(const Rat& r) { return r < 0 ? Rat(-r) : r; }

/** Floor of a rational as an integer. */
inline Int rat_floor(const Rat& r) {
    Int q = num(r) / den(r);
    if (r < 0 && q * den(r) != num(r)) --q;
    return q;
}

inline std::string to_string(const Rat& r) { return r.str(); }

/** Decimal approximation with the given number of fractional digits (round toward zero). */
inline std::string decimal_string(const Rat& r, unsigned digits = 6) {
    Int scale = 1;
    for (unsigned i = 0; i < digits; ++i) scale *= 10;
    Int scaled = num(r) * scale / den(r);
    bool neg = scaled < 0;
    Int a = neg ? Int(-scaled) : scaled;
    Int ip = a / scale, fp = a % scale;
    std::string f = fp.str();
    f.insert(f.begin(), digits - f.size(), '0');
    std::string out = (neg ? "-" : "") + ip.str();
    if (digits) out += "." + f;
    return out;
}

}  // namespace sah
