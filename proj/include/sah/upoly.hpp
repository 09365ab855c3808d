/**
 * Dense univariate polynomials over Q: Euclidean arithmetic, Sturm sequences,
 * certified real-root isolation with exact rational endpoints, and rational
 * root snapping. This is the base-field root kernel; roots over algebraic
 * towers are handled in tower.hpp.
 */
#pragma once

#include <optional>
#include <vector>

#include "sah/mpoly.hpp"
#include "sah/rat.hpp"

namespace sah {

struct UPoly {
    std::vector<Rat> c;  // c[i] = coefficient of x^i; trailing zeros trimmed

    UPoly() = default;
    explicit UPoly(std::vector<Rat> cs) : c(std::move(cs)) { trim(); }

    void trim();
    int degree() const { return static_cast<int>(c.size()) - 1; }
    bool is_zero() const { return c.empty(); }
    Rat eval(const Rat& x) const;
    UPoly derivative() const;
    UPoly operator+(const UPoly& o) const;
    UPoly operator-(const UPoly& o) const;
    UPoly operator*(const UPoly& o) const;
    UPoly operator*(const Rat& k) const;
    /** Remainder of field division. */
    UPoly rem(const UPoly& b) const;
    /** Primitive integer normalization (positive leading coefficient). */
    UPoly primitive() const;

    static UPoly from_mpoly(const MPoly& p, int var);
    MPoly to_mpoly(int nvars, int var) const;
};

UPoly upoly_gcd(UPoly a, UPoly b);
UPoly upoly_squarefree(const UPoly& p);

/** Sturm sequence (integer-primitive members; signs faithful). */
std::vector<UPoly> sturm_sequence(const UPoly& p);

/** Number of distinct real roots in (a, b]; requires p(a) != 0. */
int sturm_count(const std::vector<UPoly>& seq, const Rat& a, const Rat& b);
int count_real_roots(const UPoly& p);

/** An isolated real root: either exact rational, or a sign-change interval. */
struct RootIvl {
    Rat lo, hi;          // lo == hi for exact rational roots
    bool exact() const { return lo == hi; }
    Rat mid() const { return (lo + hi) / 2; }
};

/**
 * Isolating intervals for all distinct real roots of p, sorted increasingly.
 * Intervals are open with non-root rational endpoints and p changes sign
 * across each (isolation performed on the squarefree part). Rational roots
 * are snapped to exact values where cheap.
 */
std::vector<RootIvl> isolate_real_roots(const UPoly& p);

/** Simplest rational (smallest denominator) strictly inside (a, b). */
Rat simplest_rational_between(const Rat& a, const Rat& b);

}  // namespace sah
