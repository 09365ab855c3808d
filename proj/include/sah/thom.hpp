/**
 * Thom encodings: real algebraic numbers fixed by the sign vector of all
 * derivatives of a defining polynomial, and triangular encodings fixing a
 * point of R^i coordinate by coordinate. Thin, stable adapters over the
 * tower kernel: signs are exact, witness intervals refinable on demand.
 */
#pragma once

#include <vector>

#include "sah/formulas.hpp"
#include "sah/tower.hpp"

namespace sah {

/** One real root of `poly` (univariate in `var` over a triangular context),
    identified by the derivative sign vector per Thom's lemma. */
struct ThomEncoding {
    MPoly poly;              // the isolated polynomial
    int var = 0;             // its designated variable
    std::vector<int> signs;  // signs[m] = sign of the m-th derivative at the root
    AlgRoot root;            // refinable witness interval / kernel handle
};

/** Triangular Thom encoding: a point of R^i with coordinate j fixed as a
    Thom-encoded root over the previous coordinates. Owns the tower state. */
class TriThom {
  public:
    Tower tower;
    std::vector<ThomEncoding> coords;

    int size() const { return static_cast<int>(coords.size()); }

    /** Extend the point by one coordinate (tau.var must equal size()). */
    void extend(const ThomEncoding& tau);
    void drop_last();

    /** Rational witness box around the associated point. */
    std::vector<Ivl> box() const { return tower.point_box(); }
    /** Refine the witness box until every side is narrower than w. */
    void refine_box(const Rat& w);
};

/** One encoding per distinct real root of P(ass(ctx), X_i), sorted by value.
    Throws std::domain_error if the specialization is identically zero. */
std::vector<ThomEncoding> isolate_with_thom(const MPoly& P, TriThom& ctx);

/** Order of the associated values; EQ across different defining polynomials. */
Cmp thom_compare(ThomEncoding& a, ThomEncoding& b, TriThom& ctx);

/** Exact sign of Q at (ass(ctx), ass(tau)). */
int sign_at(const MPoly& Q, ThomEncoding& tau, TriThom& ctx);

/** The weak sign condition sigma-bar of the triangular system: conjunction of
    weak derivative-sign atoms; its realization in R^i is exactly {ass(T)}. */
Formula weak_thom_formula(const TriThom& T);

/** Same for a single encoding over a context (atoms in vars up to tau.var). */
Formula weak_thom_formula_for(const ThomEncoding& tau);

/** Exact truth of a closed formula at the tower point (all atom polynomials
    must involve only variables below the tower height). */
bool formula_holds_at(const Formula& f, Tower& t);

}  // namespace sah
