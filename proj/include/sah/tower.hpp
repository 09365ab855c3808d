/**
 * Triangular towers of real algebraic numbers with exact sign determination.
 *
 * A Tower fixes a point (v_0, ..., v_{h-1}): coordinate v_i is a root of an
 * anchor polynomial in variables x_0..x_i, isolated by a rational interval
 * across which the anchor changes sign (or pinned exactly when rational).
 *
 * Sign queries are answered by interval refinement; exact zero certification
 * uses dynamic evaluation in the quotient tower Q[x_0]/(m_0)[x_1]/(m_1)...:
 * an element is zero iff it fails to invert, and inversion failures split the
 * modulus via the discovered gcd factor, keeping the factor that contains our
 * root. Splitting is pure refinement (we track a single point), so no case
 * branching ever happens.
 *
 * Root isolation over a tower uses the derivative chain: roots of P^(m+1)
 * cut the line into intervals on which P^(m) is strictly monotone, so roots
 * of P^(m) are found by certified sign changes. This also yields Thom sign
 * vectors without any elimination-polynomial computation.
 */
#pragma once

#include <map>
#include <memory>
#include <optional>
#include <vector>

#include "sah/eps.hpp"
#include "sah/interval.hpp"
#include "sah/mpoly.hpp"
#include "sah/rat.hpp"

namespace sah {

/** Nested dense representative of an element of the quotient tower. */
struct Elem {
    Rat r;                 // payload at level 0
    std::vector<Elem> v;   // coefficients wrt x_{level-1} at level > 0
};

/** One isolated real root over a tower point (anchor changes sign across the interval). */
struct AlgRoot {
    MPoly anchor;                 // in vars x_0..x_var; sign-changing across (lo,hi)
    Rat lo, hi;                   // lo == hi: exact rational root
    int sign_lo = 0;              // sign of anchor at x=lo (0 when exact)
    std::map<int, int> dsigns;    // known derivative signs of the isolated polynomial

    bool exact() const { return lo == hi; }
    Rat mid() const { return (lo + hi) / 2; }
};

class Tower {
  public:
    struct Level {
        MPoly anchor;
        Rat lo, hi;
        int sign_at_lo = 0;        // sign of anchor at x=lo over the lower point
        bool mon_built = false;
        std::vector<Elem> mon;     // monic modulus coefficients (implicit leading 1)
    };

    std::vector<Level> levels;
    long split_epoch = 0;

    int height() const { return static_cast<int>(levels.size()); }

    /** Extend the point by a root of `anchor` in variable levels.size(). */
    void push_level(const MPoly& anchor, const Rat& lo, const Rat& hi);
    void push_level(const AlgRoot& r) { push_level(r.anchor, r.lo, r.hi); }
    void pop_level() { levels.pop_back(); }

    /** Halve the isolating interval of level i (no-op for exact levels). */
    void refine(int i);
    void refine_all();

    /** Current enclosing box of the first `height` coordinates. */
    std::vector<Ivl> point_box(int h) const;
    std::vector<Ivl> point_box() const { return point_box(height()); }

    /** Exact sign of g at the point; g must not involve vars >= h. */
    int sign_mpoly(const MPoly& g, int h);
    int sign_mpoly(const MPoly& g) { return sign_mpoly(g, height()); }

    /** Sign of g with the point temporarily extended by root r. */
    int sign_with_root(const MPoly& g, const AlgRoot& r);

    /** One bisection step on r's isolating interval (collapses exact roots). */
    void refine_root_step(AlgRoot& r);

    Tower clone() const;

    // -- quotient-tower element operations (exposed for the root kernel) --
    Elem to_elem(int lv, const MPoly& g);
    bool elem_is_zero(int lv, Elem e);

  private:
    void build_monic(int lv);  // modulus for level lv-1 (from its anchor), squarefree
    Elem e_zero(int lv) const;
    Elem e_const(int lv, const Rat& c) const;
    static bool e_rep_zero(const Elem& e);
    Elem e_add(int lv, const Elem& a, const Elem& b) const;
    Elem e_sub(int lv, const Elem& a, const Elem& b) const;
    Elem e_mul(int lv, const Elem& a, const Elem& b);
    void e_reduce(int lv, Elem& e);
    std::optional<Elem> try_inv(int lv, Elem e);
    Ivl e_ivl(int lv, const Elem& e) const;
    /** Choose the factor of level lv-1's modulus containing our root; returns
        true if the root lies in `g` (then modulus := g), else modulus := cof. */
    bool split_modulus(int lv, const std::vector<Elem>& g, const std::vector<Elem>& cof);
    // dynamic polynomial helpers over K_{lv-1}[x]
    void dtrim(int lv, std::vector<Elem>& p);
    std::vector<Elem> dgcd(int lv, std::vector<Elem> a, std::vector<Elem> b);
    std::vector<Elem> dquo(int lv, std::vector<Elem> a, const std::vector<Elem>& b, bool* exact);
};

/** All real roots of P (vars x_0..x_h, h = tower height) in x_h, sorted, with
    full Thom sign vectors stored in dsigns (index m = m-th derivative). */
std::vector<AlgRoot> isolate_over(Tower& t, const MPoly& p);

/** Order/equality of two isolated roots in the same variable over one tower. */
Cmp compare_roots(Tower& t, AlgRoot& a, AlgRoot& b);

/** Refine r's interval until its width is below w (no-op for exact roots). */
void refine_root(Tower& t, AlgRoot& r, const Rat& w);

}  // namespace sah
