/**
 * Sign-invariant decomposition of a coordinate plane, possibly over a
 * triangular algebraic context. Given polynomials in the last two variables
 * (u, w) over a fixed context point, the input family is saturated into a
 * stratifying family (derivative chains in w, a full projection set in u,
 * derivative chains and rational separators in u); the plane then splits
 * into finitely many cells on which every family member has constant sign.
 *
 * Two consumers:
 *  - realizable sign conditions of a bivariate family (one cell sample per
 *    realizable condition), and
 *  - closure formulas: the closure of a union of cells is the disjunction
 *    of the weak sign conditions of those cells, because weakening strict
 *    signs on a stratifying family adds exactly the boundary points.
 */
#pragma once

#include <functional>
#include <vector>

#include "sah/formulas.hpp"
#include "sah/thom.hpp"

namespace sah {

/** One atom of a quantifier-free constraint: sign(poly) relation, possibly
    strict. Used for intermediate (non-closed) formulas before closure. */
struct QfAtom {
    MPoly poly;
    int sign = 0;        // required sign in {-1, 0, +1}
    bool strict = true;  // strict: sign must match exactly; weak: 0 also allowed
};
using QfConj = std::vector<QfAtom>;

/** Disjunctive normal form of QfAtom conjunctions. */
struct QfFormula {
    std::vector<QfConj> disjuncts;
};

struct PlaneCell {
    SignCond sigma;        // signs of every family member on the cell
    std::vector<Ivl> box;  // witness box around the sample point, (u, w) only
    int dim = 0;           // 0, 1 or 2
    bool marked = false;   // set by the cell visitor, if any
};

/** Membership test at a cell's exact sample point: `t` is the context tower
    extended by the cell's u coordinate, `w` the cell's w coordinate (exact
    rational or isolated algebraic root in variable t.height()). The visitor
    may refine but must not change the height of t. */
using CellVisitor = std::function<bool(Tower& t, const AlgRoot& w, int dim)>;

struct PlaneDecomposition {
    std::vector<MPoly> family;    // saturated stratifying family (normalized)
    std::vector<int> input_slot;  // family index of each input poly (-1: constant input)
    std::vector<int> input_flip;  // +1/-1: sign of input relative to its normalized form
    std::vector<int> input_const_sign;  // sign of constant inputs (parallel)
    std::vector<PlaneCell> cells;
};

/**
 * Decompose the (u, w) plane over the context point, u = var ctx.size(),
 * w = u + 1. Input polynomials may involve context variables. The context
 * tower is used (and refined) for all exact sign decisions.
 */
PlaneDecomposition plane_decompose(const std::vector<MPoly>& input, TriThom& ctx,
                                   const CellVisitor& visit = {});

/** Stratifying data without cell enumeration: the saturated family (same as
    plane_decompose builds, including rational separators) and the ordered
    distinct u-breakpoints. Sign vectors on the family are cell-invariant
    between consecutive breakpoints, so a single exact sample identifies a
    cell's sign condition. */
struct PlaneStrata {
    std::vector<MPoly> family;
    std::vector<AlgRoot> uroots;
    std::vector<Rat> separators;  // interleaved: sep[j] < uroots[j] < sep[j+1];
                                  // the separator polys u - sep[j] are family
                                  // members, so they break sign invariance too
};
PlaneStrata stratify_plane(const std::vector<MPoly>& input, TriThom& ctx);

/** Does the sign condition satisfy the constraint set? Every atom polynomial
    must be resolvable in the family (matched by normalized terms). */
bool qf_holds_on(const QfFormula& phi, const PlaneDecomposition& dec, const SignCond& sigma);

/** Closure of the union of cells satisfying phi, as a closed formula:
    disjunction of the weak sign conditions of those cells. */
Formula closure_from_cells(const PlaneDecomposition& dec, const QfFormula& phi);

/** Same, over the cells marked by the visitor during decomposition. */
Formula closure_from_marked(const PlaneDecomposition& dec);

}  // namespace sah
