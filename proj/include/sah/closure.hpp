/**
 * Conversion of curve segment representations into closed formulas.
 *
 * The closure of a bounded curve branch equals the intersection of the
 * cylinders over the closures of its planar projections onto the
 * (parameter, coordinate-j) planes, intersected with the context's weak
 * encoding. Each planar closure is computed from a sign-invariant plane
 * decomposition: the cells lying in the projected image are identified by
 * exact membership tests at their sample points, and the closure is the
 * disjunction of their weak sign conditions.
 */
#pragma once

#include "sah/cad2.hpp"
#include "sah/reps.hpp"

namespace sah {

/** Closure of the realization of phi over the context, as a closed formula
    in the context variables plus (u, w) = vars (ctx.size(), ctx.size()+1).
    phi's realization should have dimension <= 1 for tightness. */
Formula closure_2d(const QfFormula& phi, TriThom& ctx);

/** Exact image of the branch under (x, h(x)) |-> (x, x_j), 1-based
    coordinate j in [i+2, k]: one strict sign condition per image cell of
    the induced plane decomposition, in variables (context, X_{i+1}, X_j)
    with X_j placed at var i+1. */
QfFormula project_curve_2d(CurveSegRep& c, int j);

/** Closed formula in k variables whose realization (over the context point)
    is the closure of the branch image: the context's weak encoding joined
    with every projected-closure cylinder (and, when the parameter is the
    last coordinate, the closed parameter interval). */
Formula curve_to_closed(CurveSegRep& c);

/** One branch plus (optionally) a certified polyline: rational points within
    `tol` of the branch, strictly interior parameters except the first and
    last entries (endpoint approximations, ignored here). */
struct BranchClosureJob {
    CurveSegRep* curve = nullptr;
    const std::vector<std::vector<Rat>>* polyline = nullptr;
};

/**
 * Closed formulas for many branches at once (result parallel to the input).
 *
 * Branches sharing (context, f, g0, g) share one stratification per
 * projected plane; each branch marks the sign conditions its image realizes
 * over the stratification's columns, certified by one exact sample per
 * column (taken from the polyline when one lands inside, re-evaluated
 * exactly otherwise). Emitted formulas cover the closure of the branch
 * extended to full stratification columns, so unions over arc-continuation-
 * closed families (whole cycles, whole networks) are exact.
 */
std::vector<Formula> branches_to_closed(const std::vector<BranchClosureJob>& jobs,
                                        const Rat& tol);

}  // namespace sah
