/**
 * Point and curve representations over triangular contexts.
 *
 * An RUR fixes a point of R^k: the first i coordinates come from a triangular
 * context, the rest are rational functions g_j/g0 evaluated at a Thom-encoded
 * root of a single polynomial f. A curve segment representation fixes a
 * one-dimensional branch parametrized by coordinate i+1 over an open interval
 * with Thom-encoded endpoints; the remaining coordinates are again rational
 * functions of a root of f, selected fiberwise by a fixed derivative sign
 * vector. Endpoint limits are computed exactly by isolating the limit
 * candidates and certifying which one the branch converges to (no separator
 * line between candidate windows may be crossed on the approach interval).
 */
#pragma once

#include <utility>
#include <vector>

#include "sah/thom.hpp"

namespace sah {

/** Real univariate representation of a point of R^k over a context of size i.
    f, g0 and the g_j live in variables (X_1..X_i, T) with T = var i. */
struct RUR {
    TriThom ctx;
    MPoly f, g0;
    std::vector<MPoly> g;  // coordinates i+1..k (k - i entries)
    ThomEncoding tau;      // root of f over the context
    int k = 0;

    int i() const { return const_cast<TriThom&>(ctx).size(); }
};

/** Box of side < width certified to contain the associated point.
    Throws std::domain_error if g0 vanishes at the root. */
std::vector<Ivl> rur_point(RUR& u, const Rat& width);

/** Curve branch above the open interval (ass(tau1), ass(tau2)) of X_{i+1}.
    f, g0, g_j live in (X_1..X_i, X_{i+1}, T): X_{i+1} = var i, T = var i+1. */
struct CurveSegRep {
    TriThom ctx;
    ThomEncoding tau1, tau2;  // interval endpoints, roots in var i over ctx
    MPoly f, g0;
    std::vector<MPoly> g;   // coordinates i+2..k (k - i - 1 entries)
    std::vector<int> rho;   // derivative sign vector selecting the branch root
    int k = 0;

    int i() const { return const_cast<TriThom&>(ctx).size(); }
};

/** Box around h(x) for rational x inside the interval; coordinate i+1 is x
    exactly. Throws std::domain_error if x is outside or no fiber root
    matches rho. */
std::vector<Ivl> curve_eval(CurveSegRep& c, const Rat& x, const Rat& width);

/** Left and right limit points of the branch, as triangular RURs over the
    curve's context extended by the corresponding interval endpoint. Throws
    std::domain_error when a limit cannot be certified (unbounded branch,
    degenerate elimination). */
std::pair<RUR, RUR> curve_endpoints(CurveSegRep& c);

/** Exact equality of two points given in triangular RUR form (contexts of
    size k-1 with a final Thom-encoded coordinate). */
bool same_point(const RUR& a, const RUR& b);

/** Triangular RUR from a full tower point (context = first k-1 levels). */
RUR make_triangular_rur(const TriThom& full_point, int k);

/** Elimination polynomial vanishing on the plane image of a curve branch:
    Res_T(f, X*g0 - g_j), squarefree and content-free in X, in canonical
    variables (ctx..., u at i, X at i+1), i+2 vars total. Memoized: the same
    curve data recurs across slabs, endpoints and projections. */
const MPoly& branch_image_anchor(const MPoly& f, const MPoly& g0, const MPoly& gj, int i);

}  // namespace sah
