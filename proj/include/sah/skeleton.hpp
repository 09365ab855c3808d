/**
 * The one-dimensional skeleton pipeline: a Morse-style partition of the next
 * coordinate direction, a certified bounding radius, curve-segment networks
 * over each open slab, and the recursive one-dimensional subset Gamma whose
 * closed curve images carry the homology of the input set in degrees 0 and 1.
 *
 * Curves over a slab are branches of a cylindrical decomposition adapted to
 * the input family along the slab coordinate: every branch is certified to
 * stay on its defining polynomials across the whole slab (gcd certificates),
 * to keep a constant derivative sign vector (branch-interaction resultants
 * are folded back into the partition until a fixed point), and to have a
 * nonvanishing denominator. Fibers over partition values are handled by
 * recursion with the context extended by one Thom-encoded coordinate.
 */
#pragma once

#include <utility>
#include <vector>

#include "sah/reps.hpp"

namespace sah {

/** Ordered distinguished values of coordinate i+1 over the context: the
    sub/super-level topology along that coordinate is constant between
    consecutive values. */
struct MorsePartition {
    TriThom context;
    std::vector<ThomEncoding> taus;  // strictly increasing associated values
};

/** Curves over one open slab (taus[j], taus[j+1]) with their endpoint RURs. */
struct SlabData {
    Rat sample;                             // certified interior rational value
    std::vector<CurveSegRep> curves;        // pairwise disjoint branches in S
    std::vector<std::pair<RUR, RUR>> ends;  // left/right limits per curve
};

struct CurveSegments {
    MorsePartition partition;
    std::vector<SlabData> slabs;  // one per consecutive tau pair
    Rat radius;                   // bounding radius used for the ball conjunct
};

/** Vertex/edge network whose union of closed edge images is Gamma. */
struct SkeletonNet {
    std::vector<RUR> vertices;             // deduplicated exact points
    std::vector<CurveSegRep> edges;
    std::vector<int> left, right;          // vertex index per edge
    std::vector<std::vector<int>> groups;  // edge indices per slab / per fiber
};

/**
 * Certified radius r with S strictly inside the open ball of radius r around
 * the origin of the moving coordinates (so intersecting with the closed ball
 * changes nothing). Derived from exact root bounds of per-coordinate
 * elimination families; requires R(phi) to be bounded. If no elimination
 * root exists at all, returns 1 and sets *empty_hint.
 */
Rat big_enough_radius(TriThom& ctx, const std::vector<MPoly>& P, const Formula& phi, int k,
                      bool* empty_hint = nullptr);

/** Distinguished values of X_{i+1} within [-r, r]: all real roots of the
    elimination family of P and phi's polynomials along X_{i+1}. */
MorsePartition morse_partition(TriThom& ctx, const Rat& r, const std::vector<MPoly>& P,
                               const Formula& phi, int k);

/** Slab curves spanning each open interval of the partition, each certified
    to lie in S, pairwise disjoint, meeting every fiber component over
    interior values; requires k - ctx.size() >= 2. A positive radius_hint
    skips the internal radius computation. */
CurveSegments curve_segments(TriThom& ctx, const std::vector<MPoly>& P, const Formula& phi,
                             int k, const Rat& radius_hint = Rat(0));

/** The recursive one-dimensional subset: Gamma = union of closed edge
    images contains every point of M, lies in S, and the inclusion into S is
    a homology isomorphism in degree 0 and epimorphism in degree 1.
    Requires R(phi) bounded; M points must be triangular RURs inside S. */
SkeletonNet one_dim_subset(TriThom& ctx, const std::vector<MPoly>& P, const Formula& phi,
                           const std::vector<RUR>& M, int k);

/** One elimination step of a cylindrical projection: coefficients,
    discriminants and pairwise resultants with respect to `var` (after a
    squarefree / pairwise-coprime refinement); exposed for tests. */
std::vector<MPoly> project_once(const std::vector<MPoly>& polys, int var);

}  // namespace sah
