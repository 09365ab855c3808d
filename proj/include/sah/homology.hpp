/**
 * Homology-level glue: snapping exact curves onto a cubical complex,
 * Gauss-Jordan selection of a minimal spanning set of candidate cycles,
 * the relative pair check (H0 isomorphism / H1 epimorphism at oracle level),
 * and the degree-zero basis of a skeleton network.
 */
#pragma once

#include "sah/cubical.hpp"
#include "sah/graphcycles.hpp"
#include "sah/skeleton.hpp"

namespace sah {

/** Raised when snapping or a pair check cannot be completed at the given
    resolution (approximation fault, not a mathematical failure). */
struct OracleError : std::runtime_error {
    explicit OracleError(const std::string& m) : std::runtime_error(m) {}
};

/** Polyline approximation of a curve branch: exact rational points within
    `tol` of the curve, consecutive points at most `tol` apart except near
    the (included approximations of the) endpoints. */
std::vector<std::vector<Rat>> sample_curve(CurveSegRep& c, RUR& left, RUR& right,
                                           const Rat& tol);

/** Snap a closed rational polyline onto the complex: nearest marked grid
    vertices joined by shortest 1-skeleton paths. The resulting chain is a
    cycle (empty for degenerate polylines). Throws OracleError if a point has
    no marked vertex nearby or two consecutive vertices are not connected. */
Chain snap_polyline(const std::vector<std::vector<Rat>>& pts, const CubicalComplex& cx);

/** One-dimensional subcomplex of `cx` covering the snapped open paths of all
    polylines (union of shortest 1-skeleton paths between consecutive snapped
    vertices, closed under faces). Serves as the Gamma complex of the pair
    check. Throws OracleError on unreachable samples. */
CubicalComplex snap_network(const std::vector<std::vector<std::vector<Rat>>>& polylines,
                            const CubicalComplex& cx);

/** Snap one graph cycle of the network: concatenates the edge polylines in
    cycle order and snaps the closed result. */
Chain snap_cycle(const Cycle& cycle, SkeletonNet& net,
                 const std::vector<std::vector<std::vector<Rat>>>& edge_polylines,
                 const CubicalComplex& cx);

/** Minimal index subset J (by greedy leftmost pivot over candidates ordered
    by (edge count, index)) whose classes span H1 of the complex. Throws
    OracleError if the candidates do not span (epimorphism contract). */
std::vector<int> minimal_spanning_subset(const CycleSet& cycles,
                                         const std::vector<Chain>& classes,
                                         const CubicalComplex& cx);

struct PairReport {
    bool h0_iso = false;
    bool h1_epi = false;
    int b0_s = 0, b1_s = 0;
    int b0_g = 0, b1_g = 0;
    int image_rank = 0;  // rank of H1(Gamma complex) -> H1(S complex)
};

/** Oracle-level check that H_q(S, Gamma) = 0 for q = 0, 1: matched component
    counts and full H1 image rank. Requires the Gamma marking to be contained
    in the S marking (throws OracleError otherwise). */
PairReport relative_pair_check(const MemberOracle& s_member, const MemberOracle& g_member,
                               const std::vector<Ivl>& box, int resolution, int k);

/** Same on prebuilt complexes (gamma cells must be cells of the S grid). */
PairReport relative_pair_check(const CubicalComplex& s_cx, const CubicalComplex& g_cx);

/** One vertex per connected component of the network graph. */
std::vector<RUR> h0_basis(const SkeletonNet& net);

}  // namespace sah
