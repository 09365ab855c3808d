/**
 * Grid-based cubical complexes used as the homology oracle.
 *
 * A complex is built over a rational box at a power-of-two resolution by an
 * octree walk of a three-valued membership oracle: cells certified OUT are
 * discarded, everything else is marked (outer approximation, conservative
 * for closed sets), and the marked set is closed under face inclusion. Betti
 * numbers b0 and b1 come from the ranks of the boundary maps over GF(2) by
 * default, over the rationals behind a flag; b0 uses union-find on the
 * 1-skeleton, b1 sparse column reduction of the 2-boundary.
 */
#pragma once

#include <array>
#include <functional>
#include <map>
#include <vector>

#include "sah/formulas.hpp"
#include "sah/interval.hpp"

namespace sah {

enum class Verdict { IN, OUT, MAYBE };

/** Three-valued membership test on a closed rational box. */
using MemberOracle = std::function<Verdict(const std::vector<Ivl>&)>;

enum class Field { GF2, RATIONAL };

/** Cell key: per axis, value 2i encodes grid vertex i and value 2i+1 the
    open interval (i, i+1); the cell is the product. 21 bits per axis. */
using CellKey = long long;

class CubicalComplex {
  public:
    int k = 0;           // ambient dimension, 2 or 3
    int n = 0;           // cells per axis
    std::vector<Ivl> bbox;
    std::array<std::vector<CellKey>, 3> cells;  // sorted keys, dimensions 0..2

    /** Index of a key in cells[dim]; -1 if absent. */
    int index(int dim, CellKey key) const;
    /** Number of cells of the given dimension. */
    int count(int dim) const { return static_cast<int>(cells[dim].size()); }

    static CellKey pack(const std::array<int, 3>& v);
    static std::array<int, 3> unpack(CellKey key);

    /** Closed box of a cell (degenerate sides for even axis values). */
    std::vector<Ivl> cell_box(CellKey key) const;
    /** Vertex indices of the endpoints of a 1-cell. */
    std::pair<int, int> edge_ends(int edge_index) const;
    /** Key of the grid vertex nearest to a rational point (clamped). */
    CellKey nearest_vertex(const std::vector<Rat>& x) const;
};

/** Octree-marked complex: cells not certified OUT are marked, the marked set
    is closed under faces. resolution must be a power of two >= 4. */
CubicalComplex build_complex(const MemberOracle& member, const std::vector<Ivl>& box,
                             int resolution, int k);

/** Interval-arithmetic oracle for a closed formula in k variables. */
MemberOracle formula_oracle(const Formula& f);

/** 1-chain over GF(2): strictly increasing indices into cells[1]. */
using Chain = std::vector<int>;

/** Symmetric difference of sorted index chains. */
Chain chain_xor(const Chain& a, const Chain& b);

/** Reduced 2-boundary image plus accepted H1 classes; supports reducing
    1-cycles modulo the span and absorbing new independent classes. */
class H1Context {
  public:
    const CubicalComplex* cx = nullptr;
    int b0 = 0, b1 = 0;

    /** Residue of the chain modulo the current span (boundaries + absorbed). */
    Chain reduce(Chain c) const;
    /** Add an independent class (call only when reduce(c) != 0). */
    void absorb(Chain c);

    std::map<int, Chain> low_to_col;
};

/** Union-find component label per 0-cell. */
std::vector<int> vertex_components(const CubicalComplex& cx);

/** Rank of the 2-boundary over the chosen field. */
int rank_d2(const CubicalComplex& cx, Field field);

/** Boundary-of-boundary check: d1(d2(sigma)) = 0 for every 2-cell. */
bool d1_after_d2_vanishes(const CubicalComplex& cx);

/** GF(2) reduction context with ranks; basis spans the 2-boundary image. */
H1Context h1_context(const CubicalComplex& cx);

struct BettiResult {
    int b0 = 0, b1 = 0;
    std::vector<Chain> generators;  // H1 generators (edge-index chains)
};

/** Betti numbers of the marked complex; generators only when requested
    (GF(2) fundamental cycles of the 1-skeleton, reduced modulo boundaries). */
BettiResult cubical_betti(const CubicalComplex& cx, Field field = Field::GF2,
                          bool want_generators = false);
BettiResult cubical_betti(const MemberOracle& member, const std::vector<Ivl>& box,
                          int resolution, int k, Field field = Field::GF2,
                          bool want_generators = false);

}  // namespace sah
