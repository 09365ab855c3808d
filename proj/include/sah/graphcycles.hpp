/**
 * Cycle space of a finite multigraph. Edges are indexed and carry a
 * designated head and tail; parallel edges and self-loops are permitted.
 * The basis consists of the fundamental cycles of a spanning forest: one
 * simple cycle per non-forest edge, so the count is |E| - |V| + #components.
 */
#pragma once

#include <vector>

namespace sah {

struct Graph {
    int nv = 0;
    std::vector<int> head, tail;  // per edge

    int ne() const { return static_cast<int>(head.size()); }
    void add_edge(int h, int t) {
        head.push_back(h);
        tail.push_back(t);
    }
};

/** One simple cycle as a chained sequence of oriented edge uses: walking the
    edges in order (respecting `forward`) visits each vertex once. */
struct Cycle {
    std::vector<int> edges;
    std::vector<bool> forward;  // forward: head -> tail along the walk

    /** First vertex of step j along the walk. */
    int from(const Graph& g, size_t j) const {
        return forward[j] ? g.head[edges[j]] : g.tail[edges[j]];
    }
    /** Last vertex of step j along the walk. */
    int to(const Graph& g, size_t j) const {
        return forward[j] ? g.tail[edges[j]] : g.head[edges[j]];
    }
};

struct CycleSet {
    std::vector<Cycle> cycles;
};

/** Fundamental-cycle basis of the cycle space; every cycle is simple and
    cycles.size() == |E| - |V| + #components. */
CycleSet cycle_basis(const Graph& g);

/** Number of connected components (isolated vertices count). */
int graph_components(const Graph& g);

/** Chaining check: to(j) == from(j+1 mod q) for every step of every cycle,
    and no vertex repeats within one cycle. */
bool cycles_well_chained(const Graph& g, const CycleSet& cs);

}  // namespace sah
