#include "sah/graphcycles.hpp"

#include <algorithm>
#include <set>

namespace sah {

namespace {
struct Forest {
    std::vector<int> parent;       // parent vertex in the BFS forest (-1: root)
    std::vector<int> parent_edge;  // edge index to the parent (-1: root)
    std::vector<int> depth;
    std::vector<int> comp;
    std::vector<bool> tree_edge;
    int ncomp = 0;
};

Forest bfs_forest(const Graph& g) {
    Forest f;
    f.parent.assign(g.nv, -1);
    f.parent_edge.assign(g.nv, -1);
    f.depth.assign(g.nv, 0);
    f.comp.assign(g.nv, -1);
    f.tree_edge.assign(g.head.size(), false);

    // adjacency: (neighbor, edge index)
    std::vector<std::vector<std::pair<int, int>>> adj(g.nv);
    for (int e = 0; e < g.ne(); ++e) {
        adj[g.head[e]].push_back({g.tail[e], e});
        if (g.tail[e] != g.head[e]) adj[g.tail[e]].push_back({g.head[e], e});
    }

    std::vector<int> queue;
    for (int s = 0; s < g.nv; ++s) {
        if (f.comp[s] >= 0) continue;
        f.comp[s] = f.ncomp;
        queue.assign(1, s);
        for (size_t qi = 0; qi < queue.size(); ++qi) {
            int v = queue[qi];
            for (auto [w, e] : adj[v]) {
                if (f.comp[w] >= 0) continue;
                f.comp[w] = f.ncomp;
                f.parent[w] = v;
                f.parent_edge[w] = e;
                f.depth[w] = f.depth[v] + 1;
                f.tree_edge[e] = true;
                queue.push_back(w);
            }
        }
        ++f.ncomp;
    }
    return f;
}
}  // namespace

int graph_components(const Graph& g) { return bfs_forest(g).ncomp; }

CycleSet cycle_basis(const Graph& g) {
    Forest f = bfs_forest(g);
    CycleSet out;
    for (int e = 0; e < g.ne(); ++e) {
        if (f.tree_edge[e]) continue;
        int u = g.head[e], v = g.tail[e];
        Cycle c;
        if (u == v) {  // self-loop
            c.edges = {e};
            c.forward = {true};
            out.cycles.push_back(std::move(c));
            continue;
        }
        // walk both endpoints up to their lowest common ancestor
        std::vector<int> up_u, up_v;  // edge indices
        int a = u, b = v;
        while (f.depth[a] > f.depth[b]) {
            up_u.push_back(f.parent_edge[a]);
            a = f.parent[a];
        }
        while (f.depth[b] > f.depth[a]) {
            up_v.push_back(f.parent_edge[b]);
            b = f.parent[b];
        }
        while (a != b) {
            up_u.push_back(f.parent_edge[a]);
            a = f.parent[a];
            up_v.push_back(f.parent_edge[b]);
            b = f.parent[b];
        }
        // cycle: e from u->v (reverse orientation of the edge), then v up to
        // the ancestor, then ancestor down to u
        c.edges.push_back(e);
        c.forward.push_back(true);  // head -> tail is u -> v
        int at = v;
        for (int pe : up_v) {
            // pe joins `at` to its parent; orient the step at -> parent(at)
            bool fw = g.head[pe] == at;
            c.edges.push_back(pe);
            c.forward.push_back(fw);
            at = f.parent[at];
        }
        std::vector<int> down_edges(up_u.rbegin(), up_u.rend());
        for (int pe : down_edges) {
            // pe joins child to parent; we walk parent -> child
            bool fw = g.head[pe] == at;
            c.edges.push_back(pe);
            c.forward.push_back(fw);
            at = g.head[pe] == at ? g.tail[pe] : g.head[pe];
        }
        out.cycles.push_back(std::move(c));
    }
    return out;
}

bool cycles_well_chained(const Graph& g, const CycleSet& cs) {
    for (const Cycle& c : cs.cycles) {
        size_t q = c.edges.size();
        if (q == 0 || c.forward.size() != q) return false;
        std::set<int> seen;
        for (size_t j = 0; j < q; ++j) {
            if (c.to(g, j) != c.from(g, (j + 1) % q)) return false;
            if (!seen.insert(c.from(g, j)).second) return false;
        }
    }
    return true;
}

}  // namespace sah
