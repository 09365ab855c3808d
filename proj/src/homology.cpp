#include "sah/homology.hpp"

#include <algorithm>
#include <map>
#include <numeric>

#include "sah/upoly.hpp"

namespace sah {

namespace {

std::vector<Rat> box_mid(const std::vector<Ivl>& box) {
    std::vector<Rat> out;
    out.reserve(box.size());
    for (const Ivl& iv : box) out.push_back(iv.mid());
    return out;
}

Rat dist_linf(const std::vector<Rat>& a, const std::vector<Rat>& b) {
    Rat d(0);
    for (size_t i = 0; i < a.size(); ++i) d = std::max(Rat(d), Rat(abs(a[i] - b[i])));
    return d;
}

}  // namespace

std::vector<std::vector<Rat>> sample_curve(CurveSegRep& c, RUR& left, RUR& right,
                                           const Rat& tol) {
    const Rat w = tol / 4;
    std::vector<Rat> pl = box_mid(rur_point(left, w));
    std::vector<Rat> pr = box_mid(rur_point(right, w));

    // strictly interior rational parameters close to the endpoints
    refine_root(c.ctx.tower, c.tau1.root, w);
    refine_root(c.ctx.tower, c.tau2.root, w);
    for (int guard = 0; c.tau1.root.hi >= c.tau2.root.lo; ++guard) {
        if (guard > 100000) throw std::domain_error("sample_curve: endpoint separation failed");
        c.ctx.tower.refine_root_step(c.tau1.root);
        c.ctx.tower.refine_root_step(c.tau2.root);
    }
    Rat lo = c.tau1.root.hi, hi = c.tau2.root.lo;
    Rat gap = (hi - lo) / 256;
    // simplest rationals inside safe sub-ranges keep coordinate bit-lengths
    // small; every later evaluation cost depends on them
    Rat a = simplest_rational_between(lo, lo + gap);
    Rat b = simplest_rational_between(hi - gap, hi);

    // pull the first/last interior samples within tol of the endpoint points
    auto at = [&](const Rat& x) { return box_mid(curve_eval(c, x, w)); };
    for (int round = 0; round < 40 && dist_linf(at(a), pl) > tol; ++round)
        a = simplest_rational_between(lo, lo + (a - lo) / 2);
    for (int round = 0; round < 40 && dist_linf(at(b), pr) > tol; ++round)
        b = simplest_rational_between(hi - (hi - b) / 2, hi);

    std::vector<std::vector<Rat>> pts;
    pts.push_back(pl);
    // adaptive refinement: subdivide parameter spans whose images are far apart
    struct Span {
        Rat x0, x1;
        std::vector<Rat> p0, p1;
        int depth;
    };
    std::vector<Span> stack{{a, b, at(a), at(b), 0}};
    std::vector<std::vector<Rat>> interior;
    while (!stack.empty()) {
        Span s = std::move(stack.back());
        stack.pop_back();
        if (s.depth >= 18 || dist_linf(s.p0, s.p1) <= tol) {
            // terminal spans come off the stack left to right; emit left ends,
            // the overall right end is appended after the loop
            interior.push_back(std::move(s.p0));
            continue;
        }
        // simplest rational in the middle quarter: balanced split, small terms
        Rat q = (s.x1 - s.x0) / 8;
        Rat xm = simplest_rational_between(s.x0 + 3 * q, s.x1 - 3 * q);
        std::vector<Rat> pm = at(xm);
        // push right half first so the left half is processed first (in-order)
        stack.push_back({xm, s.x1, pm, s.p1, s.depth + 1});
        stack.push_back({s.x0, xm, s.p0, pm, s.depth + 1});
    }
    for (auto& p : interior) pts.push_back(std::move(p));
    pts.push_back(at(b));
    pts.push_back(pr);
    return pts;
}

namespace {

/** Marked grid vertex for a point: nearest vertex, else a marked vertex of
    an adjacent cell. */
int locate_vertex(const std::vector<Rat>& x, const CubicalComplex& cx) {
    CellKey key = cx.nearest_vertex(x);
    int idx = cx.index(0, key);
    if (idx >= 0) return idx;
    auto v = CubicalComplex::unpack(key);
    for (int d0 = -2; d0 <= 2; d0 += 2)
        for (int d1 = -2; d1 <= 2; d1 += 2)
            for (int d2 = cx.k == 3 ? -2 : 0; d2 <= (cx.k == 3 ? 2 : 0); d2 += 2) {
                std::array<int, 3> w{v[0] + d0, v[1] + d1, v[2] + d2};
                if (w[0] < 0 || w[1] < 0 || w[2] < 0) continue;
                if (w[0] > 2 * cx.n || w[1] > 2 * cx.n || (cx.k == 3 && w[2] > 2 * cx.n)) continue;
                idx = cx.index(0, CubicalComplex::pack(w));
                if (idx >= 0) return idx;
            }
    throw OracleError("snap: sample point has no marked grid vertex nearby");
}

struct SkeletonAdj {
    std::vector<std::vector<std::pair<int, int>>> adj;  // vertex -> (vertex, edge)
    explicit SkeletonAdj(const CubicalComplex& cx) : adj(cx.count(0)) {
        for (int e = 0; e < cx.count(1); ++e) {
            auto [p, q] = cx.edge_ends(e);
            adj[p].push_back({q, e});
            adj[q].push_back({p, e});
        }
    }
    /** Edge chain of a shortest path between two marked vertices. */
    Chain path(int from, int to) const {
        if (from == to) return {};
        std::vector<int> via_edge(adj.size(), -1), via_vertex(adj.size(), -1);
        std::vector<int> queue{from};
        via_vertex[from] = from;
        for (size_t qi = 0; qi < queue.size(); ++qi) {
            int v = queue[qi];
            if (v == to) break;
            for (auto [w, e] : adj[v]) {
                if (via_vertex[w] >= 0) continue;
                via_vertex[w] = v;
                via_edge[w] = e;
                queue.push_back(w);
            }
        }
        if (via_vertex[to] < 0)
            throw OracleError("snap: consecutive samples in different marked components");
        Chain c;
        for (int v = to; v != from; v = via_vertex[v]) c.push_back(via_edge[v]);
        std::sort(c.begin(), c.end());
        return c;
    }
};

}  // namespace

Chain snap_polyline(const std::vector<std::vector<Rat>>& pts, const CubicalComplex& cx) {
    if (pts.empty()) return {};
    SkeletonAdj sk(cx);
    std::vector<int> verts;
    for (const auto& p : pts) {
        int v = locate_vertex(p, cx);
        if (verts.empty() || verts.back() != v) verts.push_back(v);
    }
    Chain chain;
    for (size_t j = 0; j < verts.size(); ++j)
        chain = chain_xor(chain, sk.path(verts[j], verts[(j + 1) % verts.size()]));
    // a closed walk always has zero boundary over GF(2); verify anyway
    std::map<int, int> parity;
    for (int e : chain) {
        auto [p, q] = cx.edge_ends(e);
        parity[p] ^= 1;
        parity[q] ^= 1;
    }
    for (auto& [v, odd] : parity)
        if (odd) throw OracleError("snap: snapped chain is not a cycle");
    return chain;
}

CubicalComplex snap_network(const std::vector<std::vector<std::vector<Rat>>>& polylines,
                            const CubicalComplex& cx) {
    SkeletonAdj sk(cx);
    std::vector<char> used(static_cast<size_t>(cx.count(1)), 0);
    std::vector<CellKey> vkeys;
    for (const auto& pts : polylines) {
        std::vector<int> verts;
        for (const auto& p : pts) {
            int v = locate_vertex(p, cx);
            if (verts.empty() || verts.back() != v) verts.push_back(v);
        }
        // keep vertices explicitly: a polyline may snap to a single vertex
        for (int v : verts) vkeys.push_back(cx.cells[0][v]);
        for (size_t j = 0; j + 1 < verts.size(); ++j)
            for (int e : sk.path(verts[j], verts[j + 1])) used[static_cast<size_t>(e)] = 1;
    }
    CubicalComplex sub;
    sub.k = cx.k;
    sub.n = cx.n;
    sub.bbox = cx.bbox;
    for (size_t e = 0; e < used.size(); ++e) {
        if (!used[e]) continue;
        sub.cells[1].push_back(cx.cells[1][e]);
        auto [p, q] = cx.edge_ends(static_cast<int>(e));
        vkeys.push_back(cx.cells[0][p]);
        vkeys.push_back(cx.cells[0][q]);
    }
    std::sort(vkeys.begin(), vkeys.end());
    vkeys.erase(std::unique(vkeys.begin(), vkeys.end()), vkeys.end());
    sub.cells[0] = std::move(vkeys);
    return sub;
}

Chain snap_cycle(const Cycle& cycle, SkeletonNet& net,
                 const std::vector<std::vector<std::vector<Rat>>>& edge_polylines,
                 const CubicalComplex& cx) {
    std::vector<std::vector<Rat>> pts;
    for (size_t j = 0; j < cycle.edges.size(); ++j) {
        std::vector<std::vector<Rat>> part = edge_polylines[cycle.edges[j]];
        if (!cycle.forward[j]) std::reverse(part.begin(), part.end());
        for (auto& p : part) pts.push_back(std::move(p));
    }
    (void)net;
    return snap_polyline(pts, cx);
}

std::vector<int> minimal_spanning_subset(const CycleSet& cycles,
                                         const std::vector<Chain>& classes,
                                         const CubicalComplex& cx) {
    H1Context h = h1_context(cx);
    std::vector<int> order(classes.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
        size_t ea = a < static_cast<int>(cycles.cycles.size()) ? cycles.cycles[a].edges.size() : 0;
        size_t eb = b < static_cast<int>(cycles.cycles.size()) ? cycles.cycles[b].edges.size() : 0;
        return ea != eb ? ea < eb : a < b;
    });
    std::vector<int> J;
    for (int idx : order) {
        Chain residue = h.reduce(classes[idx]);
        if (!residue.empty()) {
            h.absorb(std::move(residue));
            J.push_back(idx);
        }
    }
    std::sort(J.begin(), J.end());
    if (static_cast<int>(J.size()) != h.b1)
        throw OracleError("minimal_spanning_subset: candidate cycles do not span H1");
    return J;
}

PairReport relative_pair_check(const CubicalComplex& s_cx, const CubicalComplex& g_cx) {
    for (int d = 0; d <= 2; ++d)
        for (CellKey key : g_cx.cells[d])
            if (s_cx.index(d, key) < 0)
                throw OracleError("relative_pair_check: Gamma marking leaves the S marking");

    PairReport rep;
    std::vector<int> s_label = vertex_components(s_cx);
    std::vector<int> g_label = vertex_components(g_cx);
    rep.b0_s = s_label.empty() ? 0 : 1 + *std::max_element(s_label.begin(), s_label.end());
    rep.b0_g = g_label.empty() ? 0 : 1 + *std::max_element(g_label.begin(), g_label.end());

    // the induced H0 map: Gamma component -> S component of any of its vertices
    std::map<int, int> image;  // gamma label -> s label
    bool injective = true;
    for (int v = 0; v < g_cx.count(0); ++v) {
        int sv = s_cx.index(0, g_cx.cells[0][v]);
        image.insert({g_label[v], s_label[sv]});
    }
    std::map<int, int> hit;  // s label -> gamma label count
    for (auto& [g, s] : image) hit[s] += 1;
    for (auto& [s, cnt] : hit)
        if (cnt > 1) injective = false;
    rep.h0_iso = injective && rep.b0_g == rep.b0_s;

    // H1 image rank: Gamma generators re-indexed into S, reduced modulo B1(S)
    BettiResult gb = cubical_betti(g_cx, Field::GF2, true);
    rep.b1_g = gb.b1;
    H1Context hs = h1_context(s_cx);
    rep.b1_s = hs.b1;
    for (const Chain& gen : gb.generators) {
        Chain in_s;
        for (int e : gen) in_s.push_back(s_cx.index(1, g_cx.cells[1][e]));
        std::sort(in_s.begin(), in_s.end());
        Chain residue = hs.reduce(in_s);
        if (!residue.empty()) {
            hs.absorb(std::move(residue));
            ++rep.image_rank;
        }
    }
    rep.h1_epi = rep.image_rank == rep.b1_s;
    return rep;
}

PairReport relative_pair_check(const MemberOracle& s_member, const MemberOracle& g_member,
                               const std::vector<Ivl>& box, int resolution, int k) {
    CubicalComplex s_cx = build_complex(s_member, box, resolution, k);
    CubicalComplex g_cx = build_complex(g_member, box, resolution, k);
    return relative_pair_check(s_cx, g_cx);
}

std::vector<RUR> h0_basis(const SkeletonNet& net) {
    int nv = static_cast<int>(net.vertices.size());
    std::vector<int> up(nv);
    std::iota(up.begin(), up.end(), 0);
    auto find = [&](int a) {
        while (up[a] != a) a = up[a] = up[up[a]];
        return a;
    };
    for (size_t e = 0; e < net.edges.size(); ++e) {
        int a = find(net.left[e]), b = find(net.right[e]);
        if (a != b) up[std::max(a, b)] = std::min(a, b);
    }
    std::vector<RUR> out;
    for (int v = 0; v < nv; ++v)
        if (find(v) == v) out.push_back(net.vertices[v]);
    return out;
}

}  // namespace sah
