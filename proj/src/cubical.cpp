#include "sah/cubical.hpp"

#include <algorithm>
#include <stdexcept>

namespace sah {

namespace {
constexpr int kAxisBits = 21;
constexpr CellKey kAxisMask = (CellKey(1) << kAxisBits) - 1;
}  // namespace

CellKey CubicalComplex::pack(const std::array<int, 3>& v) {
    return CellKey(v[0]) | (CellKey(v[1]) << kAxisBits) | (CellKey(v[2]) << (2 * kAxisBits));
}

std::array<int, 3> CubicalComplex::unpack(CellKey key) {
    return {static_cast<int>(key & kAxisMask), static_cast<int>((key >> kAxisBits) & kAxisMask),
            static_cast<int>((key >> (2 * kAxisBits)) & kAxisMask)};
}

int CubicalComplex::index(int dim, CellKey key) const {
    const auto& v = cells[dim];
    auto it = std::lower_bound(v.begin(), v.end(), key);
    if (it == v.end() || *it != key) return -1;
    return static_cast<int>(it - v.begin());
}

std::vector<Ivl> CubicalComplex::cell_box(CellKey key) const {
    auto v = unpack(key);
    std::vector<Ivl> out(k);
    for (int ax = 0; ax < k; ++ax) {
        Rat w = (bbox[ax].hi - bbox[ax].lo) / n;
        int lo = v[ax] / 2;
        out[ax].lo = bbox[ax].lo + w * lo;
        out[ax].hi = bbox[ax].lo + w * (lo + (v[ax] % 2 ? 1 : 0));
    }
    return out;
}

std::pair<int, int> CubicalComplex::edge_ends(int edge_index) const {
    auto v = unpack(cells[1][edge_index]);
    int ax = 0;
    while (v[ax] % 2 == 0) ++ax;
    auto a = v, b = v;
    a[ax] -= 1;
    b[ax] += 1;
    return {index(0, pack(a)), index(0, pack(b))};
}

CellKey CubicalComplex::nearest_vertex(const std::vector<Rat>& x) const {
    std::array<int, 3> v{0, 0, 0};
    for (int ax = 0; ax < k; ++ax) {
        Rat w = (bbox[ax].hi - bbox[ax].lo) / n;
        // round((x - lo) / w), clamped to the grid
        Rat t = (x[ax] - bbox[ax].lo) / w;
        boost::multiprecision::mpz_int num = boost::multiprecision::numerator(t);
        boost::multiprecision::mpz_int den = boost::multiprecision::denominator(t);
        boost::multiprecision::mpz_int i = (2 * num + den) / (2 * den);  // floor(t + 1/2), t >= 0
        long long ii = i.convert_to<long long>();
        ii = std::max(0LL, std::min<long long>(n, ii));
        v[ax] = 2 * static_cast<int>(ii);
    }
    return pack(v);
}

namespace {

struct Builder {
    const MemberOracle* member;
    int k, n;
    std::vector<std::vector<Rat>> lines;  // grid line coordinates per axis
    std::vector<CellKey> top;             // marked top-dimensional cells

    void mark_range(const std::array<int, 3>& a, const std::array<int, 3>& b) {
        std::array<int, 3> v{0, 0, 0};
        for (int i0 = a[0]; i0 < b[0]; ++i0)
            for (int i1 = a[1]; i1 < b[1]; ++i1) {
                v[0] = 2 * i0 + 1;
                v[1] = 2 * i1 + 1;
                if (k == 2) {
                    top.push_back(CubicalComplex::pack(v));
                    continue;
                }
                for (int i2 = a[2]; i2 < b[2]; ++i2) {
                    v[2] = 2 * i2 + 1;
                    top.push_back(CubicalComplex::pack(v));
                }
            }
    }

    void walk(std::array<int, 3> a, std::array<int, 3> b) {
        std::vector<Ivl> box(k);
        bool single = true;
        for (int ax = 0; ax < k; ++ax) {
            box[ax] = Ivl(lines[ax][a[ax]], lines[ax][b[ax]]);
            single = single && b[ax] - a[ax] == 1;
        }
        Verdict v = (*member)(box);
        if (v == Verdict::OUT) return;
        if (v == Verdict::IN || single) {
            mark_range(a, b);
            return;
        }
        std::array<std::array<int, 3>, 3> cut;  // lo, mid, hi per axis
        for (int ax = 0; ax < 3; ++ax) {
            cut[0][ax] = a[ax];
            cut[2][ax] = b[ax];
            cut[1][ax] = b[ax] - a[ax] > 1 ? (a[ax] + b[ax]) / 2 : b[ax];
        }
        int halves[3];
        for (int ax = 0; ax < 3; ++ax) halves[ax] = cut[1][ax] < cut[2][ax] ? 2 : 1;
        for (int h0 = 0; h0 < halves[0]; ++h0)
            for (int h1 = 0; h1 < halves[1]; ++h1)
                for (int h2 = 0; h2 < halves[2]; ++h2)
                    walk({cut[h0][0], cut[h1][1], cut[h2][2]},
                         {cut[h0 + 1][0], cut[h1 + 1][1], cut[h2 + 1][2]});
    }
};

}  // namespace

CubicalComplex build_complex(const MemberOracle& member, const std::vector<Ivl>& box,
                             int resolution, int k) {
    if (k != 2 && k != 3) throw std::invalid_argument("build_complex: k must be 2 or 3");
    if (resolution < 4 || (resolution & (resolution - 1)))
        throw std::invalid_argument("build_complex: resolution must be a power of two >= 4");

    CubicalComplex cx;
    cx.k = k;
    cx.n = resolution;
    cx.bbox = box;

    Builder bld;
    bld.member = &member;
    bld.k = k;
    bld.n = resolution;
    bld.lines.resize(k);
    for (int ax = 0; ax < k; ++ax) {
        Rat w = (box[ax].hi - box[ax].lo) / resolution;
        bld.lines[ax].resize(resolution + 1);
        for (int i = 0; i <= resolution; ++i) bld.lines[ax][i] = box[ax].lo + w * i;
    }
    std::array<int, 3> a{0, 0, 0}, b{resolution, resolution, k == 3 ? resolution : 1};
    if (k == 2) b[2] = 1;
    bld.walk(a, b);

    // close under faces: every axis value may stay (odd) or snap to either end
    std::array<std::vector<CellKey>, 4> bydim;
    for (CellKey key : bld.top) {
        auto v = CubicalComplex::unpack(key);
        std::array<int, 3> f{v[0], v[1], v[2]};
        int c0_max = 3, c1_max = 3, c2_max = k == 3 ? 3 : 1;
        for (int c0 = 0; c0 < c0_max; ++c0)
            for (int c1 = 0; c1 < c1_max; ++c1)
                for (int c2 = 0; c2 < c2_max; ++c2) {
                    int dim = 0;
                    f[0] = c0 == 0 ? v[0] : v[0] + (c0 == 1 ? -1 : 1);
                    f[1] = c1 == 0 ? v[1] : v[1] + (c1 == 1 ? -1 : 1);
                    f[2] = c2 == 0 ? v[2] : v[2] + (c2 == 1 ? -1 : 1);
                    dim = (f[0] % 2) + (f[1] % 2) + (f[2] % 2);
                    if (dim <= 2) bydim[dim].push_back(CubicalComplex::pack(f));
                }
    }
    for (int d = 0; d <= 2; ++d) {
        auto& v = bydim[d];
        std::sort(v.begin(), v.end());
        v.erase(std::unique(v.begin(), v.end()), v.end());
        cx.cells[d] = std::move(v);
    }
    return cx;
}

namespace {
Verdict atom_verdict(const Ivl& iv, Rel rel) {
    switch (rel) {
        case Rel::LE:
            if (iv.hi <= 0) return Verdict::IN;
            if (iv.lo > 0) return Verdict::OUT;
            return Verdict::MAYBE;
        case Rel::GE:
            if (iv.lo >= 0) return Verdict::IN;
            if (iv.hi < 0) return Verdict::OUT;
            return Verdict::MAYBE;
        case Rel::EQ:
            if (iv.lo > 0 || iv.hi < 0) return Verdict::OUT;
            if (iv.lo == 0 && iv.hi == 0) return Verdict::IN;
            return Verdict::MAYBE;
    }
    return Verdict::MAYBE;
}

Verdict formula_verdict(const Formula& f, const std::vector<Ivl>& box) {
    switch (f.kind) {
        case Formula::Kind::Atom:
            return atom_verdict(eval_box_sharp(f.poly, box), f.rel);
        case Formula::Kind::And: {
            Verdict acc = Verdict::IN;
            for (const Formula& kid : f.kids) {
                Verdict v = formula_verdict(kid, box);
                if (v == Verdict::OUT) return Verdict::OUT;
                if (v == Verdict::MAYBE) acc = Verdict::MAYBE;
            }
            return acc;
        }
        case Formula::Kind::Or: {
            Verdict acc = Verdict::OUT;
            for (const Formula& kid : f.kids) {
                Verdict v = formula_verdict(kid, box);
                if (v == Verdict::IN) return Verdict::IN;
                if (v == Verdict::MAYBE) acc = Verdict::MAYBE;
            }
            return acc;
        }
    }
    return Verdict::MAYBE;
}
}  // namespace

MemberOracle formula_oracle(const Formula& f) {
    return [f](const std::vector<Ivl>& box) { return formula_verdict(f, box); };
}

Chain chain_xor(const Chain& a, const Chain& b) {
    Chain out;
    out.reserve(a.size() + b.size());
    std::set_symmetric_difference(a.begin(), a.end(), b.begin(), b.end(),
                                  std::back_inserter(out));
    return out;
}

Chain H1Context::reduce(Chain c) const {
    while (!c.empty()) {
        auto it = low_to_col.find(c.back());
        if (it == low_to_col.end()) break;
        c = chain_xor(c, it->second);
    }
    return c;
}

void H1Context::absorb(Chain c) {
    c = reduce(std::move(c));
    if (!c.empty()) low_to_col[c.back()] = std::move(c);
}

namespace {
struct UnionFind {
    std::vector<int> up;
    explicit UnionFind(int n) : up(n) {
        for (int i = 0; i < n; ++i) up[i] = i;
    }
    int find(int a) {
        while (up[a] != a) a = up[a] = up[up[a]];
        return a;
    }
    bool unite(int a, int b) {
        a = find(a);
        b = find(b);
        if (a == b) return false;
        up[std::max(a, b)] = std::min(a, b);
        return true;
    }
};

/** The (up to four) edge faces of a 2-cell, as indices into cells[1], with
    the rational boundary coefficient of each. */
std::vector<std::pair<int, int>> d2_column(const CubicalComplex& cx, CellKey key) {
    auto v = CubicalComplex::unpack(key);
    std::vector<int> odd;
    for (int ax = 0; ax < 3; ++ax)
        if (v[ax] % 2) odd.push_back(ax);
    std::vector<std::pair<int, int>> col;  // (edge index, +-1)
    int koszul = 1;
    for (int ax : odd) {
        auto lo = v, hi = v;
        lo[ax] -= 1;
        hi[ax] += 1;
        int elo = cx.index(1, CubicalComplex::pack(lo));
        int ehi = cx.index(1, CubicalComplex::pack(hi));
        col.push_back({ehi, koszul});
        col.push_back({elo, -koszul});
        koszul = -koszul;
    }
    return col;
}
}  // namespace

std::vector<int> vertex_components(const CubicalComplex& cx) {
    UnionFind uf(cx.count(0));
    for (int e = 0; e < cx.count(1); ++e) {
        auto [a, b] = cx.edge_ends(e);
        uf.unite(a, b);
    }
    std::vector<int> label(cx.count(0));
    std::map<int, int> renum;
    for (int i = 0; i < cx.count(0); ++i) {
        int r = uf.find(i);
        auto [it, fresh] = renum.insert({r, static_cast<int>(renum.size())});
        label[i] = it->second;
        (void)fresh;
    }
    return label;
}

bool d1_after_d2_vanishes(const CubicalComplex& cx) {
    for (CellKey key : cx.cells[2]) {
        std::map<int, int> vertex_coeff;  // vertex index -> signed coefficient
        for (auto [e, c] : d2_column(cx, key)) {
            if (e < 0) return false;
            auto [a, b] = cx.edge_ends(e);
            vertex_coeff[b] += c;  // d1(edge) = head - tail
            vertex_coeff[a] -= c;
        }
        for (auto& [vtx, c] : vertex_coeff)
            if (c != 0) return false;
    }
    return true;
}

int rank_d2(const CubicalComplex& cx, Field field) {
    if (field == Field::GF2) {
        std::map<int, Chain> basis;
        int rank = 0;
        for (CellKey key : cx.cells[2]) {
            Chain col;
            for (auto [e, c] : d2_column(cx, key)) col.push_back(e);
            std::sort(col.begin(), col.end());
            // GF(2): coefficients are +-1, duplicates impossible for distinct faces
            while (!col.empty()) {
                auto it = basis.find(col.back());
                if (it == basis.end()) break;
                col = chain_xor(col, it->second);
            }
            if (!col.empty()) {
                basis[col.back()] = std::move(col);
                ++rank;
            }
        }
        return rank;
    }
    // rational field: sparse columns with exact elimination
    using QCol = std::map<int, Rat>;
    std::map<int, QCol> basis;
    int rank = 0;
    for (CellKey key : cx.cells[2]) {
        QCol col;
        for (auto [e, c] : d2_column(cx, key)) col[e] += c;
        for (auto it = col.begin(); it != col.end();)
            it = it->second == 0 ? col.erase(it) : std::next(it);
        while (!col.empty()) {
            int low = col.rbegin()->first;
            auto bit = basis.find(low);
            if (bit == basis.end()) break;
            Rat factor = col.rbegin()->second / bit->second.rbegin()->second;
            for (auto& [e, c] : bit->second) {
                Rat& slot = col[e];
                slot -= factor * c;
                if (slot == 0) col.erase(e);
            }
        }
        if (!col.empty()) {
            basis[col.rbegin()->first] = std::move(col);
            ++rank;
        }
    }
    return rank;
}

H1Context h1_context(const CubicalComplex& cx) {
    H1Context h;
    h.cx = &cx;
    for (CellKey key : cx.cells[2]) {
        Chain col;
        for (auto [e, c] : d2_column(cx, key)) col.push_back(e);
        std::sort(col.begin(), col.end());
        h.absorb(std::move(col));
    }
    int rank2 = static_cast<int>(h.low_to_col.size());
    std::vector<int> comp = vertex_components(cx);
    int ncomp = comp.empty() ? 0 : 1 + *std::max_element(comp.begin(), comp.end());
    h.b0 = ncomp;
    h.b1 = cx.count(1) - (cx.count(0) - ncomp) - rank2;
    return h;
}

BettiResult cubical_betti(const CubicalComplex& cx, Field field, bool want_generators) {
    BettiResult r;
    std::vector<int> comp = vertex_components(cx);
    r.b0 = comp.empty() ? 0 : 1 + *std::max_element(comp.begin(), comp.end());
    r.b1 = cx.count(1) - (cx.count(0) - r.b0) - rank_d2(cx, field);
    if (!want_generators || r.b1 == 0) return r;

    // spanning forest of the 1-skeleton; fundamental cycles reduced modulo
    // the 2-boundary image until b1 independent classes are found
    H1Context h = h1_context(cx);
    int nv = cx.count(0);
    std::vector<int> parent(nv, -1), parent_edge(nv, -1), depth(nv, 0), seen(nv, 0);
    std::vector<std::vector<std::pair<int, int>>> adj(nv);
    for (int e = 0; e < cx.count(1); ++e) {
        auto [a, b] = cx.edge_ends(e);
        adj[a].push_back({b, e});
        adj[b].push_back({a, e});
    }
    std::vector<char> tree_edge(cx.count(1), 0);
    std::vector<int> queue;
    for (int s = 0; s < nv; ++s) {
        if (seen[s]) continue;
        seen[s] = 1;
        queue.assign(1, s);
        for (size_t qi = 0; qi < queue.size(); ++qi) {
            int v = queue[qi];
            for (auto [w, e] : adj[v]) {
                if (seen[w]) continue;
                seen[w] = 1;
                parent[w] = v;
                parent_edge[w] = e;
                depth[w] = depth[v] + 1;
                tree_edge[e] = 1;
                queue.push_back(w);
            }
        }
    }
    for (int e = 0; e < cx.count(1) && static_cast<int>(r.generators.size()) < r.b1; ++e) {
        if (tree_edge[e]) continue;
        auto [u, v] = cx.edge_ends(e);
        Chain c{e};
        int a = u, b = v;
        while (depth[a] > depth[b]) {
            c.push_back(parent_edge[a]);
            a = parent[a];
        }
        while (depth[b] > depth[a]) {
            c.push_back(parent_edge[b]);
            b = parent[b];
        }
        while (a != b) {
            c.push_back(parent_edge[a]);
            a = parent[a];
            c.push_back(parent_edge[b]);
            b = parent[b];
        }
        std::sort(c.begin(), c.end());
        Chain residue = h.reduce(c);
        if (!residue.empty()) {
            h.absorb(residue);
            r.generators.push_back(std::move(c));
        }
    }
    return r;
}

BettiResult cubical_betti(const MemberOracle& member, const std::vector<Ivl>& box,
                          int resolution, int k, Field field, bool want_generators) {
    return cubical_betti(build_complex(member, box, resolution, k), field, want_generators);
}

}  // namespace sah
