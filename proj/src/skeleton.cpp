#include "sah/skeleton.hpp"

#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <iostream>
#include <map>
#include <set>
#include <stdexcept>
#include <utility>

#include "sah/upoly.hpp"

namespace sah {

namespace {

constexpr int kGuard = 100000;

bool trace_on() {
    static bool on = std::getenv("SAH_TRACE") != nullptr;
    return on;
}
long now_ms() {
    return std::chrono::duration_cast<std::chrono::milliseconds>(
               std::chrono::steady_clock::now().time_since_epoch())
        .count();
}

AlgRoot exact_root(int nvars, int var, const Rat& v) {
    AlgRoot r;
    r.anchor = MPoly::var(nvars, var) - MPoly::constant(nvars, v);
    r.lo = v;
    r.hi = v;
    return r;
}

/** Move variable `from` of p to variable `to` in an nvars-wide space. */
MPoly embed_moving(const MPoly& p, int from, int nvars, int to) {
    return p.with_nvars(nvars).substitute(from, MPoly::var(nvars, to));
}

struct MLess {
    bool operator()(const MPoly& a, const MPoly& b) const {
        if (a.nvars() != b.nvars()) return a.nvars() < b.nvars();
        return a.terms() < b.terms();
    }
};
using PolySet = std::set<MPoly, MLess>;

void add_poly(std::vector<MPoly>& out, PolySet& seen, const MPoly& p) {
    if (p.is_zero() || p.is_constant()) return;
    MPoly n = p.normalized();
    if (seen.insert(n).second) out.push_back(std::move(n));
}

/** Squarefree (wrt var) and pairwise-coprime refinement of a family: shared
    factors are split off so that pairwise resultants cannot vanish
    identically. Preserves the union of zero sets. */
std::vector<MPoly> refine_basis(const std::vector<MPoly>& polys, int var) {
    std::vector<MPoly> work;
    PolySet seen;
    for (auto& p : polys) {
        MPoly q = p.depends_on(var) ? squarefree_part(p, var) : p;
        add_poly(work, seen, q);
    }
    for (bool changed = true; changed;) {
        changed = false;
        for (size_t a = 0; a < work.size() && !changed; ++a) {
            for (size_t b = a + 1; b < work.size() && !changed; ++b) {
                MPoly g = mpoly_gcd(work[a], work[b]);
                if (g.is_constant()) continue;
                MPoly qa, qb;
                try {
                    qa = exact_div(work[a], g);
                    qb = exact_div(work[b], g);
                } catch (const std::domain_error&) {
                    continue;
                }
                std::vector<MPoly> next;
                PolySet nseen;
                for (size_t m = 0; m < work.size(); ++m)
                    if (m != a && m != b) add_poly(next, nseen, work[m]);
                add_poly(next, nseen, g);
                add_poly(next, nseen, qa);
                add_poly(next, nseen, qb);
                work = std::move(next);
                seen = std::move(nseen);
                changed = true;
            }
        }
    }
    return work;
}

/** Refine two roots (a strictly below b) until disjoint; rational between. */
Rat rational_between_roots(Tower& t, AlgRoot& a, AlgRoot& b) {
    for (int guard = 0; guard < kGuard; ++guard) {
        if (a.hi < b.lo) return simplest_rational_between(a.hi, b.lo);
        t.refine_root_step(a);
        t.refine_root_step(b);
    }
    throw std::runtime_error("rational_between_roots: did not converge");
}

/** Is ass(r) within the closed interval [-rad, rad]? */
bool within(Tower& t, AlgRoot& r, const Rat& rad, int var) {
    AlgRoot lo = exact_root(var + 1, var, -rad);
    AlgRoot hi = exact_root(var + 1, var, rad);
    return compare_roots(t, lo, r) != Cmp::GT && compare_roots(t, r, hi) != Cmp::GT;
}

void merge_tau(std::vector<ThomEncoding>& taus, ThomEncoding enc, Tower& t) {
    for (size_t pos = 0; pos < taus.size(); ++pos) {
        Cmp c = compare_roots(t, enc.root, taus[pos].root);
        if (c == Cmp::EQ) return;
        if (c == Cmp::LT) {
            taus.insert(taus.begin() + static_cast<long>(pos), std::move(enc));
            return;
        }
    }
    taus.push_back(std::move(enc));
}

/** Parameter-values polynomial where q vanishes somewhere on a branch of `a`
    without vanishing identically on it (plus degeneration loci of factors
    shared with q, on which q's sign is constantly zero). */
MPoly branch_interaction(MPoly a, const MPoly& q, int var) {
    if (q.is_zero()) return MPoly(a.nvars());
    MPoly acc = MPoly::constant(a.nvars(), Rat(1));
    for (int guard = 0; guard < 64; ++guard) {
        if (!a.depends_on(var)) return acc;
        MPoly g = mpoly_gcd(a, q);
        if (g.is_constant()) break;
        try {
            a = exact_div(a, g);
        } catch (const std::domain_error&) {
            break;
        }
        if (!g.depends_on(var)) acc = acc * g;
    }
    if (a.depends_on(var)) {
        MPoly R = resultant(a, q, var);
        if (!R.is_zero()) acc = acc * R;
    }
    return acc;
}

}  // namespace

std::vector<MPoly> project_once(const std::vector<MPoly>& polys, int var) {
    // canonical input for memoization: normalized, deduplicated, sorted
    std::vector<MPoly> canon;
    {
        PolySet cseen;
        for (auto& p : polys) add_poly(canon, cseen, p);
        std::sort(canon.begin(), canon.end(), MLess());
    }
    using Key = std::pair<int, std::vector<MPoly>>;
    struct KeyLess {
        bool operator()(const Key& x, const Key& y) const {
            if (x.first != y.first) return x.first < y.first;
            return std::lexicographical_compare(x.second.begin(), x.second.end(),
                                                y.second.begin(), y.second.end(), MLess());
        }
    };
    static std::map<Key, std::vector<MPoly>, KeyLess> memo;
    Key key{var, canon};
    auto it = memo.find(key);
    if (it != memo.end()) return it->second;

    std::vector<MPoly> basis = refine_basis(canon, var);
    std::vector<MPoly> out, dep;
    PolySet seen;
    for (auto& p : basis) {
        if (p.depends_on(var))
            dep.push_back(p);
        else
            add_poly(out, seen, p);
    }
    for (auto& p : dep) {
        for (auto& c : p.coeffs_wrt(var)) add_poly(out, seen, c);
        if (p.degree(var) >= 2) {
            MPoly d = resultant(p, p.derivative(var), var);
            if (!d.is_zero()) add_poly(out, seen, d);
        }
    }
    for (size_t a = 0; a < dep.size(); ++a)
        for (size_t b = a + 1; b < dep.size(); ++b) {
            MPoly r = resultant(dep[a], dep[b], var);
            if (!r.is_zero()) add_poly(out, seen, r);
        }
    memo.emplace(std::move(key), out);
    return out;
}

Rat big_enough_radius(TriThom& ctx, const std::vector<MPoly>& P, const Formula& phi, int k,
                      bool* empty_hint) {
    const int i = ctx.size();
    std::vector<MPoly> base;
    PolySet seen;
    for (auto& p : P) add_poly(base, seen, p.with_nvars(k));
    for (auto& p : collect_polys(phi)) add_poly(base, seen, p.with_nvars(k));

    bool any_root = false;
    Rat s(1);  // 1 + sum of squared per-coordinate bounds (keeps strictness)
    for (int j = i; j < k; ++j) {
        std::vector<MPoly> cur = base;
        for (int v = k - 1; v >= i; --v)
            if (v != j) cur = project_once(cur, v);
        Rat bound(1);
        for (auto& m : cur) {
            if (!m.depends_on(j)) continue;
            MPoly q = (j == i ? m : m.substitute(j, MPoly::var(k, i))).with_nvars(i + 1);
            std::vector<AlgRoot> roots;
            try {
                roots = isolate_over(ctx.tower, q);
            } catch (const std::domain_error&) {
                continue;
            }
            for (auto& r : roots) {
                any_root = true;
                refine_root(ctx.tower, r, Rat(1, 2));
                Rat a = rat_abs(r.lo), b = rat_abs(r.hi);
                Rat m2 = std::max(a, b) + 1;
                bound = std::max(bound, m2);
            }
        }
        s += bound * bound;
    }
    if (empty_hint) *empty_hint = !any_root;
    if (!any_root) return Rat(1);

    // rational upper bound on sqrt(s): Newton from above with coarse rounding
    Rat t = s < 1 ? Rat(1) : s;
    for (int step = 0; step < 12; ++step) {
        Rat n = (t + s / t) / 2;
        n = Rat(rat_floor(n * 64) + 1, 64);  // round up: stays >= sqrt(s)
        if (n >= t) break;
        t = n;
    }
    return t;
}

MorsePartition morse_partition(TriThom& ctx, const Rat& r, const std::vector<MPoly>& P,
                               const Formula& phi, int k) {
    const int i = ctx.size();
    std::vector<MPoly> fam;
    PolySet seen;
    for (auto& p : P) add_poly(fam, seen, p.with_nvars(k));
    for (auto& p : collect_polys(phi)) add_poly(fam, seen, p.with_nvars(k));
    for (int v = k - 1; v > i; --v) fam = project_once(fam, v);

    MorsePartition mp;
    mp.context = ctx;
    for (auto& m : fam) {
        if (!m.depends_on(i)) continue;
        MPoly q = m.with_nvars(i + 1);
        std::vector<ThomEncoding> encs;
        try {
            encs = isolate_with_thom(q, ctx);
        } catch (const std::domain_error&) {
            continue;
        }
        for (auto& e : encs)
            if (within(ctx.tower, e.root, r, i)) merge_tau(mp.taus, std::move(e), ctx.tower);
    }
    return mp;
}

namespace {

/** Smallest derivative-sign prefix length that distinguishes root `hit` from
    every other root in the list (at least 1: level-1 interactions also guard
    against new fiber roots appearing inside the slab). */
int distinguishing_prefix(const std::vector<AlgRoot>& roots, size_t hit, int df) {
    auto dsign = [](const AlgRoot& r, int m) {
        auto it = r.dsigns.find(m);
        return it == r.dsigns.end() ? 0 : it->second;
    };
    int L = 1;
    for (size_t m = 0; m < roots.size(); ++m) {
        if (m == hit) continue;
        int l = 1;
        while (l <= df && dsign(roots[m], l) == dsign(roots[hit], l)) ++l;
        L = std::max(L, l);
    }
    return std::min(L, df);
}

/** Branches of the fiber over the sample that lie in S, for k - i == 2:
    one curve per in-S root of a family member, plus the parameter values
    where any derivative can change sign along a branch (fed back into the
    partition so the branch sign vectors stay constant across the slab). */
void build_slab_k2(TriThom& ctx, const std::vector<MPoly>& P, const Formula& phi2, int k,
                   const ThomEncoding& t1e, const ThomEncoding& t2e, SlabData& sd,
                   std::vector<MPoly>& fresh, PolySet& fresh_seen) {
    const int i = ctx.size();
    Tower t = ctx.tower.clone();
    t.push_level(exact_root(i + 1, i, sd.sample));
    std::vector<AlgRoot> taken;  // cross-polynomial deduplication
    for (auto& p : P) {
        if (!p.depends_on(i + 1)) continue;
        MPoly f = squarefree_part(p, i + 1).normalized();
        std::vector<AlgRoot> roots;
        try {
            roots = isolate_over(t, f);
        } catch (const std::domain_error&) {
            continue;
        }
        const int d = f.degree(i + 1);
        for (size_t ri = 0; ri < roots.size(); ++ri) {
            AlgRoot& root = roots[ri];
            bool dup = false;
            for (auto& r0 : taken)
                if (compare_roots(t, root, r0) == Cmp::EQ) {
                    dup = true;
                    break;
                }
            if (dup) continue;
            taken.push_back(root);
            Tower tf = t.clone();
            tf.push_level(root);
            if (!formula_holds_at(phi2, tf)) continue;
            const int L = distinguishing_prefix(roots, ri, d);
            CurveSegRep c;
            c.ctx = ctx;
            c.k = k;
            c.tau1 = t1e;
            c.tau2 = t2e;
            c.f = f;
            c.g0 = MPoly::constant(k, Rat(1));
            c.g = {MPoly::var(k, i + 1)};
            c.rho.assign(static_cast<size_t>(L) + 1, 0);
            for (auto& [m, sg] : root.dsigns)
                if (m <= L) c.rho[static_cast<size_t>(m)] = sg;
            MPoly der = f;
            for (int l = 1; l <= std::min(L, d - 1); ++l) {
                der = der.derivative(i + 1);
                MPoly bi = branch_interaction(f, der, i + 1);
                if (!bi.is_constant() && bi.depends_on(i))
                    add_poly(fresh, fresh_seen, squarefree_part(bi.with_nvars(i + 1), i));
            }
            sd.curves.push_back(std::move(c));
        }
    }
}

/** Slab-independent part of the space-curve representation for a pair
    (q, p) and a primitive-element mix T = z + c*y: the eliminated defining
    polynomial f restricted to the components shared with q and p (global
    gcd certificates baked in), the rational coordinate functions, and the
    partition-refinement polynomials. Memoized: the same pair recurs across
    every slab and every stacked branch. */
struct SpaceCurveData {
    bool viable = false;
    MPoly f, g0, gy, gz;          // in (ctx, u, T) = i + 2 vars
    MPoly S1, sc1;                // pointwise certificate polynomials (k vars)
    std::vector<MPoly> fresh;     // always-needed refinements (i + 1 vars)
    std::vector<MPoly> fresh_der; // derivative interactions, filled on demand
    MPoly der_cursor;             // last derivative of f computed
    int der_done = 0;
};

SpaceCurveData& space_curve_data(const MPoly& q, const MPoly& p, int cmix, int i, int k) {
    using Key = std::pair<std::pair<MPoly, MPoly>, int>;
    struct KeyLess {
        bool operator()(const Key& x, const Key& y) const {
            MLess less;
            if (less(x.first.first, y.first.first)) return true;
            if (less(y.first.first, x.first.first)) return false;
            if (less(x.first.second, y.first.second)) return true;
            if (less(y.first.second, x.first.second)) return false;
            return x.second < y.second;
        }
    };
    static std::map<Key, SpaceCurveData, KeyLess> memo;
    Key key{{q, p}, cmix};
    auto it = memo.find(key);
    if (it != memo.end()) return it->second;
    SpaceCurveData D;

    auto done = [&]() -> SpaceCurveData& {
        return memo.emplace(std::move(key), std::move(D)).first->second;
    };

    MPoly zsub = MPoly::var(k, i + 2) - MPoly::var(k, i + 1) * Rat(cmix);
    MPoly pt = p.substitute(i + 2, zsub);  // z := T - c*y
    MPoly f3 = resultant(q, pt, i + 1);    // eliminate Y -> (ctx, u, T)
    if (f3.is_zero() || !f3.depends_on(i + 2)) return done();
    MPoly f = f3.substitute(i + 2, MPoly::var(k, i + 1)).with_nvars(i + 2);
    f = squarefree_part(f, i + 1).normalized();
    if (!f.depends_on(i + 1)) return done();

    // first subresultant in Y: when the fiber gcd is linear, y = -s0/s1
    auto chain = subresultant_chain(q, pt, i + 1);
    if (chain.size() < 2 || chain[1].is_zero()) return done();
    MPoly S1 = chain[1];
    auto sc = S1.coeffs_wrt(i + 1);
    if (sc.size() < 2 || sc[1].is_zero()) return done();

    auto lower = [&](const MPoly& m) {
        return m.substitute(i + 2, MPoly::var(k, i + 1)).with_nvars(i + 2);
    };
    MPoly g0 = lower(sc[1]);
    MPoly gy = -lower(sc[0]);
    MPoly gz = g0 * MPoly::var(i + 2, i + 1) + lower(sc[0]) * Rat(cmix);

    // global certificates: restrict f to the components on which the
    // numerators of q(x, gy/g0) and p(x, gy/g0, T) vanish identically, so
    // every retained branch stays on q and p across the whole slab
    auto compose = [&](const MPoly& w) {
        auto cs = w.coeffs_wrt(i + 1);
        MPoly acc(i + 2);
        MPoly ypow = MPoly::constant(i + 2, Rat(1));
        std::vector<MPoly> g0pow(cs.size(), MPoly::constant(i + 2, Rat(1)));
        for (size_t d = 1; d < cs.size(); ++d) g0pow[d] = g0pow[d - 1] * g0;
        for (size_t d = 0; d < cs.size(); ++d) {
            acc = acc + lower(cs[d]) * ypow * g0pow[cs.size() - 1 - d];
            if (d + 1 < cs.size()) ypow = ypow * gy;
        }
        return acc;
    };
    for (const MPoly& star : {compose(q), compose(pt)}) {
        if (star.is_zero()) continue;
        MPoly G = mpoly_gcd(f, star);
        if (G.is_constant() || !G.depends_on(i + 1)) return done();
        f = squarefree_part(G, i + 1).normalized();
    }

    // always-needed partition refinements: denominator interaction and the
    // leading coefficient (root count changes; level-df sign constancy)
    auto push_fresh = [&](const MPoly& m) {
        if (m.is_zero() || m.is_constant() || !m.depends_on(i)) return;
        D.fresh.push_back(squarefree_part(m.with_nvars(i + 1), i).normalized());
    };
    push_fresh(branch_interaction(f, g0, i + 1));
    push_fresh(f.leading_coeff(i + 1));

    D.der_cursor = f;
    D.viable = true;
    D.f = std::move(f);
    D.g0 = std::move(g0);
    D.gy = std::move(gy);
    D.gz = std::move(gz);
    D.S1 = std::move(S1);
    D.sc1 = std::move(sc[1]);
    return done();
}

/** Compute derivative interaction resultants of f up to level L (lazily). */
void ensure_der_levels(SpaceCurveData& D, int L, int i) {
    const int df = D.f.degree(i + 1);
    L = std::min(L, df - 1);
    while (D.der_done < L) {
        D.der_cursor = D.der_cursor.derivative(i + 1);
        ++D.der_done;
        MPoly bi = branch_interaction(D.f, D.der_cursor, i + 1);
        if (!bi.is_zero() && !bi.is_constant() && bi.depends_on(i))
            D.fresh_der.push_back(squarefree_part(bi.with_nvars(i + 1), i).normalized());
    }
}

/** Curve segment representation for one (y-branch of q, z-root of p) stack
    over the slab sample, for k - i == 3. A primitive element T = z + c*y is
    chosen so that y and z are rational in (x, T) via the first subresultant
    of (q, p) in y; the shared-component restriction of f certifies that the
    branch stays on q and p across the slab. */
CurveSegRep build_space_curve(TriThom& ctx, int k, const MPoly& q, const MPoly& p, Tower& t1,
                              Tower& t3, const ThomEncoding& ta, const ThomEncoding& tb,
                              std::vector<MPoly>& fresh, PolySet& fresh_seen) {
    const int i = ctx.size();  // u = var i, Y = var i+1, Z / T = var i+2
    for (int cmix = 0; cmix <= 6; ++cmix) {
        SpaceCurveData& D = space_curve_data(q, p, cmix, i, k);
        if (!D.viable) continue;

        // identify the branch root t* = z* + c*y* among the roots of f
        std::vector<AlgRoot> cands;
        try {
            cands = isolate_over(t1, D.f);
        } catch (const std::domain_error&) {
            continue;
        }
        MPoly tgt_anchor = MPoly::var(k + 1, k) - MPoly::var(k + 1, i + 2) -
                           MPoly::var(k + 1, i + 1) * Rat(cmix);
        std::vector<AlgRoot> tgt = isolate_over(t3, tgt_anchor);
        if (tgt.size() != 1) continue;
        int hit = -1;
        MPoly f_top = embed_moving(D.f, i + 1, k + 1, k);
        for (size_t m = 0; m < cands.size() && hit < 0; ++m) {
            AlgRoot ce = cands[m];
            ce.anchor = f_top;
            ce.dsigns.clear();
            if (compare_roots(t3, ce, tgt[0]) == Cmp::EQ) hit = static_cast<int>(m);
        }
        if (hit < 0) continue;

        // pointwise certificates at the sample: linear gcd and y* = -s0/s1
        Tower t4 = t3.clone();
        t4.pop_level();  // (ctx, u, y)
        {
            AlgRoot tr = cands[static_cast<size_t>(hit)];
            tr.anchor = embed_moving(D.f, i + 1, k, i + 2);
            t4.push_level(tr);  // (ctx, u, y, t*)
        }
        if (t4.sign_mpoly(D.sc1, k) == 0) continue;
        if (t4.sign_mpoly(D.S1, k) != 0) continue;

        const int df = D.f.degree(i + 1);
        const int L = distinguishing_prefix(cands, static_cast<size_t>(hit), df);
        ensure_der_levels(D, L, i);
        for (auto& m : D.fresh) add_poly(fresh, fresh_seen, m);
        for (auto& m : D.fresh_der) add_poly(fresh, fresh_seen, m);

        CurveSegRep c;
        c.ctx = ctx;
        c.k = k;
        c.tau1 = ta;
        c.tau2 = tb;
        c.f = D.f;
        c.g0 = D.g0;
        c.g = {D.gy, D.gz};
        c.rho.assign(static_cast<size_t>(L) + 1, 0);
        for (auto& [m, sg] : cands[static_cast<size_t>(hit)].dsigns)
            if (m <= L) c.rho[static_cast<size_t>(m)] = sg;
        return c;
    }
    throw std::runtime_error("curve_segments: no separating coordinate mix certified");
}

void build_slab_k3(TriThom& ctx, const std::vector<MPoly>& P, const std::vector<MPoly>& G,
                   const Formula& phi2, int k, const ThomEncoding& t1e, const ThomEncoding& t2e,
                   SlabData& sd, std::vector<MPoly>& fresh, PolySet& fresh_seen) {
    const int i = ctx.size();
    Tower t1 = ctx.tower.clone();
    t1.push_level(exact_root(i + 1, i, sd.sample));
    std::vector<std::pair<AlgRoot, MPoly>> ybr;
    for (auto& qq : G) {
        if (!qq.depends_on(i + 1)) continue;
        MPoly q = squarefree_part(qq, i + 1).normalized();
        std::vector<AlgRoot> roots;
        try {
            roots = isolate_over(t1, q);
        } catch (const std::domain_error&) {
            continue;
        }
        for (auto& r : roots) {
            bool dup = false;
            for (auto& [r0, q0] : ybr)
                if (compare_roots(t1, r, r0) == Cmp::EQ) {
                    dup = true;
                    break;
                }
            if (!dup) ybr.emplace_back(std::move(r), q);
        }
    }
    for (auto& [yroot, q] : ybr) {
        Tower t2 = t1.clone();
        t2.push_level(yroot);
        std::vector<std::pair<AlgRoot, MPoly>> zbr;
        for (auto& pp : P) {
            if (!pp.depends_on(i + 2)) continue;
            MPoly p = squarefree_part(pp, i + 2).normalized();
            std::vector<AlgRoot> roots;
            try {
                roots = isolate_over(t2, p);
            } catch (const std::domain_error&) {
                continue;
            }
            for (auto& r : roots) {
                bool dup = false;
                for (auto& [r0, p0] : zbr)
                    if (compare_roots(t2, r, r0) == Cmp::EQ) {
                        dup = true;
                        break;
                    }
                if (!dup) zbr.emplace_back(std::move(r), p);
            }
        }
        for (auto& [zroot, p] : zbr) {
            Tower t3 = t2.clone();
            t3.push_level(zroot);
            if (!formula_holds_at(phi2, t3)) continue;
            sd.curves.push_back(build_space_curve(ctx, k, q.with_nvars(k), p.with_nvars(k), t1,
                                                  t3, t1e, t2e, fresh, fresh_seen));
        }
    }
}

/** Two branches over the same slab must be disjoint; verified at the sample
    by refining their evaluation boxes apart. */
void assert_disjoint_at(CurveSegRep& a, CurveSegRep& b, const Rat& x) {
    Rat w(1, 8);
    for (int it = 0; it < 16; ++it, w = w / 16) {
        auto ba = curve_eval(a, x, w);
        auto bb = curve_eval(b, x, w);
        for (size_t j = 0; j < ba.size(); ++j)
            if (ba[j].hi < bb[j].lo || bb[j].hi < ba[j].lo) return;
    }
    throw std::runtime_error("curve_segments: branches not disjoint at the sample");
}

CurveSegments curve_segments_impl(TriThom& ctx, const std::vector<MPoly>& Pin,
                                  const Formula& phi, int k, const Rat& radius_hint,
                                  const std::vector<MPoly>& extra_u_polys) {
    const int i = ctx.size();
    if (k - i < 2) throw std::logic_error("curve_segments: needs two or more moving coordinates");
    if (k - i > 3) throw std::logic_error("curve_segments: supports at most three moving coordinates");
    std::vector<MPoly> P;
    PolySet pseen;
    for (auto& p : Pin) add_poly(P, pseen, p.with_nvars(k));
    for (auto& p : collect_polys(phi)) add_poly(P, pseen, p.with_nvars(k));
    Rat r = radius_hint > 0 ? radius_hint : big_enough_radius(ctx, P, phi, k);

    MPoly ball = MPoly::constant(k, -r * r);
    for (int v = i; v < k; ++v) ball = ball + MPoly::var(k, v, 2);
    Formula phi2 = Formula::conj({phi, Formula::atom(ball, Rel::LE)});
    add_poly(P, pseen, ball);

    std::vector<MPoly> G;  // level-2 family for three moving coordinates
    std::vector<MPoly> part;
    PolySet part_seen;
    {
        std::vector<MPoly> top;
        if (k - i == 3) {
            G = project_once(P, i + 2);
            top = project_once(G, i + 1);
        } else {
            top = project_once(P, i + 1);
        }
        for (auto& m : top)
            if (m.depends_on(i)) add_poly(part, part_seen, m.with_nvars(i + 1));
        for (auto& m : extra_u_polys)
            if (m.depends_on(i)) add_poly(part, part_seen, m.with_nvars(i + 1));
    }

    CurveSegments out;
    out.radius = r;
    out.partition.context = ctx;
    for (int round = 0;; ++round) {
        if (round >= 8) throw std::runtime_error("curve_segments: partition did not stabilize");
        std::vector<ThomEncoding> taus;
        for (auto& m : part) {
            long t0 = trace_on() ? now_ms() : 0;
            if (trace_on())
                std::cerr << "[cs] round " << round << " part deg=" << m.degree(i)
                          << " terms=" << m.terms().size() << std::endl;
            std::vector<ThomEncoding> encs;
            try {
                encs = isolate_with_thom(m, ctx);
            } catch (const std::domain_error&) {
                continue;
            }
            for (auto& e : encs)
                if (within(ctx.tower, e.root, r, i)) merge_tau(taus, std::move(e), ctx.tower);
            if (trace_on()) std::cerr << "[cs]   isolated in " << now_ms() - t0 << " ms" << std::endl;
        }
        out.partition.taus = taus;
        out.slabs.clear();
        std::vector<MPoly> fresh;
        PolySet fresh_seen = part_seen;
        for (size_t j = 0; j + 1 < taus.size(); ++j) {
            SlabData sd;
            sd.sample = rational_between_roots(ctx.tower, taus[j].root, taus[j + 1].root);
            long t0 = trace_on() ? now_ms() : 0;
            if (trace_on())
                std::cerr << "[cs] round " << round << " slab " << j << " sample=" << sd.sample
                          << std::endl;
            if (k - i == 2)
                build_slab_k2(ctx, P, phi2, k, taus[j], taus[j + 1], sd, fresh, fresh_seen);
            else
                build_slab_k3(ctx, P, G, phi2, k, taus[j], taus[j + 1], sd, fresh, fresh_seen);
            if (trace_on())
                std::cerr << "[cs]   slab built in " << now_ms() - t0 << " ms, "
                          << sd.curves.size() << " curves" << std::endl;
            out.slabs.push_back(std::move(sd));
        }
        if (fresh.empty()) break;
        bool new_value = false;
        for (auto& m : fresh) {
            long t0 = trace_on() ? now_ms() : 0;
            if (trace_on())
                std::cerr << "[cs] round " << round << " fresh deg=" << m.degree(i)
                          << " terms=" << m.terms().size() << std::endl;
            std::vector<ThomEncoding> encs;
            try {
                encs = isolate_with_thom(m, ctx);
            } catch (const std::domain_error&) {
                continue;
            }
            for (auto& e : encs) {
                if (!within(ctx.tower, e.root, r, i)) continue;
                bool dup = false;
                for (auto& tv : out.partition.taus)
                    if (compare_roots(ctx.tower, e.root, tv.root) == Cmp::EQ) {
                        dup = true;
                        break;
                    }
                if (!dup) {
                    new_value = true;
                    break;
                }
            }
            if (trace_on())
                std::cerr << "[cs]   fresh checked in " << now_ms() - t0 << " ms" << std::endl;
            if (new_value) break;
        }
        for (auto& m : fresh) {
            part.push_back(m);
            part_seen.insert(m);
        }
        if (!new_value) break;
    }

    for (auto& sd : out.slabs) {
        for (auto& c : sd.curves) {
            long t0 = trace_on() ? now_ms() : 0;
            sd.ends.push_back(curve_endpoints(c));
            if (trace_on())
                std::cerr << "[cs] endpoints at sample " << sd.sample << " in " << now_ms() - t0
                          << " ms" << std::endl;
        }
        for (size_t a = 0; a < sd.curves.size(); ++a)
            for (size_t b = a + 1; b < sd.curves.size(); ++b)
                assert_disjoint_at(sd.curves[a], sd.curves[b], sd.sample);
    }
    return out;
}

int add_vertex(SkeletonNet& net, RUR v) {
    for (size_t m = 0; m < net.vertices.size(); ++m)
        if (same_point(net.vertices[m], v)) return static_cast<int>(m);
    net.vertices.push_back(std::move(v));
    return static_cast<int>(net.vertices.size()) - 1;
}

/** Coordinate i of a triangular RUR as a refinable root handle. */
AlgRoot coord_root(const RUR& u, int i) {
    if (i < u.i()) {
        const Tower::Level& lv = u.ctx.tower.levels[static_cast<size_t>(i)];
        AlgRoot r;
        r.anchor = lv.anchor;
        r.lo = lv.lo;
        r.hi = lv.hi;
        r.sign_lo = lv.sign_at_lo;
        return r;
    }
    return u.tau.root;
}

MPoly coord_poly(const RUR& u, int i) {
    if (i < u.i()) return u.ctx.coords[static_cast<size_t>(i)].poly;
    return u.tau.poly;
}

/** Base case of the recursion (one moving coordinate): partition the line by
    all family roots plus the M-point projections; root cells in S become
    vertices, interval cells in S become parameter-only edges. */
SkeletonNet base_case(TriThom& ctx, const std::vector<MPoly>& Pin, const Formula& phi,
                      const std::vector<RUR>& M, int k) {
    std::vector<MPoly> P;
    PolySet seen;
    for (auto& p : Pin) add_poly(P, seen, p.with_nvars(k));
    for (auto& p : collect_polys(phi)) add_poly(P, seen, p.with_nvars(k));
    for (auto& u : M) {
        // eliminate T from { f = 0, X_k * g0 - g_k = 0 }: pins pi_k(ass u)
        MPoly fe = embed_moving(u.f, k - 1, k + 1, k);
        MPoly g0e = embed_moving(u.g0, k - 1, k + 1, k);
        MPoly ge = embed_moving(u.g.back(), k - 1, k + 1, k);
        MPoly Ru = resultant(fe, MPoly::var(k + 1, k - 1) * g0e - ge, k).with_nvars(k);
        if (Ru.depends_on(k - 1)) add_poly(P, seen, squarefree_part(Ru, k - 1));
    }

    std::vector<ThomEncoding> roots;
    for (auto& p : P) {
        if (!p.depends_on(k - 1)) continue;
        std::vector<ThomEncoding> encs;
        try {
            encs = isolate_with_thom(p, ctx);
        } catch (const std::domain_error&) {
            continue;
        }
        for (auto& e : encs) merge_tau(roots, std::move(e), ctx.tower);
    }

    SkeletonNet net;
    auto sample_in_s = [&](const Rat& s) {
        Tower t = ctx.tower.clone();
        t.push_level(exact_root(k, k - 1, s));
        return formula_holds_at(phi, t);
    };
    if (roots.empty()) {
        if (sample_in_s(Rat(0)))
            throw std::runtime_error("one_dim_subset: fiber is unbounded");
        return net;
    }
    std::vector<int> root_vertex(roots.size(), -1);
    for (size_t m = 0; m < roots.size(); ++m) {
        Tower t = ctx.tower.clone();
        t.push_level(roots[m].root);
        if (!formula_holds_at(phi, t)) continue;
        TriThom full = ctx;
        full.extend(roots[m]);
        root_vertex[m] = add_vertex(net, make_triangular_rur(full, k));
    }
    {
        refine_root(ctx.tower, roots.front().root, Rat(1));
        refine_root(ctx.tower, roots.back().root, Rat(1));
        if (sample_in_s(roots.front().root.lo - 1) || sample_in_s(roots.back().root.hi + 1))
            throw std::runtime_error("one_dim_subset: fiber is unbounded");
    }
    std::vector<int> group;
    for (size_t m = 0; m + 1 < roots.size(); ++m) {
        Rat s = rational_between_roots(ctx.tower, roots[m].root, roots[m + 1].root);
        if (!sample_in_s(s)) continue;
        if (root_vertex[m] < 0 || root_vertex[m + 1] < 0)
            throw std::runtime_error("one_dim_subset: realization is not closed");
        CurveSegRep c;
        c.ctx = ctx;
        c.k = k;
        c.tau1 = roots[m];
        c.tau2 = roots[m + 1];
        c.f = MPoly::var(k + 1, k) - MPoly::var(k + 1, k - 1);
        c.g0 = MPoly::constant(k + 1, Rat(1));
        c.rho = {0, 1};
        net.edges.push_back(std::move(c));
        net.left.push_back(root_vertex[m]);
        net.right.push_back(root_vertex[m + 1]);
        group.push_back(static_cast<int>(net.edges.size()) - 1);
    }
    net.groups.push_back(std::move(group));
    return net;
}

SkeletonNet one_dim_subset_impl(TriThom& ctx, const std::vector<MPoly>& P, const Formula& phi,
                                const std::vector<RUR>& M, int k, const Rat& radius_hint) {
    const int i = ctx.size();
    if (k - i == 1) return base_case(ctx, P, phi, M, k);

    std::vector<MPoly> extra;
    for (auto& u : M) extra.push_back(coord_poly(u, i));
    CurveSegments cs = curve_segments_impl(ctx, P, phi, k, radius_hint, extra);

    SkeletonNet net;
    std::vector<RUR> ends_pool;
    for (auto& sd : cs.slabs) {
        std::vector<int> group;
        for (size_t e = 0; e < sd.curves.size(); ++e) {
            net.edges.push_back(sd.curves[e]);
            net.left.push_back(add_vertex(net, sd.ends[e].first));
            net.right.push_back(add_vertex(net, sd.ends[e].second));
            group.push_back(static_cast<int>(net.edges.size()) - 1);
            ends_pool.push_back(sd.ends[e].first);
            ends_pool.push_back(sd.ends[e].second);
        }
        net.groups.push_back(std::move(group));
    }

    for (auto& tau : cs.partition.taus) {
        std::vector<RUR> Mt;
        auto matches = [&](const RUR& u) {
            AlgRoot a = coord_root(u, i), b = tau.root;
            return compare_roots(ctx.tower, a, b) == Cmp::EQ;
        };
        for (auto& u : M)
            if (matches(u)) Mt.push_back(u);
        for (auto& u : ends_pool)
            if (matches(u)) Mt.push_back(u);
        TriThom ctx2 = ctx;
        ctx2.extend(tau);
        SkeletonNet sub = one_dim_subset_impl(ctx2, P, phi, Mt, k, cs.radius);
        std::vector<int> vmap(sub.vertices.size());
        for (size_t m = 0; m < sub.vertices.size(); ++m)
            vmap[m] = add_vertex(net, std::move(sub.vertices[m]));
        const int base_e = static_cast<int>(net.edges.size());
        for (size_t e = 0; e < sub.edges.size(); ++e) {
            net.edges.push_back(std::move(sub.edges[e]));
            net.left.push_back(vmap[static_cast<size_t>(sub.left[e])]);
            net.right.push_back(vmap[static_cast<size_t>(sub.right[e])]);
        }
        for (auto& gr : sub.groups) {
            for (auto& e : gr) e += base_e;
            net.groups.push_back(std::move(gr));
        }
    }
    return net;
}

}  // namespace

CurveSegments curve_segments(TriThom& ctx, const std::vector<MPoly>& P, const Formula& phi,
                             int k, const Rat& radius_hint) {
    return curve_segments_impl(ctx, P, phi, k, radius_hint, {});
}

SkeletonNet one_dim_subset(TriThom& ctx, const std::vector<MPoly>& P, const Formula& phi,
                           const std::vector<RUR>& M, int k) {
    return one_dim_subset_impl(ctx, P, phi, M, k, Rat(0));
}

}  // namespace sah
