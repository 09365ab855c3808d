#include "sah/reps.hpp"

#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <iostream>
#include <map>
#include <stdexcept>

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

/** Sign of g at the tower point extended by root r (g may use var height). */
int sign_at_root(Tower& t, const MPoly& g, const AlgRoot& r) {
    if (r.exact()) return t.sign_mpoly(g.substitute(t.height(), r.lo), t.height());
    return t.sign_with_root(g, r);
}

/** The unique fiber root whose derivative sign vector matches rho. */
AlgRoot select_branch_root(std::vector<AlgRoot> roots, const std::vector<int>& rho) {
    std::vector<AlgRoot> hits;
    for (auto& r : roots) {
        bool ok = true;
        for (size_t m = 1; m < rho.size() && ok; ++m) {
            auto it = r.dsigns.find(static_cast<int>(m));
            int got = it == r.dsigns.end() ? 0 : it->second;
            if (got != rho[m]) ok = false;
        }
        if (ok) hits.push_back(std::move(r));
    }
    if (hits.empty()) throw std::domain_error("curve: no fiber root matches the branch sign vector");
    if (hits.size() > 1) throw std::logic_error("curve: branch sign vector is ambiguous");
    return hits.front();
}

/** Refine two distinct roots (a < b) until disjoint; rational strictly between. */
Rat rational_between_roots(Tower& t, AlgRoot a, AlgRoot b) {
    for (int guard = 0; guard < kGuard; ++guard) {
        if (a.hi < b.lo) return simplest_rational_between(a.hi, b.lo);
        t.refine_root_step(a);
        t.refine_root_step(b);
    }
    throw std::runtime_error("rational_between_roots: did not converge");
}

/** Append the quotient coordinates g_j/g0 at (point-box, root) until every
    output side is narrower than width. `t` already holds all fixed levels. */
std::vector<Ivl> quotient_box(Tower& t, AlgRoot r, const MPoly& g0, const std::vector<MPoly>& g,
                              const Rat& width) {
    if (sign_at_root(t, g0, r) == 0) throw std::domain_error("rur: g0 vanishes at the root");
    for (int guard = 0; guard < kGuard; ++guard) {
        std::vector<Ivl> box = t.point_box();
        box.emplace_back(r.lo, r.hi);
        std::vector<Ivl> out(box.begin(), box.end() - 1);
        bool ok = true;
        Ivl d = eval_box(g0, box);
        if (d.contains_zero()) {
            ok = false;
        } else {
            for (auto& gj : g) {
                Ivl q = eval_box(gj, box) * d.inverse();
                if (q.width() >= width) ok = false;
                out.push_back(q);
            }
        }
        for (auto& side : out)
            if (side.width() >= width) ok = false;
        if (ok) return out;
        t.refine_all();
        t.refine_root_step(r);
    }
    throw std::runtime_error("quotient_box: did not converge");
}

/** Newton interpolation through (xs[j], vals[j]) with polynomial values. */
MPoly newton_interp(const std::vector<Rat>& xs, std::vector<MPoly> vals, int var, int n) {
    for (size_t lev = 1; lev < vals.size(); ++lev)
        for (size_t j = vals.size(); j-- > lev;)
            vals[j] = (vals[j] - vals[j - 1]) * (Rat(1) / (xs[j] - xs[j - lev]));
    MPoly acc(n);
    for (size_t j = vals.size(); j-- > 0;)
        acc = acc * (MPoly::var(n, var) - MPoly::constant(n, xs[j])) + vals[j];
    return acc;
}

/** Exact resultant of two univariate rational polynomials (Euclidean). */
Rat ures(UPoly a, UPoly b) {
    Rat acc(1);
    int sign = 1;
    for (;;) {
        int da = a.degree(), db = b.degree();
        if (da < 0 || db < 0) return Rat(0);
        if (db == 0) {
            Rat r = acc;
            for (int j = 0; j < da; ++j) r *= b.c[0];
            return sign > 0 ? r : -r;
        }
        UPoly r = a.rem(b);
        int dr = r.degree();
        for (int j = 0; j < da - dr; ++j) acc *= b.c.back();
        if ((da % 2) && (db % 2)) sign = -sign;
        a = std::move(b);
        b = std::move(r);
    }
}

/** Resultant wrt Tvar via interpolation on uvar (and on a linear extra
    variable inside h, when present), for inputs depending on no other
    variables. Much faster than a Sylvester determinant with polynomial
    entries when the inputs have high degree in both uvar and Tvar. */
MPoly res_interp_u(const MPoly& fE, const MPoly& h, int Tvar, int uvar) {
    const int n = fE.nvars();
    const int dft = fE.degree(Tvar), dht = h.degree(Tvar);
    const long Du = static_cast<long>(fE.degree(uvar)) * dht +
                    static_cast<long>(h.degree(uvar)) * dft;
    int Xvar = -1;
    for (int v = 0; v < n; ++v)
        if (v != Tvar && v != uvar && h.degree(v) > 0) Xvar = v;
    MPoly lcf = fE.leading_coeff(Tvar);
    MPoly lch = h.leading_coeff(Tvar);
    std::vector<Rat> xs;
    std::vector<MPoly> vals;
    for (long j = 0; static_cast<long>(xs.size()) <= Du; ++j) {
        Rat u = Rat(j % 2 == 0 ? j / 2 : -(j / 2 + 1));
        // specialization must preserve both leading coefficients
        if (lcf.substitute(uvar, u).is_zero() || lch.substitute(uvar, u).is_zero()) continue;
        MPoly fj = fE.substitute(uvar, u);
        MPoly hj = h.substitute(uvar, u);
        UPoly fu = UPoly::from_mpoly(fj, Tvar);
        if (Xvar < 0 || hj.degree(Xvar) == 0) {
            vals.push_back(MPoly::constant(n, ures(fu, UPoly::from_mpoly(hj, Tvar))));
        } else {
            const long Dx = static_cast<long>(hj.degree(Xvar)) * dft;
            MPoly lchj = hj.leading_coeff(Tvar);
            std::vector<Rat> xxs;
            std::vector<MPoly> xvals;
            for (long l = 0; static_cast<long>(xxs.size()) <= Dx; ++l) {
                Rat x = Rat(l % 2 == 0 ? l / 2 : -(l / 2 + 1));
                if (lchj.substitute(Xvar, x).is_zero()) continue;
                Rat v = ures(fu, UPoly::from_mpoly(hj.substitute(Xvar, x), Tvar));
                xvals.push_back(MPoly::constant(n, v));
                xxs.push_back(x);
            }
            vals.push_back(newton_interp(xxs, xvals, Xvar, n));
        }
        xs.push_back(u);
    }
    return newton_interp(xs, std::move(vals), uvar, n);
}

}  // namespace

const MPoly& branch_image_anchor(const MPoly& f, const MPoly& g0, const MPoly& gj, int i) {
    struct MLess {
        bool operator()(const MPoly& a, const MPoly& b) const {
            if (a.nvars() != b.nvars()) return a.nvars() < b.nvars();
            return a.terms() < b.terms();
        }
    };
    using Key = std::vector<MPoly>;
    struct KeyLess {
        bool operator()(const Key& x, const Key& y) const {
            return std::lexicographical_compare(x.begin(), x.end(), y.begin(), y.end(), MLess());
        }
    };
    static std::map<Key, MPoly, KeyLess> memo;
    Key key{f, g0, gj};
    auto it = memo.find(key);
    if (it != memo.end()) return it->second;

    const int n = i + 3;  // (ctx..., u, T, X)
    MPoly fE = f.with_nvars(n);
    MPoly h = MPoly::var(n, n - 1) * g0.with_nvars(n) - gj.with_nvars(n);
    if (h.degree(i + 1) >= fE.degree(i + 1) && fE.degree(i + 1) >= 1) h = prem(h, fE, i + 1);
    if (trace_on())
        std::cerr << "[ep] res inputs: f degT=" << fE.degree(i + 1) << " degu=" << fE.degree(i)
                  << " terms=" << fE.terms().size() << "; h degT=" << h.degree(i + 1)
                  << " degu=" << h.degree(i) << " terms=" << h.terms().size() << std::endl;
    MPoly anchor(n);
    if (!h.is_zero()) {
        bool bivar = true;  // inputs free of context variables?
        for (int v = 0; v < i && bivar; ++v)
            if (fE.degree(v) > 0 || h.degree(v) > 0) bivar = false;
        anchor = bivar && fE.degree(i + 1) >= 1 && h.degree(i + 1) >= 1
                     ? res_interp_u(fE, h, i + 1, i)
                     : resultant(fE, h, i + 1);
    }
    // drop the X variable to slot i+1 and strip u-only content (it carries no
    // information about the limit coordinate and can only degenerate fibers)
    anchor = anchor.substitute(n - 1, MPoly::var(n, i + 1)).with_nvars(i + 2);
    if (anchor.degree(i + 1) >= 1) {
        auto cs = anchor.coeffs_wrt(i + 1);
        MPoly cont(i + 2);
        for (auto& c : cs)
            if (!c.is_zero()) cont = cont.is_zero() ? c : mpoly_gcd(cont, c);
        if (!cont.is_constant()) anchor = exact_div(anchor, cont);
        anchor = squarefree_part(anchor, i + 1).normalized();
    }
    return memo.emplace(std::move(key), std::move(anchor)).first->second;
}

std::vector<Ivl> rur_point(RUR& u, const Rat& width) {
    if (static_cast<int>(u.g.size()) != u.k - u.i())
        throw std::logic_error("rur_point: coordinate count mismatch");
    Tower t = u.ctx.tower.clone();
    return quotient_box(t, u.tau.root, u.g0, u.g, width);
}

std::vector<Ivl> curve_eval(CurveSegRep& c, const Rat& x, const Rat& width) {
    const int i = c.i();
    if (static_cast<int>(c.g.size()) != c.k - i - 1)
        throw std::logic_error("curve_eval: coordinate count mismatch");
    Tower t = c.ctx.tower.clone();
    {
        AlgRoot xv = exact_root(i + 1, i, x);
        AlgRoot a = c.tau1.root, b = c.tau2.root;
        if (compare_roots(t, a, xv) != Cmp::LT || compare_roots(t, xv, b) != Cmp::LT)
            throw std::domain_error("curve_eval: x outside the parameter interval");
    }
    t.push_level(exact_root(i + 1, i, x));
    if (c.g.empty()) {
        // the parameter is the last coordinate: the point is (ass(ctx), x)
        for (int guard = 0; guard < kGuard; ++guard) {
            std::vector<Ivl> out = t.point_box();
            bool ok = true;
            for (auto& side : out)
                if (side.width() >= width) ok = false;
            if (ok) return out;
            t.refine_all();
        }
        throw std::runtime_error("curve_eval: did not converge");
    }
    AlgRoot branch = select_branch_root(isolate_over(t, c.f), c.rho);
    return quotient_box(t, branch, c.g0, c.g, width);
}

namespace {

/** Certified limit of the branch as the parameter tends to tau_end from
    inside the interval. Extends ctx2 (= curve context + tau_end) by one
    Thom-encoded coordinate per remaining output coordinate. */
void extend_by_limits(const CurveSegRep& c, TriThom& ctx2, const ThomEncoding& tau_end,
                      const ThomEncoding& tau_other, bool from_right) {
    const int i = const_cast<CurveSegRep&>(c).i();
    for (size_t idx = 0; idx < c.g.size(); ++idx) {
        const int h = ctx2.size();  // the new coordinate's variable index
        // eliminate T from { f = 0, X_h * g0 - g_j = 0 }: the limit coordinate
        // is a root of the resultant at the endpoint column (continuity)
        long t0 = trace_on() ? now_ms() : 0;
        const MPoly& anchorC = branch_image_anchor(c.f, c.g0, c.g[idx], i);
        if (!anchorC.depends_on(i + 1))
            throw std::domain_error("curve_endpoints: degenerate elimination");
        MPoly anchor = embed_moving(anchorC, i + 1, h + 1, h);
        long t1 = trace_on() ? now_ms() : 0;
        if (trace_on())
            std::cerr << "[ep] anchor deg_h=" << anchor.degree(h) << " deg_u=" << anchor.degree(i)
                      << " res in " << t1 - t0 << " ms" << std::endl;
        auto cands = isolate_with_thom(anchor, ctx2);
        if (trace_on())
            std::cerr << "[ep] isolate " << cands.size() << " cands in " << now_ms() - t1 << " ms"
                      << std::endl;
        if (cands.empty()) throw std::domain_error("curve_endpoints: branch has no finite limit");

        // rational separators around the candidate windows
        long t2 = trace_on() ? now_ms() : 0;
        std::vector<Rat> seps;
        {
            Tower& tw = ctx2.tower;
            for (auto& cd : cands) refine_root(tw, cd.root, Rat(1, 4));
            seps.push_back(cands.front().root.lo - 1);
            for (size_t m = 0; m + 1 < cands.size(); ++m)
                seps.push_back(rational_between_roots(tw, cands[m].root, cands[m + 1].root));
            seps.push_back(cands.back().root.hi + 1);
        }

        // sample parameter x' between tau_end and the nearest separator-line
        // crossing: on (end, x'] the branch coordinate then stays inside one
        // fixed window, so its limit is that window's candidate
        Tower base = c.ctx.tower.clone();
        AlgRoot barrier = tau_other.root;
        for (auto& s : seps) {
            MPoly cross = anchor.substitute(h, s).with_nvars(i + 1);
            if (!cross.depends_on(i)) {
                if (base.sign_mpoly(cross, i) == 0)
                    throw std::domain_error("curve_endpoints: separator line degenerate");
                continue;
            }
            for (auto& xi : isolate_over(base, cross)) {
                AlgRoot e = tau_end.root, x2 = xi;
                if (from_right) {
                    if (compare_roots(base, x2, e) == Cmp::LT) {
                        AlgRoot x3 = xi, b3 = barrier;
                        if (compare_roots(base, b3, x3) == Cmp::LT) barrier = xi;
                    }
                } else {
                    if (compare_roots(base, e, x2) == Cmp::LT) {
                        AlgRoot x3 = xi, b3 = barrier;
                        if (compare_roots(base, x3, b3) == Cmp::LT) barrier = xi;
                    }
                }
            }
        }
        Rat xs = from_right ? rational_between_roots(base, barrier, tau_end.root)
                            : rational_between_roots(base, tau_end.root, barrier);
        long t3 = trace_on() ? now_ms() : 0;
        if (trace_on()) std::cerr << "[ep] separators+crossings in " << t3 - t2 << " ms" << std::endl;

        // locate the branch window at x' by exact sign queries
        Tower tf = c.ctx.tower.clone();
        tf.push_level(exact_root(i + 1, i, xs));
        AlgRoot branch = select_branch_root(isolate_over(tf, c.f), c.rho);
        int sg0 = sign_at_root(tf, c.g0, branch);
        if (sg0 == 0) throw std::domain_error("curve_endpoints: g0 vanishes on the branch");
        size_t w = 0;  // number of separators below the branch coordinate
        for (auto& s : seps) {
            MPoly num = c.g0 * s - c.g[idx];  // sign(s - g_j/g0) = sign(num) * sign(g0)
            int cmp = sign_at_root(tf, num, branch) * sg0;
            if (cmp == 0) throw std::logic_error("curve_endpoints: sample hits a separator");
            if (cmp < 0) ++w;
        }
        if (w == 0 || w == seps.size())
            throw std::domain_error("curve_endpoints: branch escapes every window");
        if (trace_on()) std::cerr << "[ep] window test in " << now_ms() - t3 << " ms" << std::endl;
        ctx2.extend(cands[w - 1]);
    }
}

}  // namespace

RUR make_triangular_rur(const TriThom& full_point, int k) {
    if (const_cast<TriThom&>(full_point).size() != k)
        throw std::logic_error("make_triangular_rur: height mismatch");
    RUR out;
    out.k = k;
    out.tau = full_point.coords.back();
    out.ctx = full_point;
    out.ctx.drop_last();
    out.f = out.tau.poly.with_nvars(k);
    out.g0 = MPoly::constant(k, Rat(1));
    out.g = {MPoly::var(k, k - 1)};
    return out;
}

std::pair<RUR, RUR> curve_endpoints(CurveSegRep& c) {
    if (static_cast<int>(c.g.size()) != c.k - c.i() - 1)
        throw std::logic_error("curve_endpoints: coordinate count mismatch");
    auto one = [&](const ThomEncoding& te, const ThomEncoding& to, bool from_right) {
        TriThom ctx2 = c.ctx;
        ctx2.extend(te);
        extend_by_limits(c, ctx2, te, to, from_right);
        return make_triangular_rur(ctx2, c.k);
    };
    RUR left = one(c.tau1, c.tau2, false);
    RUR right = one(c.tau2, c.tau1, true);
    return {std::move(left), std::move(right)};
}

bool same_point(const RUR& a, const RUR& b) {
    if (a.k != b.k) return false;
    auto level_root = [](const RUR& u, int L) {
        AlgRoot r;
        if (L < u.k - 1) {
            const Tower::Level& lv = u.ctx.tower.levels[static_cast<size_t>(L)];
            r.anchor = lv.anchor;
            r.lo = lv.lo;
            r.hi = lv.hi;
            r.sign_lo = lv.sign_at_lo;
        } else {
            r = u.tau.root;
        }
        return r;
    };
    Tower t;
    for (int L = 0; L < a.k; ++L) {
        AlgRoot ra = level_root(a, L), rb = level_root(b, L);
        if (compare_roots(t, ra, rb) != Cmp::EQ) return false;
        t.push_level(ra);
    }
    return true;
}

}  // namespace sah
