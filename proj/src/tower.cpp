#include "sah/tower.hpp"

#include <algorithm>
#include <stdexcept>

#include "sah/upoly.hpp"

namespace sah {

// ---------------------------------------------------------------------------
// quotient-tower element arithmetic
// ---------------------------------------------------------------------------

Elem Tower::e_zero(int lv) const {
    Elem e;
    if (lv == 0) e.r = 0;
    return e;
}

Elem Tower::e_const(int lv, const Rat& c) const {
    Elem e;
    if (lv == 0) {
        e.r = c;
    } else if (c != 0) {
        e.v.push_back(e_const(lv - 1, c));
    }
    return e;
}

bool Tower::e_rep_zero(const Elem& e) {
    if (e.v.empty()) return e.r == 0;
    for (auto& c : e.v)
        if (!e_rep_zero(c)) return false;
    return true;
}

Elem Tower::e_add(int lv, const Elem& a, const Elem& b) const {
    if (lv == 0) {
        Elem e;
        e.r = a.r + b.r;
        return e;
    }
    Elem e;
    e.v.resize(std::max(a.v.size(), b.v.size()));
    for (size_t i = 0; i < e.v.size(); ++i) {
        const Elem* x = i < a.v.size() ? &a.v[i] : nullptr;
        const Elem* y = i < b.v.size() ? &b.v[i] : nullptr;
        if (x && y) e.v[i] = e_add(lv - 1, *x, *y);
        else if (x) e.v[i] = *x;
        else e.v[i] = *y;
    }
    return e;
}

Elem Tower::e_sub(int lv, const Elem& a, const Elem& b) const {
    Elem nb = b;
    // negate recursively
    struct Neg {
        static void run(Elem& e) {
            e.r = -e.r;
            for (auto& c : e.v) run(c);
        }
    };
    Neg::run(nb);
    return e_add(lv, a, nb);
}

Elem Tower::e_mul(int lv, const Elem& a, const Elem& b) {
    if (lv == 0) {
        Elem e;
        e.r = a.r * b.r;
        return e;
    }
    Elem e;
    if (a.v.empty() || b.v.empty()) return e;
    e.v.assign(a.v.size() + b.v.size() - 1, e_zero(lv - 1));
    for (size_t i = 0; i < a.v.size(); ++i)
        for (size_t j = 0; j < b.v.size(); ++j)
            e.v[i + j] = e_add(lv - 1, e.v[i + j], e_mul(lv - 1, a.v[i], b.v[j]));
    e_reduce(lv, e);
    return e;
}

void Tower::e_reduce(int lv, Elem& e) {
    if (lv == 0) return;
    build_monic(lv);
    const auto& mon = levels[lv - 1].mon;
    const size_t d = mon.size();
    while (e.v.size() > d) {
        Elem top = e.v.back();
        e.v.pop_back();
        if (e_rep_zero(top)) continue;
        size_t shift = e.v.size() - d;
        for (size_t i = 0; i < d; ++i)
            e.v[shift + i] = e_sub(lv - 1, e.v[shift + i], e_mul(lv - 1, top, mon[i]));
    }
    while (!e.v.empty() && e_rep_zero(e.v.back())) e.v.pop_back();
}

Elem Tower::to_elem(int lv, const MPoly& g) {
    if (lv == 0) return e_const(0, g.constant_value());
    Elem e;
    if (g.is_zero()) return e;
    for (auto& c : g.coeffs_wrt(lv - 1)) e.v.push_back(to_elem(lv - 1, c));
    e_reduce(lv, e);
    return e;
}

Ivl Tower::e_ivl(int lv, const Elem& e) const {
    if (lv == 0) return Ivl(e.r);
    Ivl x(levels[lv - 1].lo, levels[lv - 1].hi);
    Ivl s(Rat(0));
    for (auto it = e.v.rbegin(); it != e.v.rend(); ++it) s = s * x + e_ivl(lv - 1, *it);
    return s;
}

// ---------------------------------------------------------------------------
// dynamic polynomials over K_{lv-1}[x]
// ---------------------------------------------------------------------------

void Tower::dtrim(int lv, std::vector<Elem>& p) {
    while (!p.empty() && elem_is_zero(lv - 1, p.back())) p.pop_back();
}

/** Division with remainder; b must be value-trimmed and nonempty. */
std::vector<Elem> Tower::dquo(int lv, std::vector<Elem> a, const std::vector<Elem>& b, bool* exact) {
    auto lcinv = try_inv(lv - 1, b.back());
    if (!lcinv) throw std::logic_error("dquo: divisor leading coefficient is zero");
    std::vector<Elem> q(a.size() >= b.size() ? a.size() - b.size() + 1 : 0, e_zero(lv - 1));
    while (true) {
        // value-aware trim of the running remainder
        while (!a.empty() && elem_is_zero(lv - 1, a.back())) a.pop_back();
        if (a.size() < b.size()) break;
        Elem k = e_mul(lv - 1, a.back(), *lcinv);
        size_t shift = a.size() - b.size();
        q[shift] = e_add(lv - 1, q[shift], k);
        for (size_t i = 0; i < b.size(); ++i)
            a[shift + i] = e_sub(lv - 1, a[shift + i], e_mul(lv - 1, k, b[i]));
        a.pop_back();  // leading term cancelled by construction
    }
    if (exact) {
        *exact = true;
        for (auto& c : a)
            if (!elem_is_zero(lv - 1, c)) { *exact = false; break; }
    }
    return q;
}

std::vector<Elem> Tower::dgcd(int lv, std::vector<Elem> a, std::vector<Elem> b) {
    dtrim(lv, a);
    dtrim(lv, b);
    if (a.size() < b.size()) std::swap(a, b);
    while (!b.empty()) {
        // remainder of a by b
        auto lcinv = try_inv(lv - 1, b.back());
        if (!lcinv) throw std::logic_error("dgcd: zero leading coefficient");
        std::vector<Elem> r = a;
        while (true) {
            while (!r.empty() && elem_is_zero(lv - 1, r.back())) r.pop_back();
            if (r.size() < b.size()) break;
            Elem k = e_mul(lv - 1, r.back(), *lcinv);
            size_t shift = r.size() - b.size();
            for (size_t i = 0; i < b.size(); ++i)
                r[shift + i] = e_sub(lv - 1, r[shift + i], e_mul(lv - 1, k, b[i]));
            r.pop_back();
        }
        a = std::move(b);
        b = std::move(r);
    }
    return a;
}

// ---------------------------------------------------------------------------
// modulus management
// ---------------------------------------------------------------------------

bool Tower::split_modulus(int lv, const std::vector<Elem>& g, const std::vector<Elem>& cof) {
    Level& L = levels[lv - 1];
    auto poly_ivl = [&](const std::vector<Elem>& p) {
        Ivl x(L.lo, L.hi);
        Ivl s(Rat(0));
        for (auto it = p.rbegin(); it != p.rend(); ++it) s = s * x + e_ivl(lv - 1, *it);
        return s;
    };
    for (int guard = 0; guard < 100000; ++guard) {
        Ivl gv = poly_ivl(g), cv = poly_ivl(cof);
        bool take_g;
        if (gv.certain_sign() != 0) take_g = false;       // g(v) != 0: root lives in cof
        else if (cv.certain_sign() != 0) take_g = true;   // cof(v) != 0: root lives in g
        else {
            for (int i = 0; i < lv; ++i) refine(i);
            continue;
        }
        if (L.lo == L.hi) {
            // the level collapsed to a rational while we refined; the linear
            // modulus is the sharpest valid choice
            L.mon.assign(1, e_const(lv - 1, -L.lo));
        } else {
            const std::vector<Elem>& keep = take_g ? g : cof;
            L.mon.assign(keep.begin(), keep.end() - 1);  // drop the implicit leading 1
        }
        ++split_epoch;
        return take_g;
    }
    throw std::runtime_error("split_modulus: failed to separate coprime factors");
}

void Tower::build_monic(int lv) {
    Level& L = levels[lv - 1];
    if (L.mon_built) return;
    if (L.lo == L.hi) {
        L.mon.assign(1, e_const(lv - 1, -L.lo));
        L.mon_built = true;
        return;
    }
    // convert the anchor to a monic squarefree modulus over the lower tower
    std::vector<Elem> p;
    for (auto& c : L.anchor.coeffs_wrt(lv - 1)) p.push_back(to_elem(lv - 1, c));
    dtrim(lv, p);
    if (p.size() < 2) throw std::logic_error("build_monic: anchor degenerates to a constant");
    auto lcinv = try_inv(lv - 1, p.back());
    for (auto& c : p) c = e_mul(lv - 1, c, *lcinv);
    p.back() = e_const(lv - 1, 1);
    // squarefree part
    std::vector<Elem> dp;
    for (size_t i = 1; i < p.size(); ++i) dp.push_back(e_mul(lv - 1, p[i], e_const(lv - 1, Rat(static_cast<int>(i)))));
    std::vector<Elem> g = dgcd(lv, p, dp);
    if (g.size() >= 2) {
        auto ginv = try_inv(lv - 1, g.back());
        for (auto& c : g) c = e_mul(lv - 1, c, *ginv);
        g.back() = e_const(lv - 1, 1);
        p = dquo(lv, p, g, nullptr);
        auto plcinv = try_inv(lv - 1, p.back());
        for (auto& c : p) c = e_mul(lv - 1, c, *plcinv);
        p.back() = e_const(lv - 1, 1);
    }
    L.mon.assign(p.begin(), p.end() - 1);
    L.mon_built = true;
}

std::optional<Elem> Tower::try_inv(int lv, Elem e) {
    if (lv == 0) {
        if (e.r == 0) return std::nullopt;
        return e_const(0, Rat(1) / e.r);
    }
    for (int guard = 0; guard < 10000; ++guard) {
        long epoch = split_epoch;
        e_reduce(lv, e);
        if (e.v.empty()) return std::nullopt;
        build_monic(lv);
        Level& L = levels[lv - 1];
        std::vector<Elem> r0 = L.mon;
        r0.push_back(e_const(lv - 1, 1));
        std::vector<Elem> r1 = e.v;
        std::vector<Elem> s0, s1{e_const(lv - 1, 1)};
        bool restart = false;
        auto trim = [&](std::vector<Elem>& p) {
            while (!p.empty()) {
                bool z = elem_is_zero(lv - 1, p.back());
                if (split_epoch != epoch) return false;
                if (!z) break;
                p.pop_back();
            }
            return true;
        };
        if (!trim(r1)) continue;
        if (r1.empty()) return std::nullopt;
        while (!restart) {
            if (r1.empty()) {
                if (!trim(r0)) { restart = true; break; }
                if (r0.size() == 1) {
                    auto u = try_inv(lv - 1, r0[0]);
                    if (split_epoch != epoch) { restart = true; break; }
                    Elem res;
                    res.v = s0;
                    for (auto& c : res.v) c = e_mul(lv - 1, c, *u);
                    e_reduce(lv, res);
                    if (split_epoch != epoch) { restart = true; break; }
                    return res;
                }
                // nontrivial gcd: split the modulus
                auto lcinv = try_inv(lv - 1, r0.back());
                if (split_epoch != epoch) { restart = true; break; }
                std::vector<Elem> g = r0;
                for (auto& c : g) c = e_mul(lv - 1, c, *lcinv);
                g.back() = e_const(lv - 1, 1);
                std::vector<Elem> M = L.mon;
                M.push_back(e_const(lv - 1, 1));
                std::vector<Elem> cof = dquo(lv, M, g, nullptr);
                if (split_epoch != epoch) { restart = true; break; }
                if (split_modulus(lv, g, cof)) return std::nullopt;  // g | e and root in g
                restart = true;
                break;
            }
            auto lcinv = try_inv(lv - 1, r1.back());
            if (split_epoch != epoch || !lcinv) { restart = true; break; }
            // division step: r0 = q*r1 + r2, s2 = s0 - q*s1
            std::vector<Elem> rem = r0;
            std::vector<Elem> q(rem.size() >= r1.size() ? rem.size() - r1.size() + 1 : 0,
                                e_zero(lv - 1));
            while (rem.size() >= r1.size()) {
                Elem k = e_mul(lv - 1, rem.back(), *lcinv);
                size_t shift = rem.size() - r1.size();
                q[shift] = e_add(lv - 1, q[shift], k);
                for (size_t i = 0; i < r1.size(); ++i)
                    rem[shift + i] = e_sub(lv - 1, rem[shift + i], e_mul(lv - 1, k, r1[i]));
                rem.pop_back();
                while (!rem.empty() && e_rep_zero(rem.back())) rem.pop_back();
                if (rem.size() < r1.size()) break;
                bool z = elem_is_zero(lv - 1, rem.back());
                if (split_epoch != epoch) { restart = true; break; }
                if (z) rem.pop_back();
            }
            if (restart) break;
            // s2 = s0 - q*s1
            std::vector<Elem> s2 = s0;
            s2.resize(std::max(s2.size(), q.size() + (s1.empty() ? 0 : s1.size() - 1)), e_zero(lv - 1));
            for (size_t i = 0; i < q.size(); ++i)
                for (size_t j = 0; j < s1.size(); ++j)
                    s2[i + j] = e_sub(lv - 1, s2[i + j], e_mul(lv - 1, q[i], s1[j]));
            r0 = std::move(r1);
            s0 = std::move(s1);
            r1 = std::move(rem);
            s1 = std::move(s2);
            if (!trim(r1)) { restart = true; break; }
        }
    }
    throw std::runtime_error("try_inv: did not stabilize");
}

bool Tower::elem_is_zero(int lv, Elem e) {
    if (lv == 0) return e.r == 0;
    e_reduce(lv, e);
    if (e.v.empty()) return true;
    return !try_inv(lv, std::move(e)).has_value();
}

// ---------------------------------------------------------------------------
// tower point management
// ---------------------------------------------------------------------------

void Tower::push_level(const MPoly& anchor, const Rat& lo, const Rat& hi) {
    Level L;
    L.anchor = anchor;
    L.lo = lo;
    L.hi = hi;
    if (lo != hi) {
        int h = height();
        L.sign_at_lo = sign_mpoly(anchor.substitute(h, lo), h);
        if (L.sign_at_lo == 0) throw std::logic_error("push_level: interval endpoint is a root");
    }
    levels.push_back(std::move(L));
}

void Tower::refine(int i) {
    Level& L = levels[i];
    if (L.lo == L.hi) return;
    Rat m = (L.lo + L.hi) / 2;
    int s = sign_mpoly(L.anchor.substitute(i, m), i);
    if (s == 0) {
        L.lo = L.hi = m;
        L.sign_at_lo = 0;
        L.mon.assign(1, e_const(i, -m));
        L.mon_built = true;
        ++split_epoch;
        return;
    }
    if (s == L.sign_at_lo) L.lo = m;
    else L.hi = m;
}

void Tower::refine_all() {
    for (int i = 0; i < height(); ++i) refine(i);
}

std::vector<Ivl> Tower::point_box(int h) const {
    std::vector<Ivl> box;
    for (int i = 0; i < h; ++i) box.emplace_back(levels[i].lo, levels[i].hi);
    return box;
}

Tower Tower::clone() const { return *this; }

int Tower::sign_mpoly(const MPoly& g, int h) {
    for (int i = h; i < g.nvars(); ++i)
        if (g.degree(i) > 0) throw std::logic_error("sign_mpoly: polynomial exceeds tower height");
    MPoly g2 = g;
    for (int i = 0; i < h && i < g.nvars(); ++i)
        if (i < height() && levels[i].lo == levels[i].hi && g2.degree(i) > 0)
            g2 = g2.substitute(i, levels[i].lo);
    if (g2.is_zero()) return 0;
    if (g2.is_constant()) return sgn(g2.constant_value());
    auto boxed = [&]() {
        std::vector<Ivl> box(static_cast<size_t>(g2.nvars()), Ivl(Rat(0)));
        for (int i = 0; i < h && i < g2.nvars(); ++i) box[i] = Ivl(levels[i].lo, levels[i].hi);
        return eval_box(g2, box);
    };
    for (int round = 0; round < 4; ++round) {
        int s = boxed().certain_sign();
        if (s != 0) return s;
        for (int i = 0; i < h; ++i) refine(i);
    }
    Elem e = to_elem(h, g2);
    if (elem_is_zero(h, std::move(e))) return 0;
    for (int guard = 0; guard < 100000; ++guard) {
        int s = boxed().certain_sign();
        if (s != 0) return s;
        for (int i = 0; i < h; ++i) refine(i);
    }
    throw std::runtime_error("sign_mpoly: interval refinement did not converge");
}

int Tower::sign_with_root(const MPoly& g, const AlgRoot& r) {
    push_level(r.anchor, r.lo, r.hi);
    int s;
    try {
        s = sign_mpoly(g, height());
    } catch (...) {
        pop_level();
        throw;
    }
    pop_level();
    return s;
}

void Tower::refine_root_step(AlgRoot& r) {
    if (r.exact()) return;
    int h = height();
    if (r.sign_lo == 0) {
        r.sign_lo = sign_mpoly(r.anchor.substitute(h, r.lo), h);
        if (r.sign_lo == 0) throw std::logic_error("refine_root_step: endpoint is a root");
    }
    Rat m = (r.lo + r.hi) / 2;
    int s = sign_mpoly(r.anchor.substitute(h, m), h);
    if (s == 0) {
        r.lo = r.hi = m;
        r.sign_lo = 0;
        return;
    }
    if (s == r.sign_lo) r.lo = m;
    else r.hi = m;
}

void refine_root(Tower& t, AlgRoot& r, const Rat& w) {
    while (!r.exact() && r.hi - r.lo >= w) t.refine_root_step(r);
}

// ---------------------------------------------------------------------------
// root isolation over a tower (derivative chain)
// ---------------------------------------------------------------------------

namespace {

/** Sign of q at an isolated root (rational fast path). */
int sign_at(Tower& t, const MPoly& q, AlgRoot& r, int var) {
    if (r.exact()) return t.sign_mpoly(q.substitute(var, r.lo), var);
    return t.sign_with_root(q, r);
}

/** Rational point b >= r.hi (after refinement) with sign(q(b)) = sign(q(r)) != 0. */
Rat bracket_above(Tower& t, const MPoly& q, AlgRoot& r, int var) {
    if (r.exact()) return r.lo;
    for (int guard = 0; guard < 100000; ++guard) {
        std::vector<Ivl> box(static_cast<size_t>(q.nvars()), Ivl(Rat(0)));
        auto pb = t.point_box();
        for (size_t i = 0; i < pb.size(); ++i) box[i] = pb[i];
        box[var] = Ivl(r.lo, r.hi);
        if (eval_box(q, box).certain_sign() != 0) return r.hi;
        t.refine_root_step(r);
        t.refine_all();
    }
    throw std::runtime_error("bracket_above: no separation");
}

Rat bracket_below(Tower& t, const MPoly& q, AlgRoot& r, int var) {
    if (r.exact()) return r.lo;
    bracket_above(t, q, r, var);  // same refinement criterion
    return r.lo;
}

/** Isolate the single root of q in (a, b), where sign(q(a)) = sa = -sign(q(b)). */
AlgRoot isolate_in_bracket(Tower& t, const MPoly& q, int var, Rat a, Rat b, int sa) {
    for (int iter = 0; iter < 24; ++iter) {
        Rat m = simplest_rational_between(a, b);
        int sm = t.sign_mpoly(q.substitute(var, m), var);
        if (sm == 0) {
            AlgRoot r;
            r.anchor = q;
            r.lo = r.hi = m;
            return r;
        }
        Rat half = (a + b) / 2;
        int sh = half == m ? sm : t.sign_mpoly(q.substitute(var, half), var);
        if (sh == 0) {
            AlgRoot r;
            r.anchor = q;
            r.lo = r.hi = half;
            return r;
        }
        if (sh == sa) a = half; else b = half;
        if (sm == sa && m > a && m < b) a = m;
        else if (sm != sa && m < b && m > a) b = m;
    }
    AlgRoot r;
    r.anchor = q;
    r.lo = a;
    r.hi = b;
    r.sign_lo = sa;
    return r;
}

/** Separate isolating intervals of a sorted root list pairwise. */
void separate(Tower& t, std::vector<AlgRoot>& roots) {
    for (size_t i = 0; i + 1 < roots.size(); ++i) {
        int guard = 0;
        while (!(roots[i].hi < roots[i + 1].lo ||
                 (roots[i].exact() && roots[i + 1].exact() && roots[i].lo != roots[i + 1].lo))) {
            if (roots[i].exact() && roots[i + 1].exact()) {
                if (roots[i].lo == roots[i + 1].lo)
                    throw std::logic_error("separate: duplicate roots");
            }
            t.refine_root_step(roots[i]);
            t.refine_root_step(roots[i + 1]);
            if (++guard > 100000) throw std::runtime_error("separate: no progress");
        }
    }
}

/** Interval Horner evaluation of a univariate with rational coefficients. */
Ivl horner_ivl(const std::vector<Rat>& c, const Ivl& x) {
    Ivl acc{Rat(0)};
    for (size_t j = c.size(); j-- > 0;) acc = acc * x + Ivl(c[j]);
    return acc;
}

/** Height-0 isolation: Sturm bisection on the rational base field, with Thom
    sign vectors filled by direct evaluation (gcd certificates for exact
    zeros). Avoids the derivative-chain recursion, which is much more
    expensive for high-degree polynomials. */
std::vector<AlgRoot> isolate_rational_base(const MPoly& p, int var) {
    UPoly u = UPoly::from_mpoly(p, var);
    if (u.is_zero()) throw std::domain_error("isolate_over: identically zero at the point");
    std::vector<AlgRoot> out;
    if (u.degree() == 0) return out;
    UPoly sf = upoly_squarefree(u).primitive();
    MPoly anchor = sf.to_mpoly(p.nvars(), var);
    auto ivls = isolate_real_roots(u);

    std::vector<UPoly> ders{u};
    while (ders.back().degree() > 0) ders.push_back(ders.back().derivative());

    for (auto& iv : ivls) {
        AlgRoot r;
        r.anchor = anchor;
        r.lo = iv.lo;
        r.hi = iv.hi;
        if (!iv.exact()) r.sign_lo = sgn(sf.eval(iv.lo));
        r.dsigns[0] = 0;
        for (size_t m = 1; m < ders.size(); ++m) {
            const UPoly& d = ders[m];
            int s = 0;
            if (r.exact()) {
                s = sgn(d.eval(r.lo));
            } else {
                for (int round = 0;; ++round) {
                    Ivl e = horner_ivl(d.c, Ivl(r.lo, r.hi));
                    s = e.certain_sign();
                    if (s != 0) break;
                    if (round == 4) {
                        // exact zero test: the root is shared with d iff the
                        // gcd (a squarefree divisor of sf) changes sign here
                        UPoly g = upoly_gcd(sf, d);
                        if (g.degree() >= 1 && sgn(g.eval(r.lo)) * sgn(g.eval(r.hi)) < 0) break;
                    }
                    Rat mid = r.mid();
                    int sm = sgn(sf.eval(mid));
                    if (sm == 0) {
                        r.lo = r.hi = mid;
                        r.sign_lo = 0;
                        s = sgn(d.eval(mid));
                        break;
                    }
                    if (sm == r.sign_lo)
                        r.lo = mid;
                    else
                        r.hi = mid;
                    if (round > 100000)
                        throw std::runtime_error("isolate_over: sign refinement stalled");
                }
            }
            r.dsigns[static_cast<int>(m)] = s;
        }
        out.push_back(std::move(r));
    }
    return out;
}

/** Roots of q given the sorted roots of its derivative (monotonicity pieces). */
std::vector<AlgRoot> isolate_level(Tower& t, const MPoly& q, std::vector<AlgRoot>& upper,
                                   int var, int der_index) {
    // root magnitude bound from coefficient enclosures
    auto cs = q.coeffs_wrt(var);
    std::vector<Ivl> pb;
    Ivl top;
    for (int guard = 0;; ++guard) {
        pb = t.point_box();
        std::vector<Ivl> box(static_cast<size_t>(q.nvars()), Ivl(Rat(0)));
        for (size_t i = 0; i < pb.size(); ++i) box[i] = pb[i];
        top = eval_box(cs.back(), box);
        if (top.certain_sign() != 0) break;
        t.refine_all();
        if (guard > 100000) throw std::runtime_error("isolate_level: leading coefficient ambiguous");
    }
    Rat top_min = std::min(rat_abs(top.lo), rat_abs(top.hi));
    Rat m(0);
    {
        std::vector<Ivl> box(static_cast<size_t>(q.nvars()), Ivl(Rat(0)));
        for (size_t i = 0; i < pb.size(); ++i) box[i] = pb[i];
        for (size_t i = 0; i + 1 < cs.size(); ++i) {
            Ivl ci = eval_box(cs[i], box);
            m = std::max(m, std::max(rat_abs(ci.lo), rat_abs(ci.hi)));
        }
    }
    Rat B = Rat(1) + m / top_min;

    separate(t, upper);
    std::vector<AlgRoot> out;
    // evaluate q at the separating roots
    std::vector<int> usign(upper.size());
    for (size_t i = 0; i < upper.size(); ++i) {
        usign[i] = sign_at(t, q, upper[i], var);
        upper[i].dsigns[der_index] = usign[i];
        if (usign[i] == 0) {
            AlgRoot copy = upper[i];
            out.push_back(std::move(copy));
        }
    }
    // outer rational sentinels
    Rat L = Rat(-B - 1), R = Rat(B + 1);
    for (auto& r : upper) {
        L = std::min(L, Rat(r.lo - 1));
        R = std::max(R, Rat(r.hi + 1));
    }
    int sL = t.sign_mpoly(q.substitute(var, L), var);
    int sR = t.sign_mpoly(q.substitute(var, R), var);
    if (sL == 0 || sR == 0) throw std::logic_error("isolate_level: sentinel hit a root");

    // walk the monotonicity segments
    const size_t n = upper.size();
    for (size_t seg = 0; seg <= n; ++seg) {
        int sa = seg == 0 ? sL : usign[seg - 1];
        int sb = seg == n ? sR : usign[seg];
        if (sa == 0 || sb == 0 || sa == sb) continue;
        Rat a = seg == 0 ? L : bracket_above(t, q, upper[seg - 1], var);
        Rat b = seg == n ? R : bracket_below(t, q, upper[seg], var);
        AlgRoot r = isolate_in_bracket(t, q, var, a, b, sa);
        r.dsigns[der_index] = 0;
        out.push_back(std::move(r));
    }
    std::sort(out.begin(), out.end(), [](const AlgRoot& x, const AlgRoot& y) { return x.lo < y.lo; });
    separate(t, out);
    return out;
}

}  // namespace

std::vector<AlgRoot> isolate_over(Tower& t, const MPoly& p) {
    const int var = t.height();
    for (int i = var + 1; i < p.nvars(); ++i)
        if (p.degree(i) > 0) throw std::logic_error("isolate_over: polynomial exceeds tower height + 1");
    if (var == 0) return isolate_rational_base(p, 0);
    {
        // exact rational tower point: specialize and isolate over Q directly
        bool all_exact = true;
        for (auto& lv : t.levels)
            if (lv.lo != lv.hi) {
                all_exact = false;
                break;
            }
        if (all_exact) {
            MPoly ps = p;
            for (int j = 0; j < var; ++j) ps = ps.substitute(j, t.levels[static_cast<size_t>(j)].lo);
            return isolate_rational_base(ps, var);
        }
    }
    auto cs = p.coeffs_wrt(var);
    int d_eff = -1;
    for (int d = static_cast<int>(cs.size()) - 1; d >= 0; --d) {
        if (t.sign_mpoly(cs[d], var) != 0) { d_eff = d; break; }
    }
    if (d_eff < 0) throw std::domain_error("isolate_over: identically zero at the point");
    std::vector<AlgRoot> roots;  // roots of the current derivative level
    if (d_eff == 0) return roots;
    cs.resize(static_cast<size_t>(d_eff) + 1);
    MPoly p_eff = MPoly::from_coeffs(p.nvars(), var, cs);
    auto ders = der_sequence(p_eff, var);
    for (int m = d_eff - 1; m >= 0; --m)
        roots = isolate_level(t, ders[m], roots, var, m);
    // Thom sign vectors against the formal derivative sequence of the input p
    auto formal = der_sequence(p, var);
    for (auto& r : roots) {
        r.dsigns[0] = 0;
        for (size_t mm = 1; mm < formal.size(); ++mm) {
            int mi = static_cast<int>(mm);
            if (!r.dsigns.count(mi)) r.dsigns[mi] = sign_at(t, formal[mm], r, var);
        }
    }
    return roots;
}

Cmp compare_roots(Tower& t, AlgRoot& a, AlgRoot& b) {
    for (int guard = 0; guard < 200000; ++guard) {
        if (a.exact() && b.exact()) {
            if (a.lo < b.lo) return Cmp::LT;
            if (a.lo > b.lo) return Cmp::GT;
            return Cmp::EQ;
        }
        if (a.hi < b.lo) return Cmp::LT;
        if (b.hi < a.lo) return Cmp::GT;
        if (a.exact()) {
            // b algebraic, a rational inside b's interval?
            int s = t.sign_mpoly(b.anchor.substitute(t.height(), a.lo), t.height());
            if (s == 0 && a.lo > b.lo && a.lo < b.hi) return Cmp::EQ;
            t.refine_root_step(b);
            continue;
        }
        if (b.exact()) {
            int s = t.sign_mpoly(a.anchor.substitute(t.height(), b.lo), t.height());
            if (s == 0 && b.lo > a.lo && b.lo < a.hi) return Cmp::EQ;
            t.refine_root_step(a);
            continue;
        }
        int s = t.sign_with_root(b.anchor, a);
        if (s != 0) {
            // genuinely distinct: refine until the intervals separate
            t.refine_root_step(a);
            t.refine_root_step(b);
            continue;
        }
        // a is a root of b's anchor: contained-in-isolating-interval certificate
        while (!(a.hi < b.lo || b.hi < a.lo || (a.lo >= b.lo && a.hi <= b.hi))) {
            t.refine_root_step(a);
            if (a.exact()) break;
        }
        if (a.exact()) continue;
        if (a.lo >= b.lo && a.hi <= b.hi) return Cmp::EQ;
    }
    throw std::runtime_error("compare_roots: no decision");
}

}  // namespace sah
