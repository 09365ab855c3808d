#include "sah/closure.hpp"

#include <optional>
#include <set>
#include <stdexcept>

#include "sah/upoly.hpp"

namespace sah {

namespace {

/** Move variable `from` of p to variable `to` in an nvars-wide space. */
MPoly embed_moving(const MPoly& p, int from, int nvars, int to) {
    return p.with_nvars(nvars).substitute(from, MPoly::var(nvars, to));
}

AlgRoot level_root(const Tower::Level& lv) {
    AlgRoot r;
    r.anchor = lv.anchor;
    r.lo = lv.lo;
    r.hi = lv.hi;
    r.sign_lo = lv.sign_at_lo;
    return r;
}

/** The fiber root matching rho, or nothing (absent or ambiguous). */
std::optional<AlgRoot> match_branch(std::vector<AlgRoot> roots, const std::vector<int>& rho) {
    std::optional<AlgRoot> hit;
    for (auto& r : roots) {
        bool ok = true;
        for (size_t m = 1; m < rho.size() && ok; ++m) {
            auto it = r.dsigns.find(static_cast<int>(m));
            if ((it == r.dsigns.end() ? 0 : it->second) != rho[m]) ok = false;
        }
        if (!ok) continue;
        if (hit) return std::nullopt;
        hit = std::move(r);
    }
    return hit;
}

/** Is the cell's parameter coordinate strictly inside (ass tau1, ass tau2)? */
bool param_inside(CurveSegRep& c, Tower& t) {
    const int i = c.i();
    Tower base = c.ctx.tower.clone();
    AlgRoot u1 = level_root(t.levels[static_cast<size_t>(i)]);
    AlgRoot u2 = u1;
    AlgRoot a = c.tau1.root, b = c.tau2.root;
    return compare_roots(base, a, u1) == Cmp::LT && compare_roots(base, u2, b) == Cmp::LT;
}

/** Plane decomposition of the (X_{i+1}, X_j) projection plane with the cells
    lying in the branch image marked (idx = j - i - 2). */
PlaneDecomposition decompose_projection(CurveSegRep& c, size_t idx) {
    const int i = c.i();
    const int nv = i + 2;  // (context, u, w)
    // place T above both plane variables: (context, u, w, T)
    MPoly fT = embed_moving(c.f, i + 1, i + 3, i + 2);
    MPoly g0T = embed_moving(c.g0, i + 1, i + 3, i + 2);
    MPoly gT = embed_moving(c.g[idx], i + 1, i + 3, i + 2);
    MPoly atomT = MPoly::var(i + 3, i + 1) * g0T - gT;  // w * g0 - g_j at T
    MPoly R = resultant(fT, atomT, i + 2).with_nvars(nv);
    if (R.is_zero()) throw std::domain_error("project_curve_2d: degenerate elimination");

    std::vector<MPoly> input = {R, c.tau1.poly.with_nvars(nv), c.tau2.poly.with_nvars(nv)};
    CellVisitor visit = [&](Tower& t, const AlgRoot& wv, int) -> bool {
        if (!param_inside(c, t)) return false;
        Tower tf = t.clone();
        tf.push_level(wv);
        std::vector<AlgRoot> roots;
        try {
            roots = isolate_over(tf, fT);
        } catch (const std::domain_error&) {
            return false;  // fiber degenerate: recovered by closure of neighbors
        }
        auto branch = match_branch(std::move(roots), c.rho);
        if (!branch) return false;
        if (branch->exact())
            return tf.sign_mpoly(atomT.substitute(i + 2, branch->lo), i + 2) == 0;
        return tf.sign_with_root(atomT, *branch) == 0;
    };
    return plane_decompose(input, c.ctx, visit);
}

/** Decomposition of the parameter line (w unconstrained) with the open
    interval (ass tau1, ass tau2) marked; used when g is empty. */
PlaneDecomposition decompose_interval(CurveSegRep& c) {
    const int nv = c.i() + 2;
    std::vector<MPoly> input = {c.tau1.poly.with_nvars(nv), c.tau2.poly.with_nvars(nv)};
    CellVisitor visit = [&](Tower& t, const AlgRoot&, int) { return param_inside(c, t); };
    return plane_decompose(input, c.ctx, visit);
}

Formula map_polys(const Formula& f, const std::function<MPoly(const MPoly&)>& fn) {
    if (f.kind == Formula::Kind::Atom) return Formula::atom(fn(f.poly), f.rel);
    std::vector<Formula> kids;
    kids.reserve(f.kids.size());
    for (const auto& kd : f.kids) kids.push_back(map_polys(kd, fn));
    return f.kind == Formula::Kind::And ? Formula::conj(std::move(kids))
                                        : Formula::disj(std::move(kids));
}

}  // namespace

Formula closure_2d(const QfFormula& phi, TriThom& ctx) {
    std::vector<MPoly> input;
    for (const auto& conj : phi.disjuncts)
        for (const auto& a : conj) input.push_back(a.poly);
    PlaneDecomposition dec = plane_decompose(input, ctx);
    return closure_from_cells(dec, phi);
}

QfFormula project_curve_2d(CurveSegRep& c, int j) {
    const int i = c.i();
    if (j < i + 2 || j > c.k) throw std::logic_error("project_curve_2d: coordinate out of range");
    PlaneDecomposition dec = decompose_projection(c, static_cast<size_t>(j - i - 2));
    QfFormula out;
    for (const auto& cell : dec.cells) {
        if (!cell.marked) continue;
        QfConj conj;
        for (size_t s = 0; s < dec.family.size(); ++s) {
            QfAtom a;
            a.poly = dec.family[s];
            a.sign = cell.sigma.signs[s];
            a.strict = true;
            conj.push_back(std::move(a));
        }
        out.disjuncts.push_back(std::move(conj));
    }
    return out;
}

namespace {

AlgRoot rat_root(int nvars, int var, const Rat& v) {
    AlgRoot r;
    r.anchor = MPoly::var(nvars, var) - MPoly::constant(nvars, v);
    r.lo = v;
    r.hi = v;
    return r;
}

/** Rational strictly between two roots known to satisfy a < b. */
Rat strictly_between(Tower& t, AlgRoot a, AlgRoot b) {
    for (int guard = 0; a.hi >= b.lo; ++guard) {
        if (guard > 100000) throw std::domain_error("strictly_between: separation failed");
        t.refine_root_step(a);
        t.refine_root_step(b);
    }
    Rat x = a.hi, y = b.lo;
    if (a.exact()) x = x + (y - x) / 4;
    if (b.exact()) y = y - (y - x) / 4;
    return simplest_rational_between(x, y);
}

/** Family sign vector at the branch point above rational parameter u, where
    the branch coordinate is certified to be the unique root of R(u, .) inside
    the window. Empty optional when the window does not isolate a root. */
std::optional<SignCond> sigma_at(CurveSegRep& c, const std::vector<MPoly>& family,
                                 const MPoly& R, const Rat& u, const Ivl& window) {
    const int i = c.i();
    Tower t = c.ctx.tower.clone();
    t.push_level(rat_root(i + 2, i, u));
    std::vector<AlgRoot> roots;
    try {
        roots = isolate_over(t, R);
    } catch (const std::domain_error&) {
        return std::nullopt;
    }
    Rat target = window.width() / 2;
    if (target <= 0) target = Rat(1, 1 << 20);
    std::vector<AlgRoot*> cands;
    for (auto& r : roots) {
        refine_root(t, r, target);
        if (r.hi >= window.lo && r.lo <= window.hi) cands.push_back(&r);
    }
    if (cands.size() != 1) return std::nullopt;
    AlgRoot& wroot = *cands.front();
    SignCond sigma;
    sigma.signs.reserve(family.size());
    for (const MPoly& F : family) {
        if (F.degree(i + 1) == 0)
            sigma.signs.push_back(t.sign_mpoly(F, i + 1));
        else if (wroot.exact())
            sigma.signs.push_back(t.sign_mpoly(F.substitute(i + 1, wroot.lo), i + 1));
        else
            sigma.signs.push_back(t.sign_with_root(F, wroot));
    }
    // sanity: R itself must vanish at the certified branch point
    MPoly Rn = R.normalized();
    for (size_t s = 0; s < family.size(); ++s)
        if (family[s] == Rn && sigma.signs[s] != 0) return std::nullopt;
    return sigma;
}

/** Sign conditions realized by the branch image over every stratification
    column its parameter interval meets. */
std::vector<SignCond> branch_sigmas(CurveSegRep& c,
                                    const std::vector<std::vector<Rat>>* polyline,
                                    const PlaneStrata& strata, const MPoly& R, size_t idx,
                                    const Rat& tol) {
    const int i = c.i();
    const int wcoord = i + 1 + static_cast<int>(idx);
    Tower& tw = c.ctx.tower;
    std::set<std::vector<int>> seen;
    std::vector<SignCond> out;

    // every breakpoint of the family: algebraic u-roots interleaved with the
    // rational separators (the separator polys are family members themselves)
    std::vector<AlgRoot> bps;
    for (size_t j = 0; j < strata.uroots.size(); ++j) {
        bps.push_back(rat_root(i + 1, i, strata.separators[j]));
        bps.push_back(strata.uroots[j]);
    }
    if (!strata.separators.empty()) bps.push_back(rat_root(i + 1, i, strata.separators.back()));

    const size_t m = bps.size();
    for (size_t col = 0; col <= m; ++col) {
        // open column (A, B); A and B may be absent (outer columns)
        const AlgRoot* A = col > 0 ? &bps[col - 1] : nullptr;
        const AlgRoot* B = col < m ? &bps[col] : nullptr;
        AlgRoot lo = c.tau1.root, hi = c.tau2.root;
        if (A) {
            AlgRoot a = *A, h2 = hi;
            if (compare_roots(tw, a, h2) != Cmp::LT) continue;  // A >= tau2
            AlgRoot a2 = *A, l2 = lo;
            if (compare_roots(tw, l2, a2) == Cmp::LT) lo = *A;  // max(A, tau1)
        }
        if (B) {
            AlgRoot b = *B, l2 = lo;
            if (compare_roots(tw, l2, b) != Cmp::LT) continue;  // B <= tau1
            AlgRoot b2 = *B, h2 = hi;
            if (compare_roots(tw, b2, h2) == Cmp::LT) hi = *B;  // min(B, tau2)
        }

        std::optional<SignCond> sigma;
        if (polyline && polyline->size() > 2) {
            for (size_t p = 1; p + 1 < polyline->size() && !sigma; ++p) {
                const Rat& up = (*polyline)[p][static_cast<size_t>(i)];
                AlgRoot ur = rat_root(i + 1, i, up), l2 = lo, h2 = hi;
                if (compare_roots(tw, l2, ur) != Cmp::LT) continue;
                AlgRoot ur2 = ur;
                if (compare_roots(tw, ur2, h2) != Cmp::LT) continue;
                const Rat& wp = (*polyline)[p][static_cast<size_t>(wcoord)];
                sigma = sigma_at(c, strata.family, R, up, Ivl(wp - tol, wp + tol));
            }
        }
        if (!sigma) {
            // exact fallback: certified window straight from the curve data
            Rat u = strictly_between(tw, lo, hi);
            Rat width = tol / 4;
            for (int round = 0; round < 5 && !sigma; ++round, width = width / 8) {
                std::vector<Ivl> box = curve_eval(c, u, width);
                sigma = sigma_at(c, strata.family, R, u, box[static_cast<size_t>(wcoord)]);
            }
            if (!sigma)
                throw std::domain_error("branches_to_closed: branch sample not certifiable");
        }
        if (seen.insert(sigma->signs).second) out.push_back(std::move(*sigma));
    }
    return out;
}

/** Group compatibility: same representation data over the same context point. */
bool same_group(CurveSegRep& a, CurveSegRep& b) {
    if (a.k != b.k || a.i() != b.i()) return false;
    if (!(a.f == b.f) || !(a.g0 == b.g0) || a.g.size() != b.g.size()) return false;
    for (size_t j = 0; j < a.g.size(); ++j)
        if (!(a.g[j] == b.g[j])) return false;
    const auto& la = a.ctx.tower.levels;
    const auto& lb = b.ctx.tower.levels;
    if (la.size() != lb.size()) return false;
    for (size_t j = 0; j < la.size(); ++j) {
        if (!(la[j].anchor == lb[j].anchor)) return false;
        // nested intervals mean the same isolated root; disjoint mean different
        if (la[j].hi < lb[j].lo || lb[j].hi < la[j].lo) return false;
    }
    return true;
}

}  // namespace

std::vector<Formula> branches_to_closed(const std::vector<BranchClosureJob>& jobs,
                                        const Rat& tol) {
    std::vector<Formula> out(jobs.size());
    std::vector<bool> done(jobs.size(), false);
    for (size_t j0 = 0; j0 < jobs.size(); ++j0) {
        if (done[j0]) continue;
        CurveSegRep& c0 = *jobs[j0].curve;
        std::vector<size_t> group;
        for (size_t j = j0; j < jobs.size(); ++j)
            if (!done[j] && same_group(c0, *jobs[j].curve)) group.push_back(j);

        if (c0.g.empty()) {  // parameter is the last coordinate: cheap per branch
            for (size_t j : group) {
                out[j] = curve_to_closed(*jobs[j].curve);
                done[j] = true;
            }
            continue;
        }

        const int i = c0.i();
        const int k = c0.k;
        std::vector<std::vector<Formula>> parts(group.size());
        for (size_t gi = 0; gi < group.size(); ++gi) {
            Formula wt = weak_thom_formula(jobs[group[gi]].curve->ctx);
            parts[gi].push_back(map_polys(wt, [&](const MPoly& p) { return p.with_nvars(k); }));
        }
        for (size_t idx = 0; idx < c0.g.size(); ++idx) {
            const MPoly& R = branch_image_anchor(c0.f, c0.g0, c0.g[idx], i);
            if (!R.depends_on(i + 1))
                throw std::domain_error("branches_to_closed: degenerate elimination");
            PlaneStrata strata = stratify_plane({R}, c0.ctx);
            const int target = i + 1 + static_cast<int>(idx);
            for (size_t gi = 0; gi < group.size(); ++gi) {
                CurveSegRep& c = *jobs[group[gi]].curve;
                auto sigmas = branch_sigmas(c, jobs[group[gi]].polyline, strata, R, idx, tol);
                std::vector<Formula> disj;
                for (const SignCond& sg : sigmas)
                    disj.push_back(weak_sign_formula(strata.family, sg));
                Formula psi = Formula::disj(std::move(disj));
                parts[gi].push_back(map_polys(psi, [&](const MPoly& p) {
                    if (target == i + 1) return p.with_nvars(k);
                    return p.with_nvars(k).substitute(i + 1, MPoly::var(k, target));
                }));
            }
        }
        for (size_t gi = 0; gi < group.size(); ++gi) {
            out[group[gi]] = Formula::conj(std::move(parts[gi]));
            done[group[gi]] = true;
        }
    }
    return out;
}

Formula curve_to_closed(CurveSegRep& c) {
    const int i = c.i();
    const int k = c.k;
    if (static_cast<int>(c.g.size()) != k - i - 1)
        throw std::logic_error("curve_to_closed: coordinate count mismatch");
    std::vector<Formula> parts;
    auto add = [&](Formula f) {
        if (f.kind == Formula::Kind::And)
            for (auto& kd : f.kids) parts.push_back(std::move(kd));
        else
            parts.push_back(std::move(f));
    };
    auto embed_k = [&](const MPoly& p) { return p.with_nvars(k); };
    add(map_polys(weak_thom_formula(c.ctx), embed_k));
    if (c.g.empty()) {
        PlaneDecomposition dec = decompose_interval(c);
        add(map_polys(closure_from_marked(dec), embed_k));
        return Formula::conj(std::move(parts));
    }
    for (size_t idx = 0; idx < c.g.size(); ++idx) {
        PlaneDecomposition dec = decompose_projection(c, idx);
        Formula psi = closure_from_marked(dec);
        const int target = i + 1 + static_cast<int>(idx);  // X_j's final position
        add(map_polys(psi, [&](const MPoly& p) {
            if (target == i + 1) return p.with_nvars(k);
            return p.with_nvars(k).substitute(i + 1, MPoly::var(k, target));
        }));
    }
    return Formula::conj(std::move(parts));
}

}  // namespace sah
