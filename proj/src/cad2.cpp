#include "sah/cad2.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <stdexcept>

#include "sah/upoly.hpp"

namespace sah {

namespace {

/** Family builder with structural deduplication (normalized term maps). */
struct FamilyBuilder {
    int nv;
    std::vector<MPoly> polys;
    std::map<MPoly::Terms, int> index;

    explicit FamilyBuilder(int nvars) : nv(nvars) {}

    /** Add p (normalized) unless constant/zero; returns family slot or -1. */
    int add(const MPoly& p) {
        MPoly n = p.normalized().with_nvars(nv);
        if (n.is_zero() || n.is_constant()) return -1;
        auto it = index.find(n.terms());
        if (it != index.end()) return it->second;
        int slot = static_cast<int>(polys.size());
        polys.push_back(n);
        index.emplace(polys.back().terms(), slot);
        return slot;
    }

    int find(const MPoly& p) const {
        MPoly n = p.normalized().with_nvars(nv);
        auto it = index.find(n.terms());
        return it == index.end() ? -1 : it->second;
    }
};

/** Insert roots into a sorted list, deduplicating via exact comparison.
    Adjacent survivors end up with certified-disjoint intervals. */
void merge_root(Tower& t, std::vector<AlgRoot>& out, AlgRoot r) {
    for (size_t j = 0; j < out.size(); ++j) {
        Cmp c = compare_roots(t, r, out[j]);
        if (c == Cmp::EQ) {
            if (r.exact() && !out[j].exact()) out[j] = std::move(r);
            return;
        }
        if (c == Cmp::LT) {
            out.insert(out.begin() + static_cast<long>(j), std::move(r));
            return;
        }
    }
    out.push_back(std::move(r));
}

/** All distinct roots of the polynomials in `ps` in variable t.height(). */
std::vector<AlgRoot> stack_roots(Tower& t, const std::vector<MPoly>& ps) {
    std::vector<AlgRoot> out;
    for (const auto& p : ps) {
        if (p.degree(t.height()) <= 0) continue;
        std::vector<AlgRoot> rs;
        try {
            rs = isolate_over(t, p);
        } catch (const std::domain_error&) {
            continue;  // identically zero on this fiber: no isolated roots
        }
        for (auto& r : rs) merge_root(t, out, std::move(r));
    }
    return out;
}

/** Sign of p relative to its normalized form (normalization makes the
    lex-leading coefficient positive, flipping all values when it was not). */
int norm_flip(const MPoly& p) {
    if (p.is_zero()) return 1;
    return sgn(p.terms().rbegin()->second);
}

/** Rational strictly between two adjacent (certified disjoint) roots. */
Rat between(const AlgRoot& a, const AlgRoot& b) {
    return simplest_rational_between(a.hi, b.lo);
}

struct Column {
    bool algebraic = false;
    Rat r;         // rational columns / sector samples
    AlgRoot root;  // algebraic columns
    int dim = 0;   // 1 for open-interval sectors, 0 for pinned values
};

/** The full ordered list of u-stack positions: outer sectors, rational
    separators, root columns, and sector samples between all of them. */
std::vector<Column> build_columns(std::vector<AlgRoot> uroots) {
    std::vector<Column> cols;
    auto rat_col = [](const Rat& v, int dim) {
        Column c;
        c.r = v;
        c.dim = dim;
        return c;
    };
    if (uroots.empty()) {
        cols.push_back(rat_col(Rat(0), 1));
        return cols;
    }
    const size_t n = uroots.size();
    std::vector<Rat> sep(n + 1);
    sep[0] = uroots.front().lo - 1;
    for (size_t j = 0; j + 1 < n; ++j) sep[j + 1] = between(uroots[j], uroots[j + 1]);
    sep[n] = uroots.back().hi + 1;

    cols.push_back(rat_col(sep[0] - 1, 1));
    for (size_t j = 0; j < n; ++j) {
        cols.push_back(rat_col(sep[j], 0));
        cols.push_back(rat_col(simplest_rational_between(sep[j], uroots[j].lo), 1));
        Rat above = simplest_rational_between(uroots[j].hi, sep[j + 1]);
        Column c;
        c.algebraic = true;
        c.root = std::move(uroots[j]);
        cols.push_back(std::move(c));
        cols.push_back(rat_col(above, 1));
    }
    cols.push_back(rat_col(sep[n], 0));
    cols.push_back(rat_col(sep[n] + 1, 1));
    return cols;
}

/** Saturation result shared by the full decomposition and the strata view. */
struct Saturation {
    FamilyBuilder fam;
    std::vector<Column> cols;
    std::vector<int> input_slot, input_flip, input_const_sign;
};

Saturation saturate_plane(const std::vector<MPoly>& input, TriThom& ctx) {
    const int i = ctx.size();
    const int u = i, w = i + 1, nv = i + 2;
    Saturation sat{FamilyBuilder(nv), {}, {}, {}, {}};
    FamilyBuilder& fam = sat.fam;

    // inputs (constants recorded aside)
    for (const auto& p0 : input) {
        MPoly p = p0.with_nvars(nv);
        int slot = fam.add(p);
        sat.input_slot.push_back(slot);
        sat.input_flip.push_back(norm_flip(p));
        sat.input_const_sign.push_back(slot >= 0 ? 0
                                                 : (p.is_zero() ? 0 : sgn(p.constant_value())));
    }

    // derivative chains in w (Thom pinning along fibers)
    {
        std::vector<MPoly> base = fam.polys;
        for (const auto& f : base) {
            MPoly d = f;
            while (d.degree(w) >= 1) {
                d = d.derivative(w);
                fam.add(d);
            }
        }
    }

    // projection to u: coefficients and principal subresultant coefficients
    // of all pairs of w-dependent members (tangencies, crossings, degree drops)
    std::vector<MPoly> uproj;
    {
        std::vector<MPoly> wmem;
        for (const auto& f : fam.polys)
            if (f.degree(w) >= 1) wmem.push_back(f);
        auto push_uproj = [&](const MPoly& p) {
            MPoly n = p.normalized().with_nvars(nv);
            if (n.is_zero() || n.is_constant()) return;
            if (n.degree(u) <= 0) return;  // context-only: constant sign over ctx
            uproj.push_back(n);
        };
        for (const auto& f : wmem)
            for (const auto& c : f.coeffs_wrt(w)) push_uproj(c);
        for (size_t a = 0; a < wmem.size(); ++a) {
            for (size_t b = a + 1; b < wmem.size(); ++b) {
                auto chain = subresultant_chain(wmem[a], wmem[b], w);
                for (size_t j = 0; j < chain.size(); ++j) {
                    if (chain[j].is_zero()) continue;
                    auto cs = chain[j].coeffs_wrt(w);
                    if (cs.size() > j) push_uproj(cs[j]);  // principal coefficient
                }
            }
        }
    }
    for (const auto& p : uproj) fam.add(p);

    // u-roots; degenerate (multiple) roots trigger derivative-chain saturation
    // of the offending u-polynomial so weak conditions stay connected
    std::vector<AlgRoot> uroots;
    {
        bool again = true;
        int rounds = 0;
        while (again && rounds++ < 8) {
            again = false;
            std::vector<MPoly> upolys;
            for (const auto& f : fam.polys)
                if (f.degree(w) == 0 && f.degree(u) >= 1) upolys.push_back(f);
            uroots.clear();
            for (const auto& g : upolys) {
                if (g.degree(u) <= 0) continue;
                std::vector<AlgRoot> rs;
                try {
                    rs = isolate_over(ctx.tower, g);
                } catch (const std::domain_error&) {
                    continue;
                }
                bool multiple = false;
                for (auto& r : rs)
                    if (r.dsigns.count(1) && r.dsigns.at(1) == 0) multiple = true;
                if (multiple && g.degree(u) >= 2 && fam.find(g.derivative(u)) < 0) {
                    MPoly d = g;
                    while (d.degree(u) >= 2) {
                        d = d.derivative(u);
                        fam.add(d);
                    }
                    again = true;
                }
                if (again) break;
                for (auto& r : rs) merge_root(ctx.tower, uroots, std::move(r));
            }
        }
    }

    // separators: rational columns pinning each u-interval exactly
    sat.cols = build_columns(std::move(uroots));
    for (const auto& c : sat.cols) {
        if (!c.algebraic && c.dim == 0)
            fam.add(MPoly::var(nv, u) - MPoly::constant(nv, c.r));
    }
    return sat;
}

}  // namespace

PlaneStrata stratify_plane(const std::vector<MPoly>& input, TriThom& ctx) {
    Saturation sat = saturate_plane(input, ctx);
    PlaneStrata out;
    out.family = std::move(sat.fam.polys);
    for (auto& c : sat.cols) {
        if (c.algebraic)
            out.uroots.push_back(std::move(c.root));
        else if (c.dim == 0)
            out.separators.push_back(c.r);
    }
    return out;
}

PlaneDecomposition plane_decompose(const std::vector<MPoly>& input, TriThom& ctx,
                                   const CellVisitor& visit) {
    const int i = ctx.size();
    const int u = i, w = i + 1, nv = i + 2;
    PlaneDecomposition dec;
    Saturation sat = saturate_plane(input, ctx);
    FamilyBuilder& fam = sat.fam;
    std::vector<Column>& cols = sat.cols;
    dec.input_slot = std::move(sat.input_slot);
    dec.input_flip = std::move(sat.input_flip);
    dec.input_const_sign = std::move(sat.input_const_sign);

    dec.family = fam.polys;
    const int F = static_cast<int>(dec.family.size());

    // stacks
    std::vector<MPoly> wmembers;
    for (const auto& f : dec.family)
        if (f.degree(w) >= 1) wmembers.push_back(f);

    for (auto& col : cols) {
        Tower t = ctx.tower.clone();
        if (col.algebraic) {
            t.push_level(col.root.anchor, col.root.lo, col.root.hi);
        } else {
            t.push_level(MPoly::var(nv, u) - MPoly::constant(nv, col.r), col.r, col.r);
        }

        // per-column signs of w-independent members
        std::vector<int> base_sign(static_cast<size_t>(F), 2);  // 2 = not yet known
        for (int s = 0; s < F; ++s)
            if (dec.family[s].degree(w) == 0) base_sign[s] = t.sign_mpoly(dec.family[s], w);

        std::vector<AlgRoot> wroots = stack_roots(t, wmembers);
        for (auto& r : wroots) refine_root(t, r, Rat(1, 1024));

        auto record = [&](bool w_algebraic, const Rat& wr, AlgRoot* wroot, int wdim) {
            PlaneCell cell;
            cell.sigma.signs.assign(static_cast<size_t>(F), 0);
            for (int s = 0; s < F; ++s) {
                if (base_sign[s] != 2) {
                    cell.sigma.signs[s] = base_sign[s];
                } else if (!w_algebraic) {
                    cell.sigma.signs[s] = t.sign_mpoly(dec.family[s].substitute(w, wr), w);
                } else {
                    cell.sigma.signs[s] = t.sign_with_root(dec.family[s], *wroot);
                }
            }
            cell.dim = col.dim + wdim;
            Ivl ub = col.algebraic ? Ivl(t.levels.back().lo, t.levels.back().hi) : Ivl(col.r);
            Ivl wb = w_algebraic ? Ivl(wroot->lo, wroot->hi) : Ivl(wr);
            cell.box = {ub, wb};
            if (visit) {
                AlgRoot wv;
                if (w_algebraic) {
                    wv = *wroot;
                } else {
                    wv.anchor = MPoly::var(nv, w) - MPoly::constant(nv, wr);
                    wv.lo = wr;
                    wv.hi = wr;
                }
                cell.marked = visit(t, wv, cell.dim);
            }
            dec.cells.push_back(std::move(cell));
        };

        if (wroots.empty()) {
            record(false, Rat(0), nullptr, 1);
        } else {
            record(false, wroots.front().lo - 1, nullptr, 1);
            for (size_t j = 0; j < wroots.size(); ++j) {
                record(true, Rat(0), &wroots[j], 0);
                Rat s = j + 1 < wroots.size() ? between(wroots[j], wroots[j + 1])
                                              : wroots[j].hi + 1;
                record(false, s, nullptr, 1);
            }
        }
    }
    return dec;
}

bool qf_holds_on(const QfFormula& phi, const PlaneDecomposition& dec, const SignCond& sigma) {
    auto atom_ok = [&](const QfAtom& a) {
        MPoly n = a.poly.normalized();
        if (n.is_zero() || n.is_constant()) {
            int s = n.is_zero() ? 0 : sgn(n.constant_value());
            return a.strict ? s == a.sign : (s == a.sign || s == 0);
        }
        n = n.with_nvars(dec.family.empty() ? n.nvars() : dec.family.front().nvars());
        int flip = norm_flip(a.poly);
        for (size_t i = 0; i < dec.family.size(); ++i) {
            if (dec.family[i].terms() == n.terms()) {
                int s = flip * sigma.signs[i];  // sign of the original atom polynomial
                return a.strict ? s == a.sign : (s == a.sign || s == 0);
            }
        }
        throw std::logic_error("qf_holds_on: atom polynomial not in the decomposition family");
    };
    for (const auto& conj : phi.disjuncts) {
        bool ok = true;
        for (const auto& a : conj)
            if (!atom_ok(a)) {
                ok = false;
                break;
            }
        if (ok) return true;
    }
    return false;
}

Formula closure_from_cells(const PlaneDecomposition& dec, const QfFormula& phi) {
    std::set<std::vector<int>> seen;
    std::vector<Formula> parts;
    for (const auto& cell : dec.cells) {
        if (!qf_holds_on(phi, dec, cell.sigma)) continue;
        if (!seen.insert(cell.sigma.signs).second) continue;
        parts.push_back(weak_sign_formula(dec.family, cell.sigma));
    }
    return Formula::disj(std::move(parts));
}

Formula closure_from_marked(const PlaneDecomposition& dec) {
    std::set<std::vector<int>> seen;
    std::vector<Formula> parts;
    for (const auto& cell : dec.cells) {
        if (!cell.marked) continue;
        if (!seen.insert(cell.sigma.signs).second) continue;
        parts.push_back(weak_sign_formula(dec.family, cell.sigma));
    }
    return Formula::disj(std::move(parts));
}

std::vector<SignCond> realizable_signs_2d(const std::vector<MPoly>& Q) {
    TriThom ctx;
    PlaneDecomposition dec = plane_decompose(Q, ctx);
    std::set<SignCond> out;
    for (const auto& cell : dec.cells) {
        SignCond restricted;
        for (size_t i = 0; i < Q.size(); ++i) {
            int slot = dec.input_slot[i];
            restricted.signs.push_back(
                slot >= 0 ? dec.input_flip[i] * cell.sigma.signs[static_cast<size_t>(slot)]
                          : dec.input_const_sign[i]);
        }
        out.insert(std::move(restricted));
    }
    return {out.begin(), out.end()};
}

}  // namespace sah
