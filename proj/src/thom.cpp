#include "sah/thom.hpp"

#include <stdexcept>

namespace sah {

void TriThom::extend(const ThomEncoding& tau) {
    if (tau.var != size()) throw std::logic_error("extend: coordinate index mismatch");
    tower.push_level(tau.root);
    coords.push_back(tau);
}

void TriThom::drop_last() {
    tower.pop_level();
    coords.pop_back();
}

void TriThom::refine_box(const Rat& w) {
    for (int guard = 0; guard < 100000; ++guard) {
        bool done = true;
        for (auto& lv : tower.levels)
            if (lv.hi - lv.lo >= w) done = false;
        if (done) return;
        tower.refine_all();
    }
    throw std::runtime_error("refine_box: did not converge");
}

std::vector<ThomEncoding> isolate_with_thom(const MPoly& P, TriThom& ctx) {
    auto roots = isolate_over(ctx.tower, P);
    std::vector<ThomEncoding> out;
    const int var = ctx.size();
    const int d = P.degree(var);
    for (auto& r : roots) {
        ThomEncoding t;
        t.poly = P;
        t.var = var;
        t.signs.assign(static_cast<size_t>(std::max(d, 0)) + 1, 0);
        for (auto& [m, s] : r.dsigns)
            if (m <= d) t.signs[static_cast<size_t>(m)] = s;
        t.root = std::move(r);
        out.push_back(std::move(t));
    }
    return out;
}

Cmp thom_compare(ThomEncoding& a, ThomEncoding& b, TriThom& ctx) {
    return compare_roots(ctx.tower, a.root, b.root);
}

int sign_at(const MPoly& Q, ThomEncoding& tau, TriThom& ctx) {
    if (tau.root.exact()) return ctx.tower.sign_mpoly(Q.substitute(tau.var, tau.root.lo), tau.var);
    return ctx.tower.sign_with_root(Q, tau.root);
}

Formula weak_thom_formula_for(const ThomEncoding& tau) {
    std::vector<Formula> atoms;
    MPoly d = tau.poly;
    for (size_t m = 0; m < tau.signs.size(); ++m) {
        if (m > 0) d = d.derivative(tau.var);
        if (d.is_constant()) break;  // constant atoms carry no information
        // normalization may flip the sign of the polynomial; track it in the relation
        int flip = sgn(d.terms().rbegin()->second);
        int s = flip * tau.signs[m];
        atoms.push_back(Formula::atom(d.normalized(), s == 0 ? Rel::EQ : (s > 0 ? Rel::GE : Rel::LE)));
    }
    return Formula::conj(std::move(atoms));
}

bool formula_holds_at(const Formula& f, Tower& t) {
    switch (f.kind) {
        case Formula::Kind::Atom: {
            int s = t.sign_mpoly(f.poly, t.height());
            if (f.rel == Rel::EQ) return s == 0;
            if (f.rel == Rel::GE) return s >= 0;
            return s <= 0;
        }
        case Formula::Kind::And:
            for (const auto& kd : f.kids)
                if (!formula_holds_at(kd, t)) return false;
            return true;
        case Formula::Kind::Or:
            for (const auto& kd : f.kids)
                if (formula_holds_at(kd, t)) return true;
            return false;
    }
    return false;
}

Formula weak_thom_formula(const TriThom& T) {
    std::vector<Formula> parts;
    for (auto& tau : T.coords) {
        Formula f = weak_thom_formula_for(tau);
        for (auto& a : f.kids) parts.push_back(std::move(a));
    }
    return Formula::conj(std::move(parts));
}

}  // namespace sah
