#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "sah/closure.hpp"

using namespace sah;

namespace {
MPoly V(int nvars, int i, int p = 1) { return MPoly::var(nvars, i, p); }
MPoly C(int nvars, const Rat& c) { return MPoly::constant(nvars, c); }

ThomEncoding exact_enc(TriThom& ctx, const Rat& v) {
    int var = ctx.size();
    auto roots = isolate_with_thom(V(var + 1, var) - C(var + 1, v), ctx);
    REQUIRE(roots.size() == 1);
    return roots[0];
}

CurveSegRep upper_circle_branch() {
    CurveSegRep c;
    c.k = 2;
    c.f = V(2, 1, 2) + V(2, 0, 2) - C(2, Rat(1));
    c.g0 = C(2, Rat(1));
    c.g = {V(2, 1)};
    c.rho = {0, 1, 1};
    c.tau1 = exact_enc(c.ctx, Rat(-1));
    c.tau2 = exact_enc(c.ctx, Rat(1));
    return c;
}

/** Rational-point truth of a QfFormula (strict/weak atom semantics). */
bool qf_eval(const QfFormula& phi, const std::vector<Rat>& x) {
    for (const auto& conj : phi.disjuncts) {
        bool ok = true;
        for (const auto& a : conj) {
            std::vector<Rat> xx(x);
            xx.resize(static_cast<size_t>(a.poly.nvars()), Rat(0));
            int s = sgn(a.poly.eval(xx));
            if (!(a.strict ? s == a.sign : (s == a.sign || s == 0))) {
                ok = false;
                break;
            }
        }
        if (ok) return true;
    }
    return false;
}

/** Truth of a closed formula at the tower point (exact sign queries). */
bool holds_at(const Formula& f, Tower& t) {
    switch (f.kind) {
        case Formula::Kind::Atom: {
            int s = t.sign_mpoly(f.poly, t.height());
            if (f.rel == Rel::EQ) return s == 0;
            if (f.rel == Rel::GE) return s >= 0;
            return s <= 0;
        }
        case Formula::Kind::And:
            for (const auto& kd : f.kids)
                if (!holds_at(kd, t)) return false;
            return true;
        case Formula::Kind::Or:
            for (const auto& kd : f.kids)
                if (holds_at(kd, t)) return true;
            return false;
    }
    return false;
}
}  // namespace

TEST_CASE("closure_2d: open segment becomes the closed segment") {
    QfFormula phi;
    phi.disjuncts.push_back({{V(2, 0), 1, true},                   // x > 0
                             {V(2, 0) - C(2, Rat(1)), -1, true},   // x < 1
                             {V(2, 1), 0, true}});                 // y = 0
    TriThom ctx;
    Formula psi = closure_2d(phi, ctx);
    CHECK(eval_at(psi, {Rat(0), Rat(0)}));  // endpoints gained
    CHECK(eval_at(psi, {Rat(1), Rat(0)}));
    CHECK(eval_at(psi, {Rat(1, 2), Rat(0)}));
    CHECK(!eval_at(psi, {Rat(-1, 100), Rat(0)}));
    CHECK(!eval_at(psi, {Rat(1, 2), Rat(1, 100)}));
    CHECK(!eval_at(psi, {Rat(101, 100), Rat(0)}));
}

TEST_CASE("closure_2d: idempotence on an already closed set") {
    QfFormula phi;
    phi.disjuncts.push_back({{V(2, 0), 0, true}, {V(2, 1), 0, true}});  // the origin
    TriThom ctx;
    Formula psi = closure_2d(phi, ctx);
    CHECK(eval_at(psi, {Rat(0), Rat(0)}));
    CHECK(!eval_at(psi, {Rat(0), Rat(1, 1000)}));
    CHECK(!eval_at(psi, {Rat(-1, 1000), Rat(0)}));
}

TEST_CASE("project_curve_2d: upper circle branch is the open arc") {
    CurveSegRep c = upper_circle_branch();
    QfFormula pr = project_curve_2d(c, 2);
    CHECK(!pr.disjuncts.empty());
    CHECK(qf_eval(pr, {Rat(0), Rat(1)}));
    CHECK(qf_eval(pr, {Rat(3, 5), Rat(4, 5)}));
    CHECK(qf_eval(pr, {Rat(-3, 5), Rat(4, 5)}));
    CHECK(!qf_eval(pr, {Rat(1), Rat(0)}));    // endpoint excluded (open)
    CHECK(!qf_eval(pr, {Rat(-1), Rat(0)}));
    CHECK(!qf_eval(pr, {Rat(0), Rat(-1)}));   // lower branch
    CHECK(!qf_eval(pr, {Rat(0), Rat(0)}));
    CHECK(!qf_eval(pr, {Rat(3, 5), Rat(-4, 5)}));
}

TEST_CASE("curve_to_closed: upper circle branch closure includes (+-1, 0)") {
    CurveSegRep c = upper_circle_branch();
    Formula psi = curve_to_closed(c);
    CHECK(eval_at(psi, {Rat(0), Rat(1)}));
    CHECK(eval_at(psi, {Rat(3, 5), Rat(4, 5)}));
    CHECK(eval_at(psi, {Rat(-4, 5), Rat(3, 5)}));
    CHECK(eval_at(psi, {Rat(1), Rat(0)}));   // endpoints gained by closure
    CHECK(eval_at(psi, {Rat(-1), Rat(0)}));
    CHECK(!eval_at(psi, {Rat(0), Rat(-1)}));
    CHECK(!eval_at(psi, {Rat(0), Rat(0)}));
    CHECK(!eval_at(psi, {Rat(3, 5), Rat(81, 100)}));
    CHECK(!eval_at(psi, {Rat(2), Rat(0)}));
}

TEST_CASE("curve_to_closed: on-curve algebraic points satisfy, offsets fail") {
    CurveSegRep c = upper_circle_branch();
    Formula psi = curve_to_closed(c);
    for (int m = -9; m <= 9; m += 2) {
        Rat x(m, 10);
        // exact on-curve point (x, sqrt(1-x^2)) as a tower point
        Tower t;
        t.push_level(V(1, 0) - C(1, x), x, x);
        auto roots = isolate_over(t, c.f);
        REQUIRE(roots.size() == 2);
        Tower t2 = t.clone();
        t2.push_level(roots[1]);  // upper root
        CHECK(holds_at(psi, t2));
        // rational offset in y by 1/100 fails
        auto box = curve_eval(c, x, Rat(1, 1000));
        CHECK(!eval_at(psi, {x, box[1].hi + Rat(1, 100)}));
        CHECK(!eval_at(psi, {x, box[1].lo - Rat(1, 100)}));
    }
}

TEST_CASE("curve_to_closed: interval curve over an algebraic context") {
    CurveSegRep c;
    c.k = 2;
    {
        auto roots = isolate_with_thom(V(1, 0, 2) - C(1, Rat(2)), c.ctx);
        c.ctx.extend(roots[1]);  // x = sqrt(2)
    }
    c.f = V(3, 2) - V(3, 1);
    c.g0 = C(3, Rat(1));
    c.rho = {0, 1};
    c.tau1 = exact_enc(c.ctx, Rat(0));
    c.tau2 = exact_enc(c.ctx, Rat(3));
    Formula psi = curve_to_closed(c);
    // off the context line: fails at rational x
    CHECK(!eval_at(psi, {Rat(7, 5), Rat(1)}));
    CHECK(!eval_at(psi, {Rat(3, 2), Rat(1)}));
    // on the segment: exact evaluation over the context tower
    for (Rat y : {Rat(0), Rat(1), Rat(3), Rat(5, 2)}) {
        Tower t = c.ctx.tower.clone();
        t.push_level(V(2, 1) - C(2, y), y, y);
        CHECK(holds_at(psi, t));
    }
    // beyond the endpoints: fails even on the context line
    for (Rat y : {Rat(-1, 100), Rat(301, 100)}) {
        Tower t = c.ctx.tower.clone();
        t.push_level(V(2, 1) - C(2, y), y, y);
        CHECK(!holds_at(psi, t));
    }
}

TEST_CASE("curve_to_closed: space curve (x, sqrt x, sqrt x) over [1, 4]") {
    CurveSegRep c;
    c.k = 3;
    c.f = V(2, 1, 2) - V(2, 0);
    c.g0 = V(2, 1);
    c.g = {V(2, 1, 2), V(2, 0)};
    c.rho = {0, 1, 1};
    c.tau1 = exact_enc(c.ctx, Rat(1));
    c.tau2 = exact_enc(c.ctx, Rat(4));
    Formula psi = curve_to_closed(c);
    CHECK(eval_at(psi, {Rat(1), Rat(1), Rat(1)}));
    CHECK(eval_at(psi, {Rat(4), Rat(2), Rat(2)}));
    CHECK(eval_at(psi, {Rat(9, 4), Rat(3, 2), Rat(3, 2)}));
    CHECK(!eval_at(psi, {Rat(9, 4), Rat(3, 2), Rat(2)}));
    CHECK(!eval_at(psi, {Rat(9, 4), Rat(2), Rat(3, 2)}));
    CHECK(!eval_at(psi, {Rat(0), Rat(0), Rat(0)}));
    CHECK(!eval_at(psi, {Rat(5), Rat(0), Rat(0)}));
    // irrational on-curve point x = 2, y = z = sqrt(2)
    Tower t;
    t.push_level(V(1, 0) - C(1, Rat(2)), Rat(2), Rat(2));
    auto roots = isolate_over(t, c.f);
    REQUIRE(roots.size() == 2);
    t.push_level(roots[1]);
    auto zroots = isolate_over(t, V(3, 2, 2) - C(3, Rat(2)));
    REQUIRE(zroots.size() == 2);
    t.push_level(zroots[1]);
    CHECK(holds_at(psi, t));
}
