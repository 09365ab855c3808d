#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "sah/reps.hpp"
#include "sah/thom.hpp"

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

bool box_contains(const std::vector<Ivl>& box, const std::vector<Rat>& p) {
    if (box.size() != p.size()) return false;
    for (size_t j = 0; j < p.size(); ++j)
        if (p[j] < box[j].lo || p[j] > box[j].hi) return false;
    return true;
}

/** Upper unit-circle branch over (-1, 1): y = sqrt(1 - x^2). */
CurveSegRep upper_circle_branch() {
    CurveSegRep c;
    c.k = 2;
    c.f = V(2, 1, 2) + V(2, 0, 2) - C(2, Rat(1));  // T^2 + x^2 - 1
    c.g0 = C(2, Rat(1));
    c.g = {V(2, 1)};
    c.rho = {0, 1, 1};  // dT f = 2T > 0 on the upper branch
    c.tau1 = exact_enc(c.ctx, Rat(-1));
    c.tau2 = exact_enc(c.ctx, Rat(1));
    return c;
}
}  // namespace

TEST_CASE("rur_point: sqrt(2)/2 from f=T^2-2, g0=2, g1=T") {
    RUR u;
    u.k = 1;
    u.f = V(1, 0, 2) - C(1, Rat(2));
    u.g0 = C(1, Rat(2));
    u.g = {V(1, 0)};
    auto roots = isolate_with_thom(u.f, u.ctx);
    REQUIRE(roots.size() == 2);
    u.tau = roots[1];  // positive root
    auto box = rur_point(u, Rat(1, 1000));
    REQUIRE(box.size() == 1);
    CHECK(box[0].width() < Rat(1, 1000));
    // sqrt(2)/2 is in (0.7071, 0.70711)
    CHECK(box[0].lo < Rat(70711, 100000));
    CHECK(box[0].hi > Rat(7071, 10000));
    // tighter request yields a tighter certified box
    auto box2 = rur_point(u, Rat(1, 1000000));
    CHECK(box2[0].width() < Rat(1, 1000000));
    CHECK(box2[0].lo >= box[0].lo - box[0].width());
}

TEST_CASE("rur_point: vanishing denominator is rejected") {
    RUR u;
    u.k = 1;
    u.f = V(1, 0, 2) - C(1, Rat(2));
    u.g0 = V(1, 0, 2) - C(1, Rat(2));  // vanishes at the root
    u.g = {V(1, 0)};
    auto roots = isolate_with_thom(u.f, u.ctx);
    u.tau = roots[1];
    CHECK_THROWS_AS((void)rur_point(u, Rat(1, 10)), std::domain_error);
}

TEST_CASE("curve_eval on the upper circle branch") {
    CurveSegRep c = upper_circle_branch();
    auto b0 = curve_eval(c, Rat(0), Rat(1, 1000));
    REQUIRE(b0.size() == 2);
    CHECK(box_contains(b0, {Rat(0), Rat(1)}));
    CHECK(b0[0].width() == 0);  // parameter coordinate is exact
    auto bh = curve_eval(c, Rat(1, 2), Rat(1, 1000));
    CHECK(bh[0].lo == Rat(1, 2));
    CHECK(bh[0].hi == Rat(1, 2));
    // sqrt(3)/2 is in (0.8660, 0.8661)
    CHECK(bh[1].lo < Rat(8661, 10000));
    CHECK(bh[1].hi > Rat(866, 1000));
    CHECK(bh[1].width() < Rat(1, 1000));
    // outside the parameter interval
    CHECK_THROWS_AS((void)curve_eval(c, Rat(2), Rat(1, 10)), std::domain_error);
    CHECK_THROWS_AS((void)curve_eval(c, Rat(-1), Rat(1, 10)), std::domain_error);
}

TEST_CASE("curve_endpoints of the circle branches meet at (-1,0) and (1,0)") {
    CurveSegRep up = upper_circle_branch();
    CurveSegRep dn = upper_circle_branch();
    dn.rho = {0, -1, 1};  // lower branch
    auto [ul, ur] = curve_endpoints(up);
    auto [dl, dr] = curve_endpoints(dn);
    auto bl = rur_point(ul, Rat(1, 1000));
    auto br = rur_point(ur, Rat(1, 1000));
    CHECK(box_contains(bl, {Rat(-1), Rat(0)}));
    CHECK(box_contains(br, {Rat(1), Rat(0)}));
    // the two branches share their endpoints, and left != right
    CHECK(same_point(ul, dl));
    CHECK(same_point(ur, dr));
    CHECK(!same_point(ul, ur));
    CHECK(!same_point(ul, dr));
}

TEST_CASE("curve with shared denominator: (x, sqrt x, sqrt x) over (1, 4)") {
    CurveSegRep c;
    c.k = 3;
    c.f = V(2, 1, 2) - V(2, 0);  // T^2 - x, branch T = sqrt(x)
    c.g0 = V(2, 1);              // g0 = T
    c.g = {V(2, 1, 2), V(2, 0)};  // y = T^2/T = sqrt x, z = x/T = sqrt x
    c.rho = {0, 1, 1};
    c.tau1 = exact_enc(c.ctx, Rat(1));
    c.tau2 = exact_enc(c.ctx, Rat(4));
    auto b = curve_eval(c, Rat(9, 4), Rat(1, 1000));
    REQUIRE(b.size() == 3);
    CHECK(box_contains(b, {Rat(9, 4), Rat(3, 2), Rat(3, 2)}));
    auto [l, r] = curve_endpoints(c);
    CHECK(box_contains(rur_point(l, Rat(1, 1000)), {Rat(1), Rat(1), Rat(1)}));
    CHECK(box_contains(rur_point(r, Rat(1, 1000)), {Rat(4), Rat(2), Rat(2)}));
    // recomputing an endpoint gives the same point
    auto [l2, r2] = curve_endpoints(c);
    CHECK(same_point(l, l2));
    CHECK(same_point(r, r2));
    CHECK(!same_point(l, r));
}

TEST_CASE("segment along the last coordinate (no dependent coordinates)") {
    CurveSegRep c;
    c.k = 2;
    // context: x = sqrt(2)
    {
        auto roots = isolate_with_thom(V(1, 0, 2) - C(1, Rat(2)), c.ctx);
        c.ctx.extend(roots[1]);
    }
    c.f = V(3, 2) - V(3, 1);  // formal; unused when g is empty
    c.g0 = C(3, Rat(1));
    c.rho = {0, 1};
    c.tau1 = exact_enc(c.ctx, Rat(0));
    c.tau2 = exact_enc(c.ctx, Rat(3));
    auto b = curve_eval(c, Rat(2), Rat(1, 1000));
    REQUIRE(b.size() == 2);
    CHECK(b[1].lo == Rat(2));
    // x coordinate brackets sqrt(2)
    CHECK(b[0].lo < Rat(141422, 100000));
    CHECK(b[0].hi > Rat(14142, 10000));
    auto [l, r] = curve_endpoints(c);
    CHECK(box_contains(rur_point(l, Rat(1, 1000)), {}) == false);  // arity guard
    auto lb = rur_point(l, Rat(1, 1000));
    REQUIRE(lb.size() == 2);
    CHECK(lb[1].lo == Rat(0));
    CHECK(lb[1].hi == Rat(0));
    auto rb = rur_point(r, Rat(1, 1000));
    CHECK(rb[1].lo == Rat(3));
}

TEST_CASE("same_point identifies equal algebraic points across anchors") {
    auto tri = [](const MPoly& p, int pick) {
        TriThom t;
        auto roots = isolate_with_thom(p, t);
        t.extend(roots[static_cast<size_t>(pick)]);
        return make_triangular_rur(t, 1);
    };
    RUR a = tri(V(1, 0, 2) - C(1, Rat(2)), 1);  // sqrt 2 from X^2-2
    RUR b = tri(V(1, 0, 4) - C(1, Rat(4)), 1);  // sqrt 2 from X^4-4
    RUR c = tri(V(1, 0) - C(1, Rat(3, 2)), 0);  // 3/2
    CHECK(same_point(a, b));
    CHECK(!same_point(a, c));
    CHECK(!same_point(b, c));
}
