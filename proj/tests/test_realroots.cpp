#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>

#include "sah/tower.hpp"
#include "sah/upoly.hpp"

using namespace sah;

namespace {
MPoly T(int nvars, int i, int p = 1) { return MPoly::var(nvars, i, p); }
MPoly C(int nvars, const Rat& c) { return MPoly::constant(nvars, c); }

UPoly up(std::vector<int> cs) {
    std::vector<Rat> r;
    for (int c : cs) r.emplace_back(c);
    return UPoly(std::move(r));
}
}  // namespace

TEST_CASE("sturm counting: frozen examples") {
    // x^2 - 2: two real roots
    CHECK(count_real_roots(up({-2, 0, 1})) == 2);
    // x^2 + 1: none
    CHECK(count_real_roots(up({1, 0, 1})) == 0);
    // (x-1)(x-2)(x-3) = x^3 - 6x^2 + 11x - 6: three
    CHECK(count_real_roots(up({-6, 11, -6, 1})) == 3);
    // (x-1)^2: multiplicity collapses to one distinct root
    CHECK(count_real_roots(up({1, -2, 1})) == 1);
    // Wilkinson-light: (x-1)(x-2)...(x-6)
    UPoly w = up({1});
    for (int k = 1; k <= 6; ++k) w = w * up({-k, 1});
    CHECK(count_real_roots(w) == 6);
    auto seq = sturm_sequence(up({-2, 0, 1}));
    CHECK(sturm_count(seq, Rat(0), Rat(2)) == 1);
    CHECK(sturm_count(seq, Rat(-2), Rat(0)) == 1);
    CHECK(sturm_count(seq, Rat(2), Rat(100)) == 0);
}

TEST_CASE("isolation returns disjoint sign-change intervals, rational roots snapped") {
    // roots: -1 (exact), 1/3 (exact), sqrt(5) (irrational)
    UPoly p = up({1, 1}) * up({-1, 3}) * up({-5, 0, 1});
    auto roots = isolate_real_roots(p);
    REQUIRE(roots.size() == 4);
    CHECK(roots[0].hi < Rat(-2));          // -sqrt(5)
    CHECK(roots[1].exact());
    CHECK(roots[1].lo == Rat(-1));
    CHECK(roots[2].exact());
    CHECK(roots[2].lo == Rat(1, 3));
    CHECK(!roots[3].exact());
    CHECK(roots[3].lo > Rat(2));
    CHECK(roots[3].hi < Rat(3));
    UPoly sf = upoly_squarefree(p);
    for (auto& r : roots)
        if (!r.exact()) CHECK(sgn(sf.eval(r.lo)) * sgn(sf.eval(r.hi)) == -1);
    for (size_t i = 0; i + 1 < roots.size(); ++i) CHECK(roots[i].hi <= roots[i + 1].lo);
}

TEST_CASE("isolation handles clustered roots") {
    // roots at 0, 1/1024, 1/512
    UPoly p = up({0, 1}) * (up({0, 1024}) - up({1})) * (up({0, 512}) - up({1}));
    auto roots = isolate_real_roots(p);
    REQUIRE(roots.size() == 3);
    CHECK(roots[0].lo == Rat(0));
    CHECK(roots[1].lo == Rat(1, 1024));
    CHECK(roots[2].lo == Rat(1, 512));
}

TEST_CASE("random polynomials: sturm count equals isolated interval count") {
    std::mt19937 rng(20240817);
    std::uniform_int_distribution<int> coef(-9, 9);
    for (int trial = 0; trial < 200; ++trial) {
        std::vector<Rat> cs;
        int deg = 1 + trial % 7;
        for (int i = 0; i <= deg; ++i) cs.emplace_back(coef(rng));
        UPoly p{std::move(cs)};
        if (p.is_zero() || p.degree() == 0) continue;
        int n = count_real_roots(p);
        auto roots = isolate_real_roots(p);
        CHECK(static_cast<int>(roots.size()) == n);
        for (size_t i = 0; i + 1 < roots.size(); ++i) CHECK(roots[i].hi <= roots[i + 1].lo);
    }
}

TEST_CASE("simplest rational between") {
    CHECK(simplest_rational_between(Rat(0), Rat(1)) == Rat(1, 2));
    CHECK(simplest_rational_between(Rat(1, 3), Rat(1, 2)) == Rat(2, 5));
    CHECK(simplest_rational_between(Rat(5, 2), Rat(7, 2)) == Rat(3));
    CHECK(simplest_rational_between(Rat(-1), Rat(1)) == Rat(0));
    Rat a(141421, 100000), b(141422, 100000);
    Rat m = simplest_rational_between(a, b);
    CHECK(a < m);
    CHECK(m < b);
    CHECK(den(m) <= 1000);  // far simpler than the endpoints
}

TEST_CASE("tower level 0: sign determination at sqrt(2)") {
    Tower t;
    MPoly anchor = T(1, 0, 2) - C(1, Rat(2));
    t.push_level(anchor, Rat(1), Rat(2));
    CHECK(t.sign_mpoly(anchor) == 0);
    CHECK(t.sign_mpoly(T(1, 0) - C(1, Rat(1))) == 1);           // sqrt(2) > 1
    CHECK(t.sign_mpoly(T(1, 0) - C(1, Rat(3, 2))) == -1);       // sqrt(2) < 3/2
    CHECK(t.sign_mpoly(T(1, 0, 2) - C(1, Rat(2))) == 0);
    CHECK(t.sign_mpoly(T(1, 0, 4) - C(1, Rat(4))) == 0);        // x^4 - 4 = (x^2-2)(x^2+2)
    CHECK(t.sign_mpoly(T(1, 0, 3) - T(1, 0) * Rat(2)) == 0);    // x(x^2 - 2)
    CHECK(t.sign_mpoly(T(1, 0, 2) - C(1, Rat(199, 100))) == 1);
}

TEST_CASE("tower height 2: arithmetic at (sqrt(2), sqrt(3))") {
    Tower t;
    t.push_level(T(2, 0, 2) - C(2, Rat(2)), Rat(1), Rat(2));
    t.push_level(T(2, 1, 2) - C(2, Rat(3)), Rat(1), Rat(2));
    // (xy)^2 = 6
    MPoly xy2 = T(2, 0, 2) * T(2, 1, 2) - C(2, Rat(6));
    CHECK(t.sign_mpoly(xy2) == 0);
    // x + y is a root of z^4 - 10z^2 + 1; test the poly expanded at the point:
    // (x+y)^4 - 10(x+y)^2 + 1 = 0
    MPoly s = T(2, 0) + T(2, 1);
    MPoly q = s * s * s * s - s * s * Rat(10) + C(2, Rat(1));
    CHECK(t.sign_mpoly(q) == 0);
    CHECK(t.sign_mpoly(s - C(2, Rat(3))) == 1);   // sqrt2 + sqrt3 > 3
    CHECK(t.sign_mpoly(s - C(2, Rat(16, 5))) == -1);  // < 3.2
    CHECK(t.sign_mpoly(T(2, 1) - T(2, 0)) == 1);  // sqrt3 > sqrt2
}

TEST_CASE("tower modulus splitting: reducible anchor over the extension") {
    Tower t;
    t.push_level(T(2, 0, 2) - C(2, Rat(2)), Rat(1), Rat(2));
    // anchor y^2 - 2 over Q(sqrt2) factors as (y - x)(y + x); pick the positive root
    t.push_level(T(2, 1, 2) - C(2, Rat(2)), Rat(1), Rat(2));
    CHECK(t.sign_mpoly(T(2, 1) - T(2, 0)) == 0);  // forces a split: y == sqrt2 == x
    CHECK(t.sign_mpoly(T(2, 1) + T(2, 0)) == 1);
    CHECK(t.split_epoch > 0);
}

TEST_CASE("tower exact rational level") {
    Tower t;
    t.push_level(T(2, 0) * Rat(2) - C(2, Rat(3)), Rat(3, 2), Rat(3, 2));  // x = 3/2
    t.push_level(T(2, 1, 2) - T(2, 0), Rat(1), Rat(2));                   // y = sqrt(3/2)
    CHECK(t.sign_mpoly(T(2, 1, 2) * Rat(2) - C(2, Rat(3))) == 0);
    CHECK(t.sign_mpoly(T(2, 1) - C(2, Rat(5, 4))) == -1);  // sqrt(1.5) ~ 1.2247
    CHECK(t.sign_mpoly(T(2, 1) - C(2, Rat(6, 5))) == 1);
}

TEST_CASE("isolate_over at level 0 matches univariate isolation") {
    Tower t;
    MPoly p = (T(1, 0, 2) - C(1, Rat(2))) * (T(1, 0) - C(1, Rat(5)));
    auto roots = isolate_over(t, p);
    REQUIRE(roots.size() == 3);
    CHECK(roots[0].hi < 0);
    CHECK(roots[1].lo > 0);
    CHECK(roots[1].hi < 2);
    CHECK(roots[2].lo == Rat(5));
    CHECK(roots[2].exact());
    // Thom data: first derivative 3x^2 - ... positive at outer roots
    CHECK(roots[0].dsigns.at(0) == 0);
    CHECK(roots[2].dsigns.at(1) > 0);
}

TEST_CASE("isolate_over above sqrt(2): fiber roots of the unit circle pair") {
    Tower t;
    // x = 1/sqrt(2) is a root of 2x^2 - 1
    t.push_level(T(2, 0, 2) * Rat(2) - C(2, Rat(1)), Rat(0), Rat(1));
    // circle x^2 + y^2 - 1 has two fiber roots y = +-1/sqrt(2)
    MPoly circ = T(2, 0, 2) + T(2, 1, 2) - C(2, Rat(1));
    auto roots = isolate_over(t, circ);
    REQUIRE(roots.size() == 2);
    CHECK(roots[0].hi < 0);
    CHECK(roots[1].lo > 0);
    // both satisfy y^2 = 1/2
    for (auto& r : roots) {
        int s = t.sign_with_root(T(2, 1, 2) * Rat(2) - C(2, Rat(1)), r);
        CHECK(s == 0);
    }
    // tangency case: at x = 1 (exact), single root y = 0
    Tower t2;
    t2.push_level(T(2, 0) - C(2, Rat(1)), Rat(1), Rat(1));
    auto r2 = isolate_over(t2, circ);
    REQUIRE(r2.size() == 1);
    CHECK(r2[0].exact());
    CHECK(r2[0].lo == Rat(0));
}

TEST_CASE("isolate_over with double root at the point (tangent line)") {
    Tower t;
    t.push_level(T(2, 0, 2) - C(2, Rat(2)), Rat(1), Rat(2));  // x = sqrt2
    // (y - x)^2 expanded: y^2 - 2xy + x^2; double root at y = sqrt2
    MPoly p = T(2, 1, 2) - T(2, 0) * T(2, 1) * Rat(2) + T(2, 0, 2);
    auto roots = isolate_over(t, p);
    REQUIRE(roots.size() == 1);
    CHECK(t.sign_with_root(T(2, 1) - T(2, 0), roots[0]) == 0);
    CHECK(roots[0].dsigns.at(1) == 0);  // derivative also vanishes: multiplicity seen in Thom data
}

TEST_CASE("compare_roots distinguishes and certifies equality") {
    Tower t;
    MPoly p = T(1, 0, 2) - C(1, Rat(2));      // roots +-sqrt2
    MPoly q = T(1, 0, 4) - C(1, Rat(4));      // roots +-sqrt2 (and complex)
    auto rp = isolate_over(t, p);
    auto rq = isolate_over(t, q);
    REQUIRE(rp.size() == 2);
    REQUIRE(rq.size() == 2);
    CHECK(compare_roots(t, rp[1], rq[1]) == Cmp::EQ);
    CHECK(compare_roots(t, rp[0], rq[1]) == Cmp::LT);
    CHECK(compare_roots(t, rq[1], rp[0]) == Cmp::GT);
    MPoly r3 = T(1, 0, 2) - C(1, Rat(3));
    auto rr = isolate_over(t, r3);
    CHECK(compare_roots(t, rp[1], rr[1]) == Cmp::LT);  // sqrt2 < sqrt3
}

TEST_CASE("refine_root narrows to requested width") {
    Tower t;
    auto roots = isolate_over(t, T(1, 0, 2) - C(1, Rat(2)));
    AlgRoot r = roots[1];
    refine_root(t, r, Rat(1, 1000000));
    CHECK(r.hi - r.lo < Rat(1, 1000000));
    CHECK(r.lo * r.lo < 2);
    CHECK(r.hi * r.hi > 2);
}

TEST_CASE("height 3 tower: nested radicals") {
    Tower t;
    t.push_level(T(3, 0, 2) - C(3, Rat(2)), Rat(1), Rat(2));          // x = sqrt2
    t.push_level(T(3, 1, 2) - T(3, 0), Rat(1), Rat(2));               // y = 2^(1/4)
    t.push_level(T(3, 2, 2) - T(3, 1), Rat(1), Rat(2));               // z = 2^(1/8)
    CHECK(t.sign_mpoly(T(3, 2, 8) - C(3, Rat(2))) == 0);
    CHECK(t.sign_mpoly(T(3, 2) - C(3, Rat(1091, 1000))) == -1);  // 2^(1/8) ~ 1.0905
    CHECK(t.sign_mpoly(T(3, 2) - C(3, Rat(109, 100))) == 1);
    auto roots = isolate_over(t, MPoly::var(4, 3, 2).with_nvars(4) - T(3, 2).with_nvars(4));
    REQUIRE(roots.size() == 2);  // w = +-2^(1/16)
}
