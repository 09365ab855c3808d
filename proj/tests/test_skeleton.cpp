#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "sah/skeleton.hpp"

using namespace sah;

namespace {
MPoly V(int nvars, int i, int p = 1) { return MPoly::var(nvars, i, p); }
MPoly C(int nvars, const Rat& c) { return MPoly::constant(nvars, c); }

MPoly circle2() { return V(2, 0, 2) + V(2, 1, 2) - C(2, Rat(1)); }

Formula circle_formula() { return Formula::atom(circle2(), Rel::EQ); }

MPoly torus3() {
    // (x^2 + y^2 + z^2 + 3)^2 - 16 (x^2 + y^2): tube radius 1 around the
    // circle of radius 2 in the (x, y) plane
    MPoly s = V(3, 0, 2) + V(3, 1, 2) + V(3, 2, 2) + C(3, Rat(3));
    return s * s - (V(3, 0, 2) + V(3, 1, 2)) * Rat(16);
}

/** Does some tau of the partition have the exact rational value v? */
bool has_value(MorsePartition& mp, const Rat& v) {
    const int var = mp.context.size();
    for (auto& tau : mp.taus) {
        AlgRoot ex;
        ex.anchor = V(var + 1, var) - C(var + 1, v);
        ex.lo = v;
        ex.hi = v;
        if (compare_roots(mp.context.tower, tau.root, ex) == Cmp::EQ) return true;
    }
    return false;
}

/** Triangular RUR for an exact rational point. */
RUR rational_rur(const std::vector<Rat>& x) {
    TriThom full;
    for (size_t j = 0; j < x.size(); ++j) {
        auto roots =
            isolate_with_thom(V(static_cast<int>(j) + 1, static_cast<int>(j)) -
                                  C(static_cast<int>(j) + 1, x[j]),
                              full);
        REQUIRE(roots.size() == 1);
        full.extend(roots[0]);
    }
    return make_triangular_rur(full, static_cast<int>(x.size()));
}
}  // namespace

TEST_CASE("big_enough_radius exceeds the outer extent of the set") {
    TriThom ctx;
    // unit circle: must certify r > 1
    Rat r = big_enough_radius(ctx, {circle2()}, circle_formula(), 2);
    CHECK(r > 1);
    // annulus 1 <= x^2+y^2 <= 4: must certify r > 2
    MPoly inner = circle2();
    MPoly outer = V(2, 0, 2) + V(2, 1, 2) - C(2, Rat(4));
    Formula ann = Formula::conj({Formula::atom(inner, Rel::GE), Formula::atom(outer, Rel::LE)});
    TriThom ctx2;
    Rat ra = big_enough_radius(ctx2, {inner, outer}, ann, 2);
    CHECK(ra > 2);
}

TEST_CASE("big_enough_radius on the torus exceeds 3") {
    TriThom ctx;
    Rat r = big_enough_radius(ctx, {torus3()}, Formula::atom(torus3(), Rel::EQ), 3);
    CHECK(r > 3);
}

TEST_CASE("morse_partition: circle critical values, single point") {
    TriThom ctx;
    MorsePartition mp = morse_partition(ctx, Rat(10), {circle2()}, circle_formula(), 2);
    CHECK(has_value(mp, Rat(-1)));
    CHECK(has_value(mp, Rat(1)));
    for (size_t j = 0; j + 1 < mp.taus.size(); ++j)
        CHECK(compare_roots(mp.context.tower, mp.taus[j].root, mp.taus[j + 1].root) == Cmp::LT);

    TriThom ctx2;
    Formula pt = Formula::conj({Formula::atom(V(2, 0), Rel::EQ), Formula::atom(V(2, 1), Rel::EQ)});
    MorsePartition mp2 = morse_partition(ctx2, Rat(2), {V(2, 0), V(2, 1)}, pt, 2);
    REQUIRE(mp2.taus.size() == 1);
    CHECK(has_value(mp2, Rat(0)));
}

TEST_CASE("morse_partition: torus critical values along x") {
    TriThom ctx;
    MorsePartition mp =
        morse_partition(ctx, Rat(10), {torus3()}, Formula::atom(torus3(), Rel::EQ), 3);
    for (Rat v : {Rat(-3), Rat(-1), Rat(1), Rat(3)}) CHECK(has_value(mp, v));
}

TEST_CASE("curve_segments: unit circle has one populated slab with two branches") {
    TriThom ctx;
    CurveSegments cs = curve_segments(ctx, {circle2()}, circle_formula(), 2);
    int populated = 0;
    const SlabData* active = nullptr;
    for (auto& sd : cs.slabs)
        if (!sd.curves.empty()) {
            ++populated;
            active = &sd;
        }
    REQUIRE(populated == 1);
    REQUIRE(active->curves.size() == 2);
    // the populated slab is exactly (-1, 1)
    size_t j = static_cast<size_t>(active - cs.slabs.data());
    CHECK(has_value(cs.partition, Rat(-1)));
    CHECK(has_value(cs.partition, Rat(1)));
    {
        AlgRoot lo;
        lo.anchor = V(1, 0) + C(1, Rat(1));
        lo.lo = Rat(-1);
        lo.hi = Rat(-1);
        CHECK(compare_roots(ctx.tower, cs.partition.taus[j].root, lo) == Cmp::EQ);
    }
    // branch points at x = 0 are (0, 1) and (0, -1)
    std::vector<Rat> ys;
    for (auto& c : cs.slabs[j].curves) {
        auto box = curve_eval(const_cast<CurveSegRep&>(c), Rat(0), Rat(1, 100));
        CHECK(box[0].lo == 0);
        CHECK(box[0].hi == 0);
        CHECK((box[1].lo > Rat(9, 10) || box[1].hi < Rat(-9, 10)));
    }
    // endpoint vertices are (+-1, 0)
    RUR pl = rational_rur({Rat(-1), Rat(0)});
    RUR pr = rational_rur({Rat(1), Rat(0)});
    for (auto& [l, rrr] : cs.slabs[j].ends) {
        CHECK(same_point(l, pl));
        CHECK(same_point(rrr, pr));
    }
}

TEST_CASE("curve_segments: two disjoint circles give two populated slabs") {
    MPoly c1 = (V(2, 0) - C(2, Rat(2))) * (V(2, 0) - C(2, Rat(2))) + V(2, 1, 2) - C(2, Rat(1));
    MPoly c2 = (V(2, 0) + C(2, Rat(2))) * (V(2, 0) + C(2, Rat(2))) + V(2, 1, 2) - C(2, Rat(1));
    Formula phi = Formula::disj({Formula::atom(c1, Rel::EQ), Formula::atom(c2, Rel::EQ)});
    TriThom ctx;
    CurveSegments cs = curve_segments(ctx, {c1, c2}, phi, 2);
    int populated = 0;
    for (auto& sd : cs.slabs)
        if (!sd.curves.empty()) {
            ++populated;
            CHECK(sd.curves.size() == 2);
        }
    CHECK(populated == 2);
}

TEST_CASE("curve_segments: solid disk keeps its boundary branches") {
    Formula phi = Formula::atom(circle2(), Rel::LE);
    TriThom ctx;
    CurveSegments cs = curve_segments(ctx, {circle2()}, phi, 2);
    int populated = 0;
    for (auto& sd : cs.slabs)
        if (!sd.curves.empty()) {
            ++populated;
            CHECK(sd.curves.size() == 2);  // fiber segment endpoints on the circle
        }
    CHECK(populated == 1);
}

TEST_CASE("one_dim_subset: circle becomes two edges joining two vertices") {
    TriThom ctx;
    SkeletonNet net = one_dim_subset(ctx, {circle2()}, circle_formula(), {}, 2);
    CHECK(net.edges.size() == 2);
    CHECK(net.vertices.size() == 2);
    RUR pl = rational_rur({Rat(-1), Rat(0)});
    RUR pr = rational_rur({Rat(1), Rat(0)});
    bool sawl = false, sawr = false;
    for (auto& v : net.vertices) {
        if (same_point(v, pl)) sawl = true;
        if (same_point(v, pr)) sawr = true;
    }
    CHECK(sawl);
    CHECK(sawr);
    for (size_t e = 0; e < net.edges.size(); ++e) {
        CHECK(net.left[e] >= 0);
        CHECK(net.right[e] >= 0);
        CHECK(net.left[e] != net.right[e]);
    }
}

TEST_CASE("one_dim_subset: horizontal segment reproduces itself") {
    // S = { y = 0, -1 <= x <= 1 }
    MPoly xr = V(2, 0, 2) - C(2, Rat(1));
    Formula phi = Formula::conj({Formula::atom(V(2, 1), Rel::EQ), Formula::atom(xr, Rel::LE)});
    TriThom ctx;
    SkeletonNet net = one_dim_subset(ctx, {V(2, 1), xr}, phi, {}, 2);
    CHECK(net.vertices.size() == 2);
    CHECK(net.edges.size() == 1);
    // the edge is the graph branch y = 0 over (-1, 1)
    auto box = curve_eval(net.edges[0], Rat(1, 3), Rat(1, 100));
    CHECK(box[0].lo == Rat(1, 3));
    CHECK(box[1].contains_zero());
}

TEST_CASE("one_dim_subset: marked input point lands on the network") {
    TriThom ctx;
    RUR m = rational_rur({Rat(3, 5), Rat(4, 5)});  // on the circle
    SkeletonNet net = one_dim_subset(ctx, {circle2()}, circle_formula(), {m}, 2);
    bool found = false;
    for (auto& v : net.vertices)
        if (same_point(v, m)) found = true;
    CHECK(found);
    // the partition gained x = 3/5, so the circle now splits into more arcs
    CHECK(net.edges.size() >= 3);
}
