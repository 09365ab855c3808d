#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <set>

#include "sah/cad2.hpp"
#include "sah/formulas.hpp"

using namespace sah;

namespace {
MPoly T(int nvars, int i, int p = 1) { return MPoly::var(nvars, i, p); }
MPoly C(int nvars, const Rat& c) { return MPoly::constant(nvars, c); }

const char* kCircle = R"({
  "vars": ["x", "y"],
  "polys": { "c": [[[2,0],"1"],[[0,2],"1"],[[0,0],"-1"]] },
  "formula": {"atom": {"poly": "c", "rel": "eq"}}
})";

const char* kAnnulus = R"({
  "vars": ["x", "y"],
  "polys": {
    "inner": [[[2,0],"1"],[[0,2],"1"],[[0,0],"-1"]],
    "outer": [[[2,0],"1"],[[0,2],"1"],[[0,0],"-4"]]
  },
  "formula": {"and": [
    {"atom": {"poly": "inner", "rel": "ge"}},
    {"atom": {"poly": "outer", "rel": "le"}}
  ]}
})";
}  // namespace

TEST_CASE("parse: circle document") {
    ParsedInput in = parse_formula(kCircle);
    REQUIRE(in.vars.size() == 2);
    REQUIRE(in.polys.size() == 1);
    CHECK(in.polys.at("c") == T(2, 0, 2) + T(2, 1, 2) - C(2, Rat(1)));
    CHECK(in.formula.kind == Formula::Kind::Atom);
    CHECK(in.formula.rel == Rel::EQ);
}

TEST_CASE("parse: annulus is an AND of two atoms") {
    ParsedInput in = parse_formula(kAnnulus);
    CHECK(in.formula.kind == Formula::Kind::And);
    REQUIRE(in.formula.kids.size() == 2);
    CHECK(in.formula.kids[0].rel == Rel::GE);
    CHECK(in.formula.kids[1].rel == Rel::LE);
}

TEST_CASE("parse: rejections") {
    CHECK_THROWS_AS((void)parse_formula("{"), FormulaError);
    CHECK_THROWS_AS((void)parse_formula(R"({"vars":["x"],"polys":{},"formula":{"atom":{"poly":"p","rel":"eq"}}})"),
                    FormulaError);
    // strict relation: not a closed formula
    CHECK_THROWS_WITH_AS(
        (void)parse_formula(
            R"({"vars":["x"],"polys":{"p":[[[1],"1"]]},"formula":{"atom":{"poly":"p","rel":"lt"}}})"),
        doctest::Contains("not a closed formula"), FormulaError);
    // negation
    CHECK_THROWS_WITH_AS(
        (void)parse_formula(
            R"({"vars":["x"],"polys":{"p":[[[1],"1"]]},"formula":{"not":{"atom":{"poly":"p","rel":"eq"}}}})"),
        doctest::Contains("not a closed formula"), FormulaError);
    // malformed exponent vector (wrong arity)
    CHECK_THROWS_AS((void)parse_formula(
                        R"({"vars":["x","y"],"polys":{"p":[[[1],"1"]]},"formula":{"atom":{"poly":"p","rel":"eq"}}})"),
                    FormulaError);
}

TEST_CASE("eval_at: membership") {
    ParsedInput circ = parse_formula(kCircle);
    CHECK(eval_at(circ.formula, {Rat(1), Rat(0)}));
    CHECK(!eval_at(circ.formula, {Rat(0), Rat(0)}));
    ParsedInput ann = parse_formula(kAnnulus);
    CHECK(eval_at(ann.formula, {Rat(3, 2), Rat(0)}));
    CHECK(!eval_at(ann.formula, {Rat(0), Rat(0)}));
    CHECK(eval_at(ann.formula, {Rat(2), Rat(0)}));  // boundary included (closed)
    CHECK(eval_at(Formula::truth(), {Rat(0)}));
    CHECK(!eval_at(Formula::disj({}), {Rat(0)}));
}

TEST_CASE("serialize round-trip preserves the tree") {
    for (const char* doc : {kCircle, kAnnulus}) {
        ParsedInput in = parse_formula(doc);
        std::string s = serialize_formula(in.vars, in.formula);
        ParsedInput in2 = parse_formula(s);
        CHECK(in2.vars == in.vars);
        // structural equality of the trees
        std::function<bool(const Formula&, const Formula&)> eq =
            [&](const Formula& a, const Formula& b) {
                if (a.kind != b.kind) return false;
                if (a.kind == Formula::Kind::Atom)
                    return a.rel == b.rel && a.poly.terms() == b.poly.terms();
                if (a.kids.size() != b.kids.size()) return false;
                for (size_t i = 0; i < a.kids.size(); ++i)
                    if (!eq(a.kids[i], b.kids[i])) return false;
                return true;
            };
        CHECK(eq(in.formula, in2.formula));
        // determinism: serialize twice, identical bytes
        CHECK(serialize_formula(in2.vars, in2.formula) == s);
    }
}

TEST_CASE("weak_sign_formula") {
    std::vector<MPoly> fam = {T(2, 0), T(2, 1)};
    SignCond s;
    s.signs = {0, -1};
    Formula f = weak_sign_formula(fam, s);
    REQUIRE(f.kids.size() == 2);
    CHECK(f.kids[0].rel == Rel::EQ);
    CHECK(f.kids[1].rel == Rel::LE);
    CHECK(eval_at(f, {Rat(0), Rat(-2)}));
    CHECK(eval_at(f, {Rat(0), Rat(0)}));  // weak
    CHECK(!eval_at(f, {Rat(1), Rat(-2)}));
}

TEST_CASE("collect_polys deduplicates up to scaling") {
    Formula f = Formula::conj({Formula::atom(T(2, 0) * Rat(2), Rel::GE),
                               Formula::atom(T(2, 0) * Rat(-3), Rel::LE),
                               Formula::atom(T(2, 1), Rel::EQ)});
    auto ps = collect_polys(f);
    CHECK(ps.size() == 2);
}

TEST_CASE("realizable_signs_2d: single line") {
    auto out = realizable_signs_2d({T(2, 0)});
    REQUIRE(out.size() == 3);
    std::set<int> seen;
    for (auto& s : out) seen.insert(s.signs[0]);
    CHECK(seen == std::set<int>{-1, 0, 1});
}

TEST_CASE("realizable_signs_2d: positive definite") {
    auto out = realizable_signs_2d({T(2, 0, 2) + T(2, 1, 2) + C(2, Rat(1))});
    REQUIRE(out.size() == 1);
    CHECK(out[0].signs[0] == 1);
}

TEST_CASE("realizable_signs_2d: circle and line, grid-oracle cross-check") {
    std::vector<MPoly> Q = {T(2, 0, 2) + T(2, 1, 2) - C(2, Rat(1)), T(2, 0)};
    auto out = realizable_signs_2d(Q);
    std::set<std::vector<int>> got;
    for (auto& s : out) got.insert(s.signs);
    // dense-grid oracle: every sign condition seen on a 100x100 rational grid
    // must be reported (grid cannot see measure-zero strata like {0,0})
    std::set<std::vector<int>> grid;
    for (int a = -50; a < 50; ++a) {
        for (int b = -50; b < 50; ++b) {
            Rat x(a, 25), y(b, 25);
            grid.insert({sgn(Q[0].eval({x, y})), sgn(Q[1].eval({x, y}))});
        }
    }
    for (auto& g : grid) CHECK(got.count(g));
    // hand enumeration: all nine combinations are realizable here, e.g.
    // circle=0 & line=0 at (0,1); circle<0 & line=0 at (0,0); etc.
    CHECK(got.size() == 9);
    CHECK(got.count({0, 0}));
    CHECK(got.count({-1, 0}));
    CHECK(got.count({1, 0}));
    CHECK(got.count({0, 1}));
    CHECK(got.count({0, -1}));
}

TEST_CASE("realizable_signs_2d: parabola tangent to a line") {
    // y - x^2 and y: tangency at the origin; (0,0) realizable, (0,-1)? y=x^2>0 off 0 so no
    std::vector<MPoly> Q = {T(2, 1) - T(2, 0, 2), T(2, 1)};
    auto out = realizable_signs_2d(Q);
    std::set<std::vector<int>> got;
    for (auto& s : out) got.insert(s.signs);
    CHECK(got.count({0, 0}));    // the tangency point
    CHECK(got.count({0, 1}));    // on the parabola away from 0
    CHECK(!got.count({0, -1}));  // parabola never dips below y=0
    CHECK(!got.count({1, 0}));   // y=0 forces y-x^2 <= 0
    CHECK(!got.count({1, -1}));  // y-x^2 > 0 forces y > 0
    CHECK(got.count({1, 1}));
    CHECK(got.count({-1, -1}));
    CHECK(got.count({-1, 1}));
    CHECK(got.count({-1, 0}));
    CHECK(got.size() == 6);
}
