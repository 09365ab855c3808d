#include "sah/pipeline.hpp"

#include <chrono>
#include <map>
#include <numeric>
#include <stdexcept>
#include <utility>

namespace sah {

namespace {

using nlohmann::ordered_json;

long now_ms() {
    return std::chrono::duration_cast<std::chrono::milliseconds>(
               std::chrono::steady_clock::now().time_since_epoch())
        .count();
}

bool power_of_two(int n) { return n > 0 && (n & (n - 1)) == 0; }

std::vector<Rat> box_mid(const std::vector<Ivl>& box) {
    std::vector<Rat> m;
    m.reserve(box.size());
    for (const auto& iv : box) m.push_back((iv.lo + iv.hi) / 2);
    return m;
}

Formula embed_formula(const Formula& f, int k) {
    if (f.kind == Formula::Kind::Atom)
        return Formula::atom(f.poly.with_nvars(k), f.rel, f.id);
    std::vector<Formula> kids;
    kids.reserve(f.kids.size());
    for (const auto& kd : f.kids) kids.push_back(embed_formula(kd, k));
    return f.kind == Formula::Kind::And ? Formula::conj(std::move(kids))
                                        : Formula::disj(std::move(kids));
}

ordered_json formula_json(const std::vector<std::string>& vars, const Formula& f) {
    return ordered_json::parse(serialize_formula(vars, embed_formula(f, static_cast<int>(vars.size()))));
}

const char* field_name(Field f) { return f == Field::GF2 ? "gf2" : "rational"; }

/** Complex at the coarsest resolution whose Betti numbers agree with the next
    doubling; `verified_res` is that finer resolution. */
struct StableCx {
    CubicalComplex cx;
    BettiResult betti;
    int res = 0;
    int verified_res = 0;
};

StableCx stable_complex(const MemberOracle& member, const std::vector<Ivl>& box, int base,
                        int max_refine, int k, Field field) {
    CubicalComplex cur = build_complex(member, box, base, k);
    BettiResult cb = cubical_betti(cur, field);
    int res = base;
    for (int round = 0; round <= max_refine; ++round) {
        CubicalComplex fine = build_complex(member, box, 2 * res, k);
        BettiResult fb = cubical_betti(fine, field);
        if (cb.b0 == fb.b0 && cb.b1 == fb.b1)
            return {std::move(cur), std::move(cb), res, 2 * res};
        cur = std::move(fine);
        cb = std::move(fb);
        res *= 2;
    }
    throw OracleError("betti numbers did not stabilize within the refinement budget");
}

int base_resolution(const RunConfig& cfg, int k) {
    int res = cfg.resolution > 0 ? cfg.resolution : 64;
    if (!power_of_two(res)) throw FormulaError("resolution must be a power of two");
    int base = k == 3 ? res / 2 : res;
    if (base < 4) throw FormulaError("resolution too small for the working grid");
    return base;
}

int require_k(const ParsedInput& in) {
    int k = static_cast<int>(in.vars.size());
    if (k < 2 || k > 3) throw FormulaError("expected 2 or 3 variables");
    return k;
}

MPoly ball_poly(int k, const Rat& r) {
    MPoly s = MPoly::constant(k, -r * r);
    for (int i = 0; i < k; ++i) s = s + MPoly::var(k, i, 2);
    return s;
}

}  // namespace

std::string decimal_string(const Rat& v, int digits) {
    using boost::multiprecision::mpz_int;
    mpz_int num = boost::multiprecision::numerator(v);
    mpz_int den = boost::multiprecision::denominator(v);
    bool neg = num < 0;
    if (neg) num = -num;
    mpz_int ip = num / den;
    mpz_int rem = num % den;
    mpz_int scale = 1;
    for (int d = 0; d < digits; ++d) scale *= 10;
    mpz_int frac = rem * scale / den;
    std::string fs = frac.str();
    if (static_cast<int>(fs.size()) < digits)
        fs = std::string(static_cast<size_t>(digits) - fs.size(), '0') + fs;
    std::string out = (neg && (ip != 0 || frac != 0) ? "-" : "") + ip.str();
    if (digits > 0) out += "." + fs;
    return out;
}

nlohmann::ordered_json run_betti(const ParsedInput& in, const RunConfig& cfg) {
    const int k = require_k(in);
    std::vector<MPoly> P = collect_polys(in.formula);
    TriThom ctx;
    bool empty_hint = false;
    Rat r = cfg.radius > 0 ? cfg.radius : big_enough_radius(ctx, P, in.formula, k, &empty_hint);
    std::vector<Ivl> box(static_cast<size_t>(k), Ivl(-r, r));
    long t0 = now_ms();
    StableCx st = stable_complex(formula_oracle(in.formula), box, base_resolution(cfg, k),
                                 cfg.max_refine, k, cfg.field);
    ordered_json doc;
    doc["vars"] = in.vars;
    doc["betti"] = {{"b0", st.betti.b0}, {"b1", st.betti.b1}};
    doc["oracle"] = {{"resolution", st.res},
                     {"verified_against", st.verified_res},
                     {"field", field_name(cfg.field)}};
    doc["radius"] = decimal_string(r, 6);
    doc["timings_ms"] = {{"oracle", now_ms() - t0}};
    return doc;
}

nlohmann::ordered_json run_skeleton(const ParsedInput& in, const RunConfig& cfg) {
    const int k = require_k(in);
    std::vector<MPoly> P = collect_polys(in.formula);
    TriThom ctx;
    bool empty_hint = false;
    Rat r = cfg.radius > 0 ? cfg.radius : big_enough_radius(ctx, P, in.formula, k, &empty_hint);
    long t0 = now_ms();
    SkeletonNet net = one_dim_subset(ctx, P, in.formula, {}, k);
    long t1 = now_ms();
    ordered_json doc;
    doc["vars"] = in.vars;
    doc["radius"] = decimal_string(r, 6);
    ordered_json verts = ordered_json::array();
    for (auto& v : net.vertices) {
        std::vector<Rat> p = box_mid(rur_point(v, Rat(1, 1 << 10)));
        ordered_json row = ordered_json::array();
        for (const Rat& c : p) row.push_back(decimal_string(c, 4));
        verts.push_back(std::move(row));
    }
    doc["vertices"] = std::move(verts);
    ordered_json edges = ordered_json::array();
    for (size_t e = 0; e < net.edges.size(); ++e)
        edges.push_back({{"left", net.left[e]}, {"right", net.right[e]}});
    doc["edges"] = std::move(edges);
    doc["components"] = static_cast<int>(h0_basis(net).size());
    doc["timings_ms"] = {{"skeleton", t1 - t0}};
    return doc;
}

BasisResult run_basis(const ParsedInput& in, const RunConfig& cfg) {
    const int k = require_k(in);
    std::vector<MPoly> P = collect_polys(in.formula);
    TriThom ctx;
    bool empty_hint = false;
    Rat r = cfg.radius > 0 ? cfg.radius : big_enough_radius(ctx, P, in.formula, k, &empty_hint);
    std::vector<Ivl> box(static_cast<size_t>(k), Ivl(-r, r));

    long t0 = now_ms();
    SkeletonNet net = one_dim_subset(ctx, P, in.formula, {}, k);
    long t_skeleton = now_ms() - t0;

    t0 = now_ms();
    StableCx st = stable_complex(formula_oracle(in.formula), box, base_resolution(cfg, k),
                                 cfg.max_refine, k, cfg.field);
    long t_oracle = now_ms() - t0;
    const CubicalComplex& s_cx = st.cx;

    // shared vertex points: every polyline endpoint is overwritten with the
    // point of its network vertex, so concatenations connect exactly
    const Rat tol = r / st.res;  // half a grid cell
    t0 = now_ms();
    std::vector<std::vector<Rat>> vpts(net.vertices.size());
    for (size_t v = 0; v < net.vertices.size(); ++v)
        vpts[v] = box_mid(rur_point(net.vertices[v], tol / 4));
    std::vector<std::vector<std::vector<Rat>>> plines(net.edges.size());
    for (size_t e = 0; e < net.edges.size(); ++e) {
        plines[e] = sample_curve(net.edges[e], net.vertices[static_cast<size_t>(net.left[e])],
                                 net.vertices[static_cast<size_t>(net.right[e])], tol);
        plines[e].front() = vpts[static_cast<size_t>(net.left[e])];
        plines[e].back() = vpts[static_cast<size_t>(net.right[e])];
    }
    long t_sampling = now_ms() - t0;

    // graph cycles, snapped into the grid, reduced to a spanning subset
    t0 = now_ms();
    Graph graph(static_cast<int>(net.vertices.size()));
    for (size_t e = 0; e < net.edges.size(); ++e) graph.add_edge(net.left[e], net.right[e]);
    CycleSet cycles = cycle_basis(graph);
    std::vector<Chain> classes;
    classes.reserve(cycles.cycles.size());
    for (const Cycle& c : cycles.cycles) classes.push_back(snap_cycle(c, net, plines, s_cx));
    std::vector<int> chosen = minimal_spanning_subset(cycles, classes, s_cx);

    // the pair check: the snapped network against the full marking
    std::vector<std::vector<std::vector<Rat>>> gamma_lines = plines;
    std::vector<char> touched(net.vertices.size(), 0);
    for (size_t e = 0; e < net.edges.size(); ++e)
        touched[static_cast<size_t>(net.left[e])] = touched[static_cast<size_t>(net.right[e])] = 1;
    for (size_t v = 0; v < net.vertices.size(); ++v)
        if (!touched[v]) gamma_lines.push_back({vpts[v]});
    CubicalComplex g_cx = snap_network(gamma_lines, s_cx);
    PairReport rep = relative_pair_check(s_cx, g_cx);
    long t_snapping = now_ms() - t0;
    if (!rep.h0_iso || !rep.h1_epi)
        throw OracleError("pair check failed at the working resolution");

    // closed formulas: one per edge, assembled into z1 and the basis loops
    t0 = now_ms();
    std::vector<BranchClosureJob> jobs(net.edges.size());
    for (size_t e = 0; e < net.edges.size(); ++e) {
        jobs[e].curve = &net.edges[e];
        jobs[e].polyline = &plines[e];
    }
    std::vector<Formula> edge_formulas = branches_to_closed(jobs, tol);
    Formula ball = Formula::atom(ball_poly(k, r), Rel::LE);
    std::vector<Formula> z1_parts;
    for (const Formula& f : edge_formulas) z1_parts.push_back(f);
    std::vector<RUR> comps = h0_basis(net);
    std::vector<Formula> z0;
    for (RUR& v : comps) {
        TriThom pt = v.ctx;
        pt.extend(v.tau);
        z0.push_back(weak_thom_formula(pt));
    }
    for (size_t v = 0; v < net.vertices.size(); ++v) {
        if (touched[v]) continue;
        TriThom pt = net.vertices[v].ctx;
        pt.extend(net.vertices[v].tau);
        z1_parts.push_back(weak_thom_formula(pt));
    }
    Formula z1 = Formula::conj({ball, Formula::disj(std::move(z1_parts))});
    std::vector<Formula> loop_formulas;
    for (int idx : chosen) {
        std::vector<Formula> parts;
        for (int e : cycles.cycles[static_cast<size_t>(idx)].edges)
            parts.push_back(edge_formulas[static_cast<size_t>(e)]);
        loop_formulas.push_back(Formula::conj({ball, Formula::disj(std::move(parts))}));
    }
    long t_formulas = now_ms() - t0;

    if (static_cast<int>(comps.size()) != st.betti.b0)
        throw OracleError("component count disagrees with the oracle");

    BasisResult out;
    out.k = k;
    out.box = box;
    out.polylines = std::move(plines);
    ordered_json doc;
    doc["vars"] = in.vars;
    doc["betti"] = {{"b0", st.betti.b0}, {"b1", st.betti.b1}};
    ordered_json z0j = ordered_json::array();
    for (const Formula& f : z0) z0j.push_back(formula_json(in.vars, f));
    doc["z0"] = std::move(z0j);
    doc["z1"] = formula_json(in.vars, z1);
    ordered_json cyc = ordered_json::array();
    for (size_t j = 0; j < loop_formulas.size(); ++j) {
        const Cycle& c = cycles.cycles[static_cast<size_t>(chosen[j])];
        out.basis_edges.push_back(c.edges);
        cyc.push_back({{"edges", c.edges}, {"formula", formula_json(in.vars, loop_formulas[j])}});
    }
    doc["cycles"] = std::move(cyc);
    ordered_json verts = ordered_json::array();
    for (const auto& p : vpts) {
        ordered_json row = ordered_json::array();
        for (const Rat& c : p) row.push_back(decimal_string(c, 4));
        verts.push_back(std::move(row));
    }
    doc["vertices"] = std::move(verts);
    doc["verification"] = {{"h0_iso", rep.h0_iso},
                           {"h1_epi", rep.h1_epi},
                           {"image_rank", rep.image_rank},
                           {"resolution", st.res},
                           {"verified_against", st.verified_res},
                           {"field", field_name(cfg.field)}};
    doc["radius"] = decimal_string(r, 6);
    doc["timings_ms"] = {{"skeleton", t_skeleton},
                         {"oracle", t_oracle},
                         {"sampling", t_sampling},
                         {"snapping", t_snapping},
                         {"formulas", t_formulas}};
    out.doc = std::move(doc);
    out.edge_formulas = std::move(edge_formulas);
    out.loop_formulas = std::move(loop_formulas);
    out.z1 = std::move(z1);
    out.net = std::move(net);
    return out;
}

}  // namespace sah
