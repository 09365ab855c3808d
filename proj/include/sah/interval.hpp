/**
 * Closed rational intervals with outward arithmetic, used to evaluate
 * polynomials over boxes. All endpoints are exact rationals, so "outward"
 * rounding is exact; intervals here are a certification device, not an
 * approximation of the arithmetic itself.
 */
#pragma once

#include <vector>

#include "sah/mpoly.hpp"
#include "sah/rat.hpp"

namespace sah {

struct Ivl {
    Rat lo, hi;

    Ivl() : lo(0), hi(0) {}
    Ivl(const Rat& v) : lo(v), hi(v) {}
    Ivl(const Rat& a, const Rat& b) : lo(a), hi(b) {}

    bool contains_zero() const { return lo <= 0 && hi >= 0; }
    Rat width() const { return hi - lo; }
    Rat mid() const { return (lo + hi) / 2; }
    /** Sign if certain, 0 if the interval straddles zero. */
    int certain_sign() const {
        if (lo > 0) return 1;
        if (hi < 0) return -1;
        return 0;
    }

    Ivl operator+(const Ivl& o) const { return {lo + o.lo, hi + o.hi}; }
    Ivl operator-(const Ivl& o) const { return {lo - o.hi, hi - o.lo}; }
    Ivl operator*(const Ivl& o) const {
        Rat a = lo * o.lo, b = lo * o.hi, c = hi * o.lo, d = hi * o.hi;
        return {std::min(std::min(a, b), std::min(c, d)), std::max(std::max(a, b), std::max(c, d))};
    }
    /** Reciprocal; requires the interval to exclude zero. */
    Ivl inverse() const { return {Rat(1) / hi, Rat(1) / lo}; }
};

/** Evaluate p over a box (one interval per variable), exact outward bounds. */
inline Ivl eval_box(const MPoly& p, const std::vector<Ivl>& box) {
    Ivl s(Rat(0));
    for (auto& [e, c] : p.terms()) {
        Ivl t((c));
        for (int i = 0; i < p.nvars(); ++i)
            for (int j = 0; j < e[i]; ++j) t = t * box[i];
        s = s + t;
    }
    return s;
}

/** Sharper enclosure via the mean value form p(m) + sum_i dp/dx_i(box)(x_i - m_i),
    intersected with the term-wise bound; the overestimation shrinks linearly
    with the box diameter instead of staying proportional to the coefficients. */
inline Ivl eval_box_sharp(const MPoly& p, const std::vector<Ivl>& box) {
    Ivl naive = eval_box(p, box);
    if (naive.certain_sign() != 0) return naive;
    std::vector<Rat> m;
    m.reserve(box.size());
    for (const Ivl& iv : box) m.push_back(iv.mid());
    Ivl mv(p.eval(m));
    for (int i = 0; i < p.nvars(); ++i) {
        if (!p.depends_on(i)) continue;
        mv = mv + eval_box(p.derivative(i), box) * (box[i] - Ivl(m[i]));
    }
    return {std::max(naive.lo, mv.lo), std::min(naive.hi, mv.hi)};
}

}  // namespace sah
