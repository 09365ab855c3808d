#include "sah/upoly.hpp"

#include <algorithm>
#include <stdexcept>

namespace sah {

void UPoly::trim() {
    while (!c.empty() && c.back() == 0) c.pop_back();
}

Rat UPoly::eval(const Rat& x) const {
    Rat s(0);
    for (auto it = c.rbegin(); it != c.rend(); ++it) s = s * x + *it;
    return s;
}

UPoly UPoly::derivative() const {
    std::vector<Rat> d;
    for (size_t i = 1; i < c.size(); ++i) d.push_back(c[i] * Rat(static_cast<int>(i)));
    return UPoly(std::move(d));
}

UPoly UPoly::operator+(const UPoly& o) const {
    std::vector<Rat> r(std::max(c.size(), o.c.size()), Rat(0));
    for (size_t i = 0; i < c.size(); ++i) r[i] += c[i];
    for (size_t i = 0; i < o.c.size(); ++i) r[i] += o.c[i];
    return UPoly(std::move(r));
}

UPoly UPoly::operator-(const UPoly& o) const { return *this + o * Rat(-1); }

UPoly UPoly::operator*(const UPoly& o) const {
    if (is_zero() || o.is_zero()) return UPoly();
    std::vector<Rat> r(c.size() + o.c.size() - 1, Rat(0));
    for (size_t i = 0; i < c.size(); ++i)
        for (size_t j = 0; j < o.c.size(); ++j) r[i + j] += c[i] * o.c[j];
    return UPoly(std::move(r));
}

UPoly UPoly::operator*(const Rat& k) const {
    std::vector<Rat> r = c;
    for (auto& x : r) x *= k;
    return UPoly(std::move(r));
}

UPoly UPoly::rem(const UPoly& b) const {
    if (b.is_zero()) throw std::domain_error("univariate division by zero");
    UPoly r = *this;
    const int db = b.degree();
    while (!r.is_zero() && r.degree() >= db) {
        Rat q = r.c.back() / b.c.back();
        int shift = r.degree() - db;
        for (int i = 0; i <= db; ++i) r.c[i + shift] -= q * b.c[i];
        r.trim();
    }
    return r;
}

UPoly UPoly::primitive() const {
    if (is_zero()) return *this;
    Int l(1), g(0);
    for (auto& x : c) {
        l = boost::multiprecision::lcm(l, den(x));
        g = boost::multiprecision::gcd(g, num(x));
    }
    if (g == 0) g = 1;
    Rat scale = Rat(l) / Rat(g);
    if (scale < 0) scale = -scale;
    if (c.back() < 0) scale = -scale;
    return *this * scale;
}

UPoly UPoly::from_mpoly(const MPoly& p, int var) {
    std::vector<Rat> cs(static_cast<size_t>(std::max(p.degree(var), 0)) + 1, Rat(0));
    for (auto& [e, co] : p.terms()) {
        for (int i = 0; i < p.nvars(); ++i)
            if (i != var && e[i] != 0) throw std::domain_error("from_mpoly: polynomial not univariate");
        cs[e[var]] += co;
    }
    return UPoly(std::move(cs));
}

MPoly UPoly::to_mpoly(int nvars, int var) const {
    MPoly p(nvars);
    MPoly::Expo e(nvars, 0);
    for (size_t i = 0; i < c.size(); ++i) {
        e[var] = static_cast<int>(i);
        p.add_term(e, c[i]);
    }
    return p;
}

UPoly upoly_gcd(UPoly a, UPoly b) {
    a = a.primitive();
    b = b.primitive();
    while (!b.is_zero()) {
        UPoly r = a.rem(b).primitive();
        a = std::move(b);
        b = std::move(r);
    }
    return a;
}

UPoly upoly_squarefree(const UPoly& p) {
    if (p.degree() <= 1) return p.primitive();
    UPoly g = upoly_gcd(p, p.derivative());
    if (g.degree() <= 0) return p.primitive();
    // exact division p / g over Q
    UPoly r = p, q;
    std::vector<Rat> qc(static_cast<size_t>(p.degree() - g.degree()) + 1, Rat(0));
    while (!r.is_zero() && r.degree() >= g.degree()) {
        Rat k = r.c.back() / g.c.back();
        int shift = r.degree() - g.degree();
        qc[shift] = k;
        for (int i = 0; i <= g.degree(); ++i) r.c[i + shift] -= k * g.c[i];
        r.trim();
    }
    return UPoly(std::move(qc)).primitive();
}

namespace {
/** Strip content by a positive scale only: signs of all values are preserved. */
UPoly positive_primitive(const UPoly& p) {
    if (p.is_zero()) return p;
    UPoly q = p.primitive();
    if (sgn(q.c.back()) != sgn(p.c.back())) return q * Rat(-1);
    return q;
}
}  // namespace

std::vector<UPoly> sturm_sequence(const UPoly& p) {
    std::vector<UPoly> seq;
    UPoly a = positive_primitive(p);
    if (a.is_zero()) return {a};
    seq.push_back(a);
    UPoly b = positive_primitive(a.derivative());
    while (!b.is_zero()) {
        seq.push_back(b);
        UPoly r = positive_primitive(a.rem(b) * Rat(-1));
        a = std::move(b);
        b = std::move(r);
    }
    return seq;
}

namespace {
int variations(const std::vector<UPoly>& seq, const Rat& x) {
    int v = 0, last = 0;
    for (auto& f : seq) {
        int s = sgn(f.eval(x));
        if (s == 0) continue;
        if (last != 0 && s != last) ++v;
        last = s;
    }
    return v;
}
}  // namespace

int sturm_count(const std::vector<UPoly>& seq, const Rat& a, const Rat& b) {
    return variations(seq, a) - variations(seq, b);
}

int count_real_roots(const UPoly& p) {
    UPoly sf = upoly_squarefree(p);
    if (sf.degree() <= 0) return 0;
    Rat B = cauchy_upper_bound(sf.to_mpoly(1, 0)) + 1;
    auto seq = sturm_sequence(sf);
    return sturm_count(seq, -B, B);
}

Rat simplest_rational_between(const Rat& a, const Rat& b) {
    if (!(a < b)) throw std::invalid_argument("empty interval");
    // Stern-Brocot style: find the rational of smallest denominator in (a, b).
    Rat lo = a, hi = b;
    Int int_part(0);
    std::vector<Int> cf;  // continued-fraction prefix
    for (int guard = 0; guard < 10000; ++guard) {
        Int fl = rat_floor(lo);
        if (Rat(fl) + 1 < hi) {
            // an integer sits strictly inside (lo, hi)
            cf.push_back(fl + 1);
            break;
        }
        if (Rat(fl) + 1 == hi && lo == Rat(fl)) {
            // interval is exactly (n, n+1): take midpoint-simplest n + 1/2
            cf.push_back(fl);
            cf.push_back(2);
            break;
        }
        cf.push_back(fl);
        // map (lo, hi) -> (1/(hi - fl), 1/(lo - fl)); lo == fl means unbounded top
        Rat nl = hi - Rat(fl), nh = lo - Rat(fl);
        if (nh == 0) {
            cf.push_back(rat_floor(Rat(1) / nl) + 1);
            break;
        }
        lo = Rat(1) / nl;
        hi = Rat(1) / nh;
    }
    // fold continued fraction back
    Rat v(cf.back());
    for (int i = static_cast<int>(cf.size()) - 2; i >= 0; --i) v = Rat(cf[i]) + Rat(1) / v;
    (void)int_part;
    return v;
}

namespace {

/** Try to collapse a sign-change interval to an exact rational root. */
bool snap_rational(const UPoly& p, Rat& lo, Rat& hi) {
    int slo = sgn(p.eval(lo));
    for (int iter = 0; iter < 24; ++iter) {
        Rat m = simplest_rational_between(lo, hi);
        int sm = sgn(p.eval(m));
        if (sm == 0) { lo = hi = m; return true; }
        Rat half = (lo + hi) / 2;
        int sh = sgn(p.eval(half));
        if (sh == 0) { lo = hi = half; return true; }
        // shrink by bisection, keeping the sign change
        if (sh == slo) lo = half; else hi = half;
        if (sm == slo && m > lo) lo = m;
        else if (sm != slo && m < hi) hi = m;
    }
    return false;
}

}  // namespace

std::vector<RootIvl> isolate_real_roots(const UPoly& p) {
    std::vector<RootIvl> out;
    UPoly sf = upoly_squarefree(p);
    if (sf.degree() <= 0) return out;
    auto seq = sturm_sequence(sf);
    Rat B = cauchy_upper_bound(sf.to_mpoly(1, 0)) + 1;

    struct Node { Rat a, b; int cnt; };
    std::vector<Node> stack;
    int total = sturm_count(seq, -B, B);
    if (total > 0) stack.push_back({-B, B, total});
    while (!stack.empty()) {
        Node n = stack.back();
        stack.pop_back();
        if (n.cnt == 1) {
            Rat lo = n.a, hi = n.b;
            snap_rational(sf, lo, hi);
            out.push_back({lo, hi});
            continue;
        }
        Rat m = (n.a + n.b) / 2;
        if (sgn(sf.eval(m)) == 0) {
            // exact root at the split point: carve out a punctured neighborhood
            Rat d = (n.b - n.a) / 4;
            while (sgn(sf.eval(m - d)) == 0 || sgn(sf.eval(m + d)) == 0 ||
                   sturm_count(seq, m - d, m + d) != 1)
                d /= 2;
            out.push_back({m, m});
            int left = sturm_count(seq, n.a, m - d);
            int right = sturm_count(seq, m + d, n.b);
            if (left > 0) stack.push_back({n.a, m - d, left});
            if (right > 0) stack.push_back({m + d, n.b, right});
            continue;
        }
        int left = sturm_count(seq, n.a, m);
        int right = n.cnt - left;
        if (left > 0) stack.push_back({n.a, m, left});
        if (right > 0) stack.push_back({m, n.b, right});
    }
    std::sort(out.begin(), out.end(), [](const RootIvl& x, const RootIvl& y) { return x.lo < y.lo; });
    return out;
}

}  // namespace sah
