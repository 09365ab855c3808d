#include "sah/mpoly.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

namespace sah {

MPoly MPoly::constant(int nvars, const Rat& c) {
    MPoly p(nvars);
    p.add_term(Expo(nvars, 0), c);
    return p;
}

MPoly MPoly::var(int nvars, int i, int power) {
    MPoly p(nvars);
    Expo e(nvars, 0);
    e.at(i) = power;
    p.add_term(e, Rat(1));
    return p;
}

bool MPoly::is_constant() const {
    if (terms_.empty()) return true;
    if (terms_.size() > 1) return false;
    const Expo& e = terms_.begin()->first;
    return std::all_of(e.begin(), e.end(), [](int x) { return x == 0; });
}

Rat MPoly::constant_value() const {
    if (terms_.empty()) return Rat(0);
    if (!is_constant()) throw std::logic_error("constant_value on non-constant polynomial");
    return terms_.begin()->second;
}

void MPoly::add_term(const Expo& e, const Rat& c) {
    if (c == 0) return;
    if (static_cast<int>(e.size()) != nvars_) throw std::invalid_argument("exponent arity mismatch");
    auto it = terms_.find(e);
    if (it == terms_.end()) {
        terms_.emplace(e, c);
    } else {
        it->second += c;
        if (it->second == 0) terms_.erase(it);
    }
}

MPoly MPoly::operator-() const {
    MPoly r(nvars_);
    for (auto& [e, c] : terms_) r.terms_.emplace(e, -c);
    return r;
}

MPoly MPoly::operator+(const MPoly& o) const {
    if (nvars_ != o.nvars_) throw std::invalid_argument("variable-count mismatch");
    MPoly r = *this;
    for (auto& [e, c] : o.terms_) r.add_term(e, c);
    return r;
}

MPoly MPoly::operator-(const MPoly& o) const { return *this + (-o); }

MPoly MPoly::operator*(const MPoly& o) const {
    if (nvars_ != o.nvars_) throw std::invalid_argument("variable-count mismatch");
    MPoly r(nvars_);
    Expo e(nvars_);
    for (auto& [ea, ca] : terms_) {
        for (auto& [eb, cb] : o.terms_) {
            for (int i = 0; i < nvars_; ++i) e[i] = ea[i] + eb[i];
            r.add_term(e, ca * cb);
        }
    }
    return r;
}

MPoly MPoly::operator*(const Rat& c) const {
    MPoly r(nvars_);
    if (c == 0) return r;
    for (auto& [e, cc] : terms_) r.terms_.emplace(e, cc * c);
    return r;
}

int MPoly::degree(int var) const {
    int d = -1;
    for (auto& [e, c] : terms_) d = std::max(d, e[var]);
    return terms_.empty() ? -1 : d;
}

int MPoly::total_degree() const {
    int d = -1;
    for (auto& [e, c] : terms_) {
        int t = 0;
        for (int x : e) t += x;
        d = std::max(d, t);
    }
    return d;
}

MPoly MPoly::derivative(int var) const {
    MPoly r(nvars_);
    for (auto& [e, c] : terms_) {
        if (e[var] == 0) continue;
        Expo f = e;
        f[var] -= 1;
        r.add_term(f, c * e[var]);
    }
    return r;
}

MPoly MPoly::substitute(int var, const Rat& v) const {
    MPoly r(nvars_);
    for (auto& [e, c] : terms_) {
        Rat cc = c;
        for (int i = 0; i < e[var]; ++i) cc *= v;
        Expo f = e;
        f[var] = 0;
        r.add_term(f, cc);
    }
    return r;
}

MPoly MPoly::substitute(int var, const MPoly& v) const {
    if (v.nvars_ != nvars_) throw std::invalid_argument("variable-count mismatch");
    // Horner over the substituted variable.
    auto cs = coeffs_wrt(var);
    MPoly r(nvars_);
    for (int d = static_cast<int>(cs.size()) - 1; d >= 0; --d) r = r * v + cs[d];
    return r;
}

Rat MPoly::eval(const std::vector<Rat>& x) const {
    if (static_cast<int>(x.size()) != nvars_) throw std::invalid_argument("point arity mismatch");
    Rat s(0);
    for (auto& [e, c] : terms_) {
        Rat t = c;
        for (int i = 0; i < nvars_; ++i)
            for (int j = 0; j < e[i]; ++j) t *= x[i];
        s += t;
    }
    return s;
}

std::vector<MPoly> MPoly::coeffs_wrt(int var) const {
    int d = degree(var);
    std::vector<MPoly> cs(static_cast<size_t>(std::max(d, 0)) + 1, MPoly(nvars_));
    for (auto& [e, c] : terms_) {
        Expo f = e;
        int k = f[var];
        f[var] = 0;
        cs[k].add_term(f, c);
    }
    return cs;
}

MPoly MPoly::from_coeffs(int nvars, int var, const std::vector<MPoly>& cs) {
    MPoly r(nvars);
    for (size_t d = 0; d < cs.size(); ++d) {
        for (auto& [e, c] : cs[d].terms()) {
            Expo f = e;
            f[var] += static_cast<int>(d);
            r.add_term(f, c);
        }
    }
    return r;
}

MPoly MPoly::leading_coeff(int var) const {
    int d = degree(var);
    if (d < 0) return MPoly(nvars_);
    return coeffs_wrt(var)[d];
}

MPoly MPoly::normalized() const {
    if (terms_.empty()) return *this;
    // scale = lcm of denominators / gcd of numerators, sign from lex-leading term.
    Int l(1), g(0);
    for (auto& [e, c] : terms_) {
        l = boost::multiprecision::lcm(l, den(c));
        g = boost::multiprecision::gcd(g, num(c));
    }
    if (g == 0) g = 1;
    Rat scale = Rat(l) / Rat(g);
    if (scale < 0) scale = -scale;
    if (terms_.rbegin()->second < 0) scale = -scale;
    return *this * scale;
}

MPoly MPoly::with_nvars(int nvars) const {
    MPoly r(nvars);
    for (auto& [e, c] : terms_) {
        Expo f(nvars, 0);
        for (int i = 0; i < nvars_; ++i) {
            if (e[i] != 0) {
                if (i >= nvars) throw std::invalid_argument("with_nvars drops a used variable");
                f[i] = e[i];
            }
        }
        r.add_term(f, c);
    }
    return r;
}

std::string MPoly::str(const std::vector<std::string>& names) const {
    if (terms_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
        const Rat& c = it->second;
        if (!first) os << (c > 0 ? " + " : " - ");
        else if (c < 0) os << "-";
        first = false;
        Rat a = rat_abs(c);
        bool has_var = false;
        for (int x : it->first) has_var |= (x != 0);
        if (a != 1 || !has_var) os << to_string(a);
        bool star = (a != 1 || !has_var);
        for (int i = 0; i < nvars_; ++i) {
            int p = it->first[i];
            if (p == 0) continue;
            if (star) os << "*";
            star = true;
            if (static_cast<size_t>(i) < names.size()) os << names[i];
            else os << "x" << (i + 1);
            if (p > 1) os << "^" << p;
        }
    }
    return os.str();
}

MPoly exact_div(const MPoly& a, const MPoly& b) {
    if (b.is_zero()) throw std::domain_error("division by zero polynomial");
    const int n = a.nvars();
    MPoly r = a, q(n);
    auto& bl = *b.terms().rbegin();  // lex-leading term of b
    while (!r.is_zero()) {
        auto& rl = *r.terms().rbegin();
        MPoly::Expo e(n);
        for (int i = 0; i < n; ++i) {
            e[i] = rl.first[i] - bl.first[i];
            if (e[i] < 0) throw std::domain_error("inexact polynomial division");
        }
        Rat c = rl.second / bl.second;
        MPoly t(n);
        t.add_term(e, c);
        q = q + t;
        r = r - t * b;
    }
    return q;
}

MPoly prem(const MPoly& a, const MPoly& b, int var) {
    int db = b.degree(var);
    if (db < 0) throw std::domain_error("pseudo-division by zero polynomial");
    MPoly r = a;
    MPoly lb = b.leading_coeff(var);
    int da = r.degree(var);
    if (da < db) return r;
    int steps = da - db + 1;
    while (!r.is_zero() && r.degree(var) >= db) {
        int dr = r.degree(var);
        MPoly lr = r.leading_coeff(var);
        MPoly shift = MPoly::var(a.nvars(), var, dr - db);
        r = r * lb - b * (lr * shift);
        --steps;
    }
    // Pad to the full lc(b)^(da-db+1) convention so prem(a,b)(x)=lc^e a(x) mod b holds.
    for (; steps > 0; --steps) r = r * lb;
    return r;
}

std::vector<MPoly> der_sequence(const MPoly& p, int var) {
    std::vector<MPoly> out{p};
    MPoly d = p;
    int deg = p.degree(var);
    for (int i = 0; i < deg; ++i) {
        d = d.derivative(var);
        out.push_back(d);
    }
    return out;
}

namespace {

/** Fraction-free Bareiss determinant of a square MPoly matrix. */
MPoly bareiss_det(std::vector<std::vector<MPoly>> m, int nvars) {
    const int n = static_cast<int>(m.size());
    if (n == 0) return MPoly::constant(nvars, Rat(1));
    int sign = 1;
    MPoly prev = MPoly::constant(nvars, Rat(1));
    for (int k = 0; k + 1 < n; ++k) {
        if (m[k][k].is_zero()) {
            int piv = -1;
            for (int i = k + 1; i < n; ++i)
                if (!m[i][k].is_zero()) { piv = i; break; }
            if (piv < 0) return MPoly(nvars);
            std::swap(m[k], m[piv]);
            sign = -sign;
        }
        for (int i = k + 1; i < n; ++i) {
            for (int j = k + 1; j < n; ++j)
                m[i][j] = exact_div(m[k][k] * m[i][j] - m[i][k] * m[k][j], prev);
            m[i][k] = MPoly(nvars);
        }
        prev = m[k][k];
    }
    return sign == 1 ? m[n - 1][n - 1] : -m[n - 1][n - 1];
}

}  // namespace

MPoly resultant(const MPoly& p, const MPoly& q, int var) {
    int dp = p.degree(var), dq = q.degree(var);
    if (dp <= 0 && dq <= 0) throw std::domain_error("resultant: both arguments constant in the variable");
    if (dp < 0 || dq < 0) return MPoly(p.nvars());  // resultant with the zero polynomial
    const int n = dp + dq;
    auto pc = p.coeffs_wrt(var), qc = q.coeffs_wrt(var);
    if (n <= 24) {
        std::vector<std::vector<MPoly>> m(n, std::vector<MPoly>(n, MPoly(p.nvars())));
        for (int r = 0; r < dq; ++r)
            for (int j = 0; j <= dp; ++j) m[r][r + (dp - j)] = pc[j];
        for (int r = 0; r < dp; ++r)
            for (int j = 0; j <= dq; ++j) m[dq + r][r + (dq - j)] = qc[j];
        return bareiss_det(std::move(m), p.nvars());
    }
    // Large case: last subresultant (zero set identical; constant factor unspecified).
    auto chain = subresultant_chain(p, q, var);
    for (auto& s : chain)
        if (!s.is_zero() && s.degree(var) == 0) return s;
    return MPoly(p.nvars());
}

std::vector<MPoly> subresultant_chain(const MPoly& p, const MPoly& q, int var) {
    int dp = p.degree(var), dq = q.degree(var);
    if (dp < 0 || dq < 0) return {};
    const MPoly *a = &p, *b = &q;
    if (dp < dq) { std::swap(a, b); std::swap(dp, dq); }
    std::vector<MPoly> chain(static_cast<size_t>(dq) + 1, MPoly(p.nvars()));
    if (dq == 0) { chain[0] = *b; return chain; }
    chain[dq] = *b;
    MPoly A = *a, B = *b;
    MPoly g = MPoly::constant(p.nvars(), Rat(1));
    MPoly h = g;
    while (true) {
        int da = A.degree(var), db = B.degree(var);
        int delta = da - db;
        MPoly r = prem(A, B, var);
        if (r.is_zero()) break;
        MPoly beta = g * h;
        for (int i = 1; i < delta; ++i) beta = beta * h;
        A = B;
        B = exact_div(r, beta);
        g = A.leading_coeff(var);
        if (delta >= 1) {
            MPoly gn = g;
            for (int i = 1; i < delta; ++i) gn = gn * g;
            MPoly hd = MPoly::constant(p.nvars(), Rat(1));
            for (int i = 1; i < delta; ++i) hd = hd * h;
            h = exact_div(gn, hd);
        }
        int e = B.degree(var);
        if (e <= dq && chain[e].is_zero()) chain[e] = B;
    }
    return chain;
}

MPoly mpoly_gcd(const MPoly& a, const MPoly& b) {
    if (a.is_zero()) return b.normalized();
    if (b.is_zero()) return a.normalized();
    if (a.is_constant() || b.is_constant()) return MPoly::constant(a.nvars(), Rat(1));
    int v = -1;
    for (int i = a.nvars() - 1; i >= 0; --i) {
        if (a.degree(i) > 0 || b.degree(i) > 0) { v = i; break; }
    }
    auto content = [&](const MPoly& p) {
        MPoly c(p.nvars());
        for (auto& cp : p.coeffs_wrt(v)) c = mpoly_gcd(c, cp);
        return c;
    };
    if (a.degree(v) == 0) return mpoly_gcd(a, content(b));
    if (b.degree(v) == 0) return mpoly_gcd(content(a), b);
    MPoly ca = content(a), cb = content(b);
    MPoly A = exact_div(a, ca), B = exact_div(b, cb);
    if (A.degree(v) < B.degree(v)) std::swap(A, B);
    while (true) {
        MPoly r = prem(A, B, v);
        if (r.is_zero()) break;
        A = B;
        B = exact_div(r, content(r)).normalized();
    }
    MPoly g = exact_div(B, content(B)).normalized();
    return (g * mpoly_gcd(ca, cb)).normalized();
}

MPoly squarefree_part(const MPoly& p, int var) {
    if (p.degree(var) <= 0) return p.normalized();
    MPoly g = mpoly_gcd(p, p.derivative(var));
    if (g.is_constant()) return p.normalized();
    return exact_div(p, g).normalized();
}

namespace {
int unique_var(const MPoly& p) {
    int v = -1;
    for (int i = 0; i < p.nvars(); ++i) {
        if (p.degree(i) > 0) {
            if (v >= 0) throw std::domain_error("polynomial is not univariate");
            v = i;
        }
    }
    return v;  // -1 for constants
}
}  // namespace

Rat cauchy_lower_bound(const MPoly& p) {
    if (p.is_zero()) throw std::domain_error("cauchy_lower_bound of the zero polynomial");
    int v = unique_var(p);
    std::vector<Rat> a;
    if (v < 0) a = {p.constant_value()};
    else {
        for (auto& c : p.coeffs_wrt(v)) a.push_back(c.constant_value());
    }
    int top = static_cast<int>(a.size()) - 1;
    int q = 0;
    while (a[q] == 0) ++q;
    Rat s(0);
    for (auto& c : a) s += c * c;
    return Rat(1) / (Rat(top + 1) * s / (a[q] * a[q]));
}

Rat cauchy_upper_bound(const MPoly& p) {
    if (p.is_zero()) throw std::domain_error("cauchy_upper_bound of the zero polynomial");
    int v = unique_var(p);
    if (v < 0) return Rat(1);
    auto cs = p.coeffs_wrt(v);
    Rat top = rat_abs(cs.back().constant_value());
    Rat m(0);
    for (size_t i = 0; i + 1 < cs.size(); ++i) m = std::max(m, rat_abs(cs[i].constant_value()));
    return Rat(1) + m / top;
}

}  // namespace sah
