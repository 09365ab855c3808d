/**
 * The ordered ring D[eps]: polynomials in one positive infinitesimal over the
 * rationals. The order is lexicographic by the lowest nonzero coefficient,
 * which makes eps positive yet smaller than every positive rational.
 */
#pragma once

#include <vector>

#include "sah/rat.hpp"

namespace sah {

enum class Cmp { LT = -1, EQ = 0, GT = 1 };

struct EpsScalar {
    std::vector<Rat> c;  // c[i] = coefficient of eps^i; trailing zeros trimmed

    EpsScalar() = default;
    EpsScalar(const Rat& r) { c.push_back(r); trim(); }
    explicit EpsScalar(std::vector<Rat> cs) : c(std::move(cs)) { trim(); }

    static EpsScalar eps(int power = 1) {
        std::vector<Rat> v(static_cast<size_t>(power) + 1, Rat(0));
        v.back() = 1;
        return EpsScalar(std::move(v));
    }

    void trim() {
        while (!c.empty() && c.back() == 0) c.pop_back();
    }
    bool is_zero() const { return c.empty(); }

    /** Sign of the element: that of the lowest nonzero coefficient. */
    int sign() const {
        for (auto& x : c)
            if (x != 0) return sgn(x);
        return 0;
    }

    EpsScalar operator+(const EpsScalar& o) const {
        std::vector<Rat> r(std::max(c.size(), o.c.size()), Rat(0));
        for (size_t i = 0; i < c.size(); ++i) r[i] += c[i];
        for (size_t i = 0; i < o.c.size(); ++i) r[i] += o.c[i];
        return EpsScalar(std::move(r));
    }
    EpsScalar operator-() const {
        std::vector<Rat> r = c;
        for (auto& x : r) x = -x;
        return EpsScalar(std::move(r));
    }
    EpsScalar operator-(const EpsScalar& o) const { return *this + (-o); }
    EpsScalar operator*(const EpsScalar& o) const {
        if (is_zero() || o.is_zero()) return EpsScalar();
        std::vector<Rat> r(c.size() + o.c.size() - 1, Rat(0));
        for (size_t i = 0; i < c.size(); ++i)
            for (size_t j = 0; j < o.c.size(); ++j) r[i + j] += c[i] * o.c[j];
        return EpsScalar(std::move(r));
    }
};

inline Cmp eps_compare(const EpsScalar& a, const EpsScalar& b) {
    int s = (a - b).sign();
    return s < 0 ? Cmp::LT : (s > 0 ? Cmp::GT : Cmp::EQ);
}

}  // namespace sah
