/**
 * Sparse multivariate polynomials over exact rationals.
 *
 * The universal symbol carrier for the whole library: inputs, projection
 * families, representation data and emitted formulas are all MPoly values.
 * Exponent-vector -> coefficient map with lexicographic term order, so all
 * iteration (and hence all output) is deterministic.
 */
#pragma once

#include <map>
#include <vector>

#include "sah/rat.hpp"

namespace sah {

class MPoly {
  public:
    using Expo = std::vector<int>;
    using Terms = std::map<Expo, Rat>;

    MPoly() : nvars_(0) {}
    explicit MPoly(int nvars) : nvars_(nvars) {}

    static MPoly constant(int nvars, const Rat& c);
    static MPoly var(int nvars, int i, int power = 1);

    int nvars() const { return nvars_; }
    bool is_zero() const { return terms_.empty(); }
    bool is_constant() const;
    Rat constant_value() const;  // requires is_constant()
    const Terms& terms() const { return terms_; }

    void add_term(const Expo& e, const Rat& c);

    MPoly operator-() const;
    MPoly operator+(const MPoly& o) const;
    MPoly operator-(const MPoly& o) const;
    MPoly operator*(const MPoly& o) const;
    MPoly operator*(const Rat& c) const;
    bool operator==(const MPoly& o) const { return nvars_ == o.nvars_ && terms_ == o.terms_; }

    int degree(int var) const;         // -1 for the zero polynomial
    int total_degree() const;          // -1 for the zero polynomial
    bool depends_on(int var) const { return degree(var) > 0; }

    MPoly derivative(int var) const;

    /** Substitute variable `var` by rational value; keeps the variable count. */
    MPoly substitute(int var, const Rat& v) const;
    /** Substitute variable `var` by another polynomial (same variable count). */
    MPoly substitute(int var, const MPoly& v) const;
    /** Full evaluation at a rational point of dimension nvars. */
    Rat eval(const std::vector<Rat>& x) const;

    /** Coefficients with respect to `var`: result[d] has var-exponent zeroed. */
    std::vector<MPoly> coeffs_wrt(int var) const;
    static MPoly from_coeffs(int nvars, int var, const std::vector<MPoly>& cs);
    MPoly leading_coeff(int var) const;

    /**
     * Integer normalization: multiply by the positive rational that makes all
     * coefficients integers with content 1 and the lex-leading coefficient
     * positive. Preserves the zero set; stabilizes deduplication.
     */
    MPoly normalized() const;

    /** Change variable count (new variables appended or dropped-if-unused). */
    MPoly with_nvars(int nvars) const;

    std::string str(const std::vector<std::string>& names = {}) const;

  private:
    int nvars_;
    Terms terms_;
};

/** Exact quotient a / b (throws std::domain_error if not divisible). */
MPoly exact_div(const MPoly& a, const MPoly& b);

/** Pseudo-remainder of a by b with respect to var (lc(b)^(da-db+1) * a mod b). */
MPoly prem(const MPoly& a, const MPoly& b, int var);

/** Derivative sequence (P, P', ..., P^(deg)) with respect to var. */
std::vector<MPoly> der_sequence(const MPoly& p, int var);

/**
 * Sylvester resultant with respect to var; coefficient rows of `p` on top,
 * evaluated by fraction-free Bareiss elimination for small matrices and by
 * the subresultant remainder sequence otherwise (signs then unspecified;
 * only zero sets matter downstream).
 */
MPoly resultant(const MPoly& p, const MPoly& q, int var);

/**
 * Subresultant polynomial chain of (p, q) wrt var: result[j] is similar to
 * the j-th subresultant S_j (nonzero constant multiple), result[0] ~ Res.
 * Entries may be zero (defective chain). Size = min(deg p, deg q) wrt var.
 */
std::vector<MPoly> subresultant_chain(const MPoly& p, const MPoly& q, int var);

/** Multivariate gcd (primitive PRS); monic-normalized content-free result. */
MPoly mpoly_gcd(const MPoly& a, const MPoly& b);

/** Squarefree part with respect to var: p / gcd(p, dp/dvar), normalized. */
MPoly squarefree_part(const MPoly& p, int var);

/**
 * Cauchy-type root lower bound c'(P) for univariate P (in the unique variable
 * it depends on): ((p+1) * sum a_i^2 / a_q^2)^-1 with p the top and q the
 * lowest nonzero coefficient index; every nonzero real root x has |x| > c'(P).
 */
Rat cauchy_lower_bound(const MPoly& p);

/** Upper bound on |roots|: 1 + max|a_i|/|a_p| over the same coefficients. */
Rat cauchy_upper_bound(const MPoly& p);

}  // namespace sah
