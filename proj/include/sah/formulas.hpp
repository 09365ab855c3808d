/**
 * Closed sign-condition formulas: negation-free trees of AND / OR / weak atoms
 * (P <= 0, P >= 0, P = 0), their exact evaluation at rational points, and the
 * JSON input/output schema. Realizations of these formulas are always closed
 * sets, which is the contract every other module relies on.
 */
#pragma once

#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "sah/mpoly.hpp"
#include "sah/rat.hpp"

namespace sah {

enum class Rel { LE, GE, EQ };

/** Raised on schema violations and non-closed input. */
struct FormulaError : std::runtime_error {
    explicit FormulaError(const std::string& m) : std::runtime_error(m) {}
};

struct Formula {
    enum class Kind { And, Or, Atom };

    Kind kind = Kind::And;
    std::vector<Formula> kids;  // for And / Or
    MPoly poly;                 // for Atom
    Rel rel = Rel::EQ;          // for Atom
    std::string id;             // source id from parsing, kept for round-trips

    static Formula atom(MPoly p, Rel r, std::string id = {});
    static Formula conj(std::vector<Formula> kids);
    static Formula disj(std::vector<Formula> kids);
    /** Empty conjunction: satisfied everywhere. */
    static Formula truth() { return conj({}); }
};

/** Parsed input document. */
struct ParsedInput {
    std::vector<std::string> vars;
    std::map<std::string, MPoly> polys;  // by source id
    Formula formula;
};

/** Parse the JSON document (throws FormulaError on any schema violation,
    including strict relations and negations, which cannot be closed). */
ParsedInput parse_formula(const std::string& json_text);

/** Serialize a formula back to the JSON schema. Atom ids are reused when
    present and generated deterministically ("q0", "q1", ...) otherwise;
    structurally equal polynomials share one table entry. */
std::string serialize_formula(const std::vector<std::string>& vars, const Formula& f);

/** Exact membership test: x in the realization of f. */
bool eval_at(const Formula& f, const std::vector<Rat>& x);

/** All distinct polynomials appearing in f, in normalized form, lex-sorted. */
std::vector<MPoly> collect_polys(const Formula& f);

/** Sign condition on an indexed polynomial family. */
struct SignCond {
    std::vector<int> signs;  // parallel to the family; values in {-1, 0, +1}

    bool operator<(const SignCond& o) const { return signs < o.signs; }
    bool operator==(const SignCond& o) const { return signs == o.signs; }
};

/** The weak sign condition: = stays, > becomes >=, < becomes <=. */
Formula weak_sign_formula(const std::vector<MPoly>& family, const SignCond& sigma);

/** Exactly the sign conditions on Q with nonempty realization in the plane
    (computed from the plane decomposition; defined in the decomposition
    translation unit). */
std::vector<SignCond> realizable_signs_2d(const std::vector<MPoly>& Q);

}  // namespace sah
