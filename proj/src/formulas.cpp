#include "sah/formulas.hpp"

#include <algorithm>
#include <set>

#include "json.hpp"

namespace sah {

using json = nlohmann::ordered_json;

Formula Formula::atom(MPoly p, Rel r, std::string id) {
    Formula f;
    f.kind = Kind::Atom;
    f.poly = std::move(p);
    f.rel = r;
    f.id = std::move(id);
    return f;
}

Formula Formula::conj(std::vector<Formula> kids) {
    Formula f;
    f.kind = Kind::And;
    f.kids = std::move(kids);
    return f;
}

Formula Formula::disj(std::vector<Formula> kids) {
    Formula f;
    f.kind = Kind::Or;
    f.kids = std::move(kids);
    return f;
}

namespace {

MPoly parse_poly(const json& j, size_t k, const std::string& id) {
    if (!j.is_array()) throw FormulaError("polynomial '" + id + "' must be a term array");
    MPoly p(static_cast<int>(k));
    for (auto& term : j) {
        if (!term.is_array() || term.size() != 2)
            throw FormulaError("malformed term in polynomial '" + id + "'");
        const json& ev = term[0];
        if (!ev.is_array() || ev.size() != k)
            throw FormulaError("malformed exponent vector in polynomial '" + id +
                               "': expected " + std::to_string(k) + " entries");
        MPoly::Expo e;
        for (auto& x : ev) {
            if (!x.is_number_integer() || x.get<long long>() < 0)
                throw FormulaError("malformed exponent vector in polynomial '" + id + "'");
            e.push_back(static_cast<int>(x.get<long long>()));
        }
        Rat c;
        if (term[1].is_string()) c = parse_rat(term[1].get<std::string>());
        else if (term[1].is_number_integer()) c = Rat(term[1].get<long long>());
        else throw FormulaError("coefficient must be a rational string in polynomial '" + id + "'");
        p.add_term(e, c);
    }
    return p;
}

Formula parse_node(const json& j, const std::map<std::string, MPoly>& polys) {
    if (!j.is_object() || j.size() != 1)
        throw FormulaError("formula node must be a single-key object");
    const std::string key = j.begin().key();
    if (key == "and" || key == "or") {
        if (!j[key].is_array()) throw FormulaError("'" + key + "' expects an array of nodes");
        std::vector<Formula> kids;
        for (auto& c : j[key]) kids.push_back(parse_node(c, polys));
        return key == "and" ? Formula::conj(std::move(kids)) : Formula::disj(std::move(kids));
    }
    if (key == "atom") {
        const json& a = j[key];
        if (!a.is_object() || !a.contains("poly") || !a.contains("rel"))
            throw FormulaError("atom requires 'poly' and 'rel'");
        std::string id = a["poly"].get<std::string>();
        auto it = polys.find(id);
        if (it == polys.end()) throw FormulaError("atom references unknown polynomial '" + id + "'");
        std::string rel = a["rel"].get<std::string>();
        Rel r;
        if (rel == "le") r = Rel::LE;
        else if (rel == "ge") r = Rel::GE;
        else if (rel == "eq") r = Rel::EQ;
        else if (rel == "lt" || rel == "gt" || rel == "ne")
            throw FormulaError("not a closed formula: strict relation '" + rel + "'");
        else throw FormulaError("unknown relation '" + rel + "'");
        return Formula::atom(it->second, r, id);
    }
    if (key == "not") throw FormulaError("not a closed formula: negation is not allowed");
    throw FormulaError("unknown formula node '" + key + "'");
}

}  // namespace

ParsedInput parse_formula(const std::string& json_text) {
    json j;
    try {
        j = json::parse(json_text);
    } catch (const std::exception& e) {
        throw FormulaError(std::string("invalid JSON: ") + e.what());
    }
    if (!j.is_object() || !j.contains("vars") || !j.contains("polys") || !j.contains("formula"))
        throw FormulaError("document requires 'vars', 'polys' and 'formula'");
    ParsedInput in;
    for (auto& v : j["vars"]) {
        if (!v.is_string()) throw FormulaError("'vars' must be an array of names");
        in.vars.push_back(v.get<std::string>());
    }
    if (in.vars.empty()) throw FormulaError("'vars' must not be empty");
    {
        std::set<std::string> seen(in.vars.begin(), in.vars.end());
        if (seen.size() != in.vars.size()) throw FormulaError("duplicate variable name");
    }
    if (!j["polys"].is_object()) throw FormulaError("'polys' must be an object");
    for (auto& [id, body] : j["polys"].items())
        in.polys.emplace(id, parse_poly(body, in.vars.size(), id));
    in.formula = parse_node(j["formula"], in.polys);
    return in;
}

namespace {

json poly_to_json(const MPoly& p) {
    json terms = json::array();
    for (auto& [e, c] : p.terms()) {
        json ev = json::array();
        for (int x : e) ev.push_back(x);
        terms.push_back(json::array({ev, to_string(c)}));
    }
    return terms;
}

json node_to_json(const Formula& f, std::map<std::string, std::string>& id_by_key,
                  json& table, int& counter) {
    switch (f.kind) {
        case Formula::Kind::And:
        case Formula::Kind::Or: {
            json kids = json::array();
            for (auto& k : f.kids) kids.push_back(node_to_json(k, id_by_key, table, counter));
            json n;
            n[f.kind == Formula::Kind::And ? "and" : "or"] = std::move(kids);
            return n;
        }
        case Formula::Kind::Atom: {
            std::string key = f.poly.str();
            auto it = id_by_key.find(key);
            std::string id;
            if (it != id_by_key.end()) {
                id = it->second;
            } else {
                id = !f.id.empty() && !table.contains(f.id) ? f.id
                                                            : "q" + std::to_string(counter++);
                while (table.contains(id)) id = "q" + std::to_string(counter++);
                id_by_key.emplace(key, id);
                table[id] = poly_to_json(f.poly);
            }
            json n;
            n["atom"] = {{"poly", id},
                         {"rel", f.rel == Rel::LE ? "le" : (f.rel == Rel::GE ? "ge" : "eq")}};
            return n;
        }
    }
    throw std::logic_error("unreachable");
}

}  // namespace

std::string serialize_formula(const std::vector<std::string>& vars, const Formula& f) {
    json doc;
    doc["vars"] = vars;
    json table = json::object();
    std::map<std::string, std::string> id_by_key;
    int counter = 0;
    json node = node_to_json(f, id_by_key, table, counter);
    doc["polys"] = std::move(table);
    doc["formula"] = std::move(node);
    return doc.dump(2);
}

bool eval_at(const Formula& f, const std::vector<Rat>& x) {
    switch (f.kind) {
        case Formula::Kind::And:
            for (auto& k : f.kids)
                if (!eval_at(k, x)) return false;
            return true;
        case Formula::Kind::Or:
            for (auto& k : f.kids)
                if (eval_at(k, x)) return true;
            return false;
        case Formula::Kind::Atom: {
            int s = sgn(f.poly.eval(x));
            if (f.rel == Rel::EQ) return s == 0;
            return f.rel == Rel::LE ? s <= 0 : s >= 0;
        }
    }
    return false;
}

namespace {
void collect(const Formula& f, std::set<MPoly::Terms>* seen, std::vector<MPoly>* out, int* nv) {
    if (f.kind == Formula::Kind::Atom) {
        MPoly n = f.poly.normalized();
        *nv = std::max(*nv, n.nvars());
        if (seen->insert(n.terms()).second) out->push_back(n);
        return;
    }
    for (auto& k : f.kids) collect(k, seen, out, nv);
}
}  // namespace

std::vector<MPoly> collect_polys(const Formula& f) {
    std::set<MPoly::Terms> seen;
    std::vector<MPoly> out;
    int nv = 0;
    collect(f, &seen, &out, &nv);
    std::sort(out.begin(), out.end(),
              [](const MPoly& a, const MPoly& b) { return a.terms() < b.terms(); });
    return out;
}

Formula weak_sign_formula(const std::vector<MPoly>& family, const SignCond& sigma) {
    std::vector<Formula> atoms;
    for (size_t i = 0; i < family.size() && i < sigma.signs.size(); ++i) {
        int s = sigma.signs[i];
        atoms.push_back(Formula::atom(family[i], s == 0 ? Rel::EQ : (s > 0 ? Rel::GE : Rel::LE)));
    }
    return Formula::conj(std::move(atoms));
}

}  // namespace sah
