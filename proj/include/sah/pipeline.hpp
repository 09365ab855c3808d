/**
 * End-to-end runs: parsed input -> skeleton network -> stability-verified
 * cubical oracle -> snapped cycle selection -> closed formulas -> JSON result
 * document. This is the layer the command line binary calls into; everything
 * here is deterministic for a fixed input and configuration.
 */
#pragma once

#include <string>
#include <vector>

#include "json.hpp"
#include "sah/closure.hpp"
#include "sah/homology.hpp"

namespace sah {

struct RunConfig {
    Field field = Field::GF2;
    int resolution = 0;  // grid cells per axis (power of two); 0 = default 64.
                         // In dimension 3 the working grid starts at half this.
    int max_refine = 3;  // extra doublings allowed before giving up stability
    Rat radius = Rat(0);  // bounding-box half-width; 0 = certified automatically
    unsigned seed = 0;    // reserved for randomized subroutines
};

/** Result of a basis run: the JSON document plus the geometric artifacts
    (polylines, chosen cycles) that the renderer consumes. */
struct BasisResult {
    nlohmann::ordered_json doc;
    int k = 0;
    std::vector<Ivl> box;
    std::vector<std::vector<std::vector<Rat>>> polylines;  // per network edge
    std::vector<std::vector<int>> basis_edges;  // network-edge indices per chosen cycle
    SkeletonNet net;                     // the exact network the formulas describe
    std::vector<Formula> edge_formulas;  // closed formula per network edge
    std::vector<Formula> loop_formulas;  // parallel to basis_edges
    Formula z1;                          // the whole curve as one closed formula
};

/** Full pipeline: compute the one-dimensional subset, verify the pair at
    oracle level, and emit component points (z0), the curve formula (z1) and
    one closed simple-loop formula per H1 basis class. Throws FormulaError on
    contract violations of the input and OracleError when no grid resolution
    within the refinement budget yields a stable, verifiable answer. */
BasisResult run_basis(const ParsedInput& in, const RunConfig& cfg);

/** Oracle-only run: stability-verified Betti numbers b0, b1 of the input set
    (two consecutive resolutions must agree). */
nlohmann::ordered_json run_betti(const ParsedInput& in, const RunConfig& cfg);

/** Network-only run: certified radius, vertex coordinates, edge incidences. */
nlohmann::ordered_json run_skeleton(const ParsedInput& in, const RunConfig& cfg);

/** Decimal expansion of v truncated toward zero to `digits` fraction digits,
    computed in integer arithmetic (no floating point anywhere). */
std::string decimal_string(const Rat& v, int digits);

}  // namespace sah
