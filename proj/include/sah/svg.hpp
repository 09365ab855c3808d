/**
 * Deterministic SVG rendering of a basis run: every sampled edge of the
 * network in gray, the chosen basis loops in distinct colors, projected onto
 * a coordinate plane. All coordinate formatting is integer arithmetic.
 */
#pragma once

#include <string>

#include "sah/pipeline.hpp"

namespace sah {

/** Render the network onto the (ax, ay) coordinate plane (0-based axes,
    ax != ay, both < result.k). An empty network yields the axes only. */
std::string render_svg(const BasisResult& result, int ax, int ay);

}  // namespace sah
