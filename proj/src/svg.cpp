#include "sah/svg.hpp"

#include <set>
#include <sstream>
#include <stdexcept>

namespace sah {

namespace {

constexpr int kSize = 640;
constexpr int kMargin = 40;

const char* kPalette[] = {"#d62728", "#1f77b4", "#2ca02c", "#9467bd",
                          "#ff7f0e", "#17becf", "#e377c2", "#bcbd22"};

struct Mapper {
    Rat lo_x, lo_y, span_x, span_y;

    std::string x(const Rat& v) const {
        return decimal_string(Rat(kMargin) + (v - lo_x) * (kSize - 2 * kMargin) / span_x, 2);
    }
    std::string y(const Rat& v) const {
        // SVG y grows downward
        return decimal_string(Rat(kSize - kMargin) - (v - lo_y) * (kSize - 2 * kMargin) / span_y, 2);
    }
};

void emit_polyline(std::ostringstream& out, const Mapper& m,
                   const std::vector<std::vector<Rat>>& pts, int ax, int ay,
                   const char* color, const char* width) {
    if (pts.empty()) return;
    out << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"" << width
        << "\" points=\"";
    for (size_t j = 0; j < pts.size(); ++j) {
        if (j) out << ' ';
        out << m.x(pts[j][static_cast<size_t>(ax)]) << ',' << m.y(pts[j][static_cast<size_t>(ay)]);
    }
    out << "\"/>\n";
}

}  // namespace

std::string render_svg(const BasisResult& result, int ax, int ay) {
    if (ax == ay || ax < 0 || ay < 0 || ax >= result.k || ay >= result.k)
        throw std::invalid_argument("render_svg: bad projection axes");
    Mapper m{result.box[static_cast<size_t>(ax)].lo, result.box[static_cast<size_t>(ay)].lo,
             result.box[static_cast<size_t>(ax)].width(), result.box[static_cast<size_t>(ay)].width()};
    if (m.span_x <= 0) m.span_x = 1;
    if (m.span_y <= 0) m.span_y = 1;

    std::ostringstream out;
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kSize << "\" height=\""
        << kSize << "\" viewBox=\"0 0 " << kSize << ' ' << kSize << "\">\n";
    out << "<rect width=\"" << kSize << "\" height=\"" << kSize << "\" fill=\"white\"/>\n";

    // coordinate axes through the origin when it lies inside the box
    const Rat zero(0);
    if (m.lo_x <= zero && zero <= m.lo_x + m.span_x)
        out << "<line x1=\"" << m.x(zero) << "\" y1=\"" << kMargin << "\" x2=\"" << m.x(zero)
            << "\" y2=\"" << kSize - kMargin << "\" stroke=\"#ddd\" stroke-width=\"1\"/>\n";
    if (m.lo_y <= zero && zero <= m.lo_y + m.span_y)
        out << "<line x1=\"" << kMargin << "\" y1=\"" << m.y(zero) << "\" x2=\""
            << kSize - kMargin << "\" y2=\"" << m.y(zero) << "\" stroke=\"#ddd\" stroke-width=\"1\"/>\n";

    for (const auto& pts : result.polylines) emit_polyline(out, m, pts, ax, ay, "#999999", "1.5");

    for (size_t c = 0; c < result.basis_edges.size(); ++c) {
        const char* color = kPalette[c % (sizeof(kPalette) / sizeof(kPalette[0]))];
        for (int e : result.basis_edges[c])
            emit_polyline(out, m, result.polylines[static_cast<size_t>(e)], ax, ay, color, "3");
    }
    out << "</svg>\n";
    return out.str();
}

}  // namespace sah
