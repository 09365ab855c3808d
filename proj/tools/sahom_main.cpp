/**
 * Command line front end.
 *
 *   sahom basis    input.json   full pipeline: basis loops as closed formulas
 *   sahom betti    input.json   stability-verified Betti numbers only
 *   sahom skeleton input.json   network summary (vertices, edges, radius)
 *   sahom render   input.json   SVG picture of the network and basis loops
 *
 * Exit codes: 0 success, 2 input contract violation, 3 oracle instability.
 */
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "sah/pipeline.hpp"
#include "sah/svg.hpp"

namespace {

std::string read_input(const std::string& path) {
    if (path == "-") {
        std::ostringstream ss;
        ss << std::cin.rdbuf();
        return ss.str();
    }
    std::ifstream in(path);
    if (!in) throw sah::FormulaError("cannot open input file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_output(const std::string& path, const std::string& text) {
    if (path.empty() || path == "-") {
        std::cout << text;
        return;
    }
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open output file: " + path);
    out << text;
}

sah::Rat parse_rat(const std::string& s) {
    try {
        return sah::Rat(s);
    } catch (const std::exception&) {
        throw sah::FormulaError("cannot parse rational: " + s);
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"semi-algebraic H1 basis extraction"};
    app.require_subcommand(1);

    std::string in_path = "-", out_path, field = "gf2", radius, plane = "xy";
    int resolution = 0, max_refine = 3;
    unsigned seed = 0;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("input", in_path, "input JSON document ('-' for stdin)");
        sub->add_option("--out", out_path, "output file (default stdout)");
        sub->add_option("--field", field, "homology coefficient field")
            ->check(CLI::IsMember({"gf2", "rational"}));
        sub->add_option("--resolution", resolution, "grid resolution (power of two)");
        sub->add_option("--max-refine", max_refine, "extra grid doublings allowed");
        sub->add_option("--radius", radius, "bounding-box half-width (rational, e.g. 7/2)");
        sub->add_option("--seed", seed, "seed for randomized subroutines");
        return sub;
    };
    CLI::App* basis = add_common(app.add_subcommand("basis", "H1 basis as closed formulas"));
    CLI::App* betti = add_common(app.add_subcommand("betti", "verified Betti numbers"));
    CLI::App* skel = add_common(app.add_subcommand("skeleton", "network summary"));
    CLI::App* render = add_common(app.add_subcommand("render", "SVG rendering"));
    render->add_option("--plane", plane, "projection plane")
        ->check(CLI::IsMember({"xy", "xz", "yz"}));

    CLI11_PARSE(app, argc, argv);

    try {
        sah::RunConfig cfg;
        cfg.field = field == "gf2" ? sah::Field::GF2 : sah::Field::RATIONAL;
        cfg.resolution = resolution;
        cfg.max_refine = max_refine;
        cfg.seed = seed;
        if (!radius.empty()) cfg.radius = parse_rat(radius);

        sah::ParsedInput input = sah::parse_formula(read_input(in_path));
        if (basis->parsed()) {
            sah::BasisResult res = sah::run_basis(input, cfg);
            std::cerr << "timings_ms: " << res.doc["timings_ms"].dump() << "\n";
            write_output(out_path, res.doc.dump(2) + "\n");
        } else if (betti->parsed()) {
            auto doc = sah::run_betti(input, cfg);
            std::cerr << "timings_ms: " << doc["timings_ms"].dump() << "\n";
            write_output(out_path, doc.dump(2) + "\n");
        } else if (skel->parsed()) {
            auto doc = sah::run_skeleton(input, cfg);
            std::cerr << "timings_ms: " << doc["timings_ms"].dump() << "\n";
            write_output(out_path, doc.dump(2) + "\n");
        } else if (render->parsed()) {
            sah::BasisResult res = sah::run_basis(input, cfg);
            int ax = plane[0] == 'x' ? 0 : plane[0] == 'y' ? 1 : 2;
            int ay = plane[1] == 'y' ? 1 : plane[1] == 'z' ? 2 : 0;
            if (res.k == 2 && (ax >= 2 || ay >= 2))
                throw sah::FormulaError("projection plane needs a third variable");
            write_output(out_path, sah::render_svg(res, ax, ay));
        }
    } catch (const sah::FormulaError& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return 2;
    } catch (const sah::OracleError& e) {
        std::cerr << "oracle instability: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
