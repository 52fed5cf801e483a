#include "fractopt/run.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <ostream>
#include <sstream>

#include "fractopt/calculus.hpp"
#include "fractopt/errors.hpp"
#include "fractopt/expr.hpp"
#include "fractopt/graph.hpp"
#include "fractopt/optimizer.hpp"
#include "fractopt/svg.hpp"

namespace fractopt {

namespace {

[[noreturn]] void fail(const std::string& message) {
    throw Error("cli_io", message);
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) fail("cannot open '" + path + "'");
    std::ostringstream buffer;
    buffer << in.rdbuf();
    if (!in.good() && !in.eof()) fail("failed reading '" + path + "'");
    return buffer.str();
}

Vec parse_start_point(const std::string& text, int dimension) {
    const std::vector<Expr> parts = parse_expression_list(text);
    if (static_cast<int>(parts.size()) != dimension)
        fail("start point has " + std::to_string(parts.size()) + " coordinate(s); the system needs " +
             std::to_string(dimension));
    Vec p{};
    for (int i = 0; i < dimension; ++i) {
        if (max_variable(parts[i]) >= 0)
            fail("start coordinates must be constant expressions");
        p[i] = evaluate(parts[i], Vec{}, 0);
    }
    return p;
}

std::string vertex_list(const FractalGraph& g, const std::vector<VertexId>& ids,
                        std::size_t limit = 8) {
    std::string out;
    for (std::size_t i = 0; i < ids.size() && i < limit; ++i) {
        if (i) out += ", ";
        out += format_point(g.vertices[ids[i]].pos, g.system.dimension);
    }
    if (ids.size() > limit) out += ", ...";
    return out;
}

std::string structure_report_json(const HarmonicStructure& hs, const FractalGraph& g1) {
    nlohmann::ordered_json doc;
    doc["r"] = hs.r;
    doc["r1"] = hs.r1;
    auto matrix = nlohmann::ordered_json::array();
    for (Eigen::Index i = 0; i < hs.extension_matrix.rows(); ++i) {
        auto row = nlohmann::ordered_json::array();
        for (Eigen::Index j = 0; j < hs.extension_matrix.cols(); ++j)
            row.push_back(hs.extension_matrix(i, j));
        matrix.push_back(std::move(row));
    }
    doc["extension_matrix"] = std::move(matrix);
    auto interior = nlohmann::ordered_json::array();
    for (VertexId v : hs.interior_order) {
        const Vec& p = g1.vertices[v].pos;
        interior.push_back(std::vector<double>(p.begin(), p.begin() + g1.system.dimension));
    }
    doc["interior_points"] = std::move(interior);
    return doc.dump(2);
}

struct Outputs {
    std::string csv, json, svg;  // empty = nothing to write
};

void write_outputs(const RunConfig& config, const Outputs& outputs, std::ostream& out) {
    struct Item {
        const std::string* path;
        const std::string* content;
        const char* kind;
    };
    for (const Item& item : {Item{&config.csv_path, &outputs.csv, "csv"},
                             Item{&config.json_path, &outputs.json, "json"},
                             Item{&config.svg_path, &outputs.svg, "svg"}}) {
        if (item.path->empty()) continue;
        if (item.content->empty())
            fail(std::string("mode does not produce ") + item.kind + " output");
        write_file_atomic(*item.path, *item.content);
        out << "wrote " << item.kind << " " << *item.path << "\n";
    }
}

}  // namespace

RunMode parse_run_mode(const std::string& text) {
    if (text == "max") return RunMode::max;
    if (text == "min") return RunMode::min;
    if (text == "scan") return RunMode::scan;
    if (text == "dp") return RunMode::dp;
    if (text == "harmonic") return RunMode::harmonic;
    if (text == "laplacian") return RunMode::laplacian;
    fail("unknown mode '" + text + "' (expected max|min|scan|dp|harmonic|laplacian)");
}

void write_file_atomic(const std::string& path, const std::string& content) {
    const std::string temp = path + ".tmp";
    {
        std::ofstream out(temp, std::ios::binary | std::ios::trunc);
        if (!out) fail("cannot open '" + temp + "' for writing");
        out.write(content.data(), static_cast<std::streamsize>(content.size()));
        if (!out.good()) fail("failed writing '" + temp + "'");
    }
    std::error_code ec;
    std::filesystem::rename(temp, path, ec);
    if (ec) fail("cannot rename '" + temp + "' to '" + path + "': " + ec.message());
}

void run(const RunConfig& config, std::ostream& out) {
    if (config.preset.empty() == config.ifs_file.empty())
        fail("specify exactly one of --preset and --ifs");
    if (config.has_level == config.has_tolerance)
        fail("specify exactly one of --level and --tolerance");

    const IfsSystem ifs = config.preset.empty() ? parse_ifs_json(read_file(config.ifs_file))
                                                : load_preset(config.preset);
    const int level =
        config.has_level ? config.level : tolerance_to_level(ifs, config.tolerance);
    if (level < 0) fail("level must be >= 0");
    const FractalGraph g = build_graph(ifs, level);

    const bool needs_function = config.mode != RunMode::harmonic || !config.csv_path.empty() ||
                                !config.svg_path.empty();
    Expr function;
    if (!config.function_text.empty())
        function = parse_expression(config.function_text);
    else if (needs_function)
        fail("this mode requires --function");

    const int d = ifs.dimension;
    Outputs outputs;

    switch (config.mode) {
        case RunMode::max:
        case RunMode::min: {
            if (config.start_text.empty()) fail("modes max and min require --start");
            const ScalarField u = field_from_expr(function, g);
            const VertexId x0 = snap_to_vertex(g, parse_start_point(config.start_text, d));
            const AscentPath path = config.mode == RunMode::max ? gradient_ascent(u, x0)
                                                                : gradient_descent(u, x0);
            const VertexId terminal = path.vertices.back();
            out << "start " << format_point(g.vertices[x0].pos, d) << " value "
                << format_pretty(path.values.front()) << " (" << path.steps << " step"
                << (path.steps == 1 ? "" : "s") << ")\n";
            out << "terminal " << format_point(g.vertices[terminal].pos, d) << " value "
                << format_pretty(path.values.back()) << "\n";
            outputs.csv = path_to_csv(path, g);
            outputs.json = graph_to_json(g);
            outputs.svg = render_svg(g, &u.values, &path);
            break;
        }
        case RunMode::scan: {
            const ScalarField u = field_from_expr(function, g);
            const Extrema extrema = exhaustive_extrema(u);
            out << "max " << format_pretty(extrema.max_value) << " at "
                << extrema.argmax.size() << " vertex(es): " << vertex_list(g, extrema.argmax)
                << "\n";
            out << "min " << format_pretty(extrema.min_value) << " at "
                << extrema.argmin.size() << " vertex(es): " << vertex_list(g, extrema.argmin)
                << "\n";
            outputs.csv = field_to_csv(u);
            outputs.json = graph_to_json(g);
            outputs.svg = render_svg(g, &u.values, nullptr);
            break;
        }
        case RunMode::dp: {
            const ScalarField u = field_from_expr(function, g);
            const ValueFunction vf = value_iteration(edge_weights(u));
            double best = 0.0;
            for (double v : vf.values) best = std::max(best, v);
            out << "value function fixed point after " << vf.iterations << " sweep"
                << (vf.iterations == 1 ? "" : "s") << "; max v* = " << format_pretty(best)
                << "\n";
            outputs.csv = value_function_to_csv(vf);
            outputs.json = graph_to_json(g);
            outputs.svg = render_svg(g, &vf.values, nullptr);
            break;
        }
        case RunMode::harmonic: {
            const HarmonicStructure hs = compute_harmonic_structure(ifs);
            out << "r = " << format_pretty(hs.r) << " (r1 = " << format_pretty(hs.r1) << ")\n";
            const FractalGraph g1 = build_graph(ifs, 1);
            outputs.json = structure_report_json(hs, g1);
            if (function) {
                std::vector<double> boundary(ifs.boundary_count());
                for (int j = 0; j < ifs.boundary_count(); ++j)
                    boundary[j] = evaluate(function, ifs.boundary_point(j), d);
                const ScalarField h = solve_dirichlet(hs, g, boundary);
                out << "harmonic field energy " << format_pretty(renormalized_energy(hs, h))
                    << "\n";
                outputs.csv = field_to_csv(h);
                outputs.svg = render_svg(g, &h.values, nullptr);
            }
            break;
        }
        case RunMode::laplacian: {
            const HarmonicStructure hs = compute_harmonic_structure(ifs);
            const ScalarField u = field_from_expr(function, g);
            std::vector<char> is_boundary(g.vertices.size(), 0);
            for (VertexId b : g.boundary_ids) is_boundary[b] = 1;
            std::vector<double> estimates(g.vertices.size(), 0.0);
            double worst = 0.0;
            int interior_count = 0;
            std::string csv = "vertex_id,value\n";
            for (VertexId x = 0; x < g.vertex_count(); ++x) {
                if (is_boundary[x]) continue;
                estimates[x] = pointwise_laplacian_estimate(hs, u, x);
                worst = std::max(worst, std::abs(estimates[x]));
                ++interior_count;
                csv += std::to_string(x) + "," + format_double(estimates[x]) + "\n";
            }
            out << "laplacian estimates at " << interior_count
                << " interior vertex(es); max |estimate| = " << format_pretty(worst) << "\n";
            outputs.csv = std::move(csv);
            outputs.json = graph_to_json(g);
            outputs.svg = render_svg(g, &estimates, nullptr);
            break;
        }
    }

    write_outputs(config, outputs, out);
}

}  // namespace fractopt
