#include "fractopt/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "fractopt/errors.hpp"

namespace fractopt {

namespace {

constexpr double kCanvas = 800.0;
constexpr double kMargin = 40.0;

struct Planar {
    double x = 0.0;
    double y = 0.0;
};

Planar project(const Vec& p, int dimension) {
    if (dimension <= 2) return {p[0], p[1]};
    // isometric: x to the lower right, y to the lower left, z up
    return {(p[0] - p[1]) * 0.8660254037844386, (p[0] + p[1]) * 0.5 - p[2]};
}

std::string fmt(double v) {
    char buffer[64];
    std::snprintf(buffer, sizeof buffer, "%.2f", v);
    return buffer;
}

std::string ramp_color(double t) {
    const int red = static_cast<int>(std::lround(255.0 * t));
    const int blue = 255 - red;
    char buffer[16];
    std::snprintf(buffer, sizeof buffer, "#%02x00%02x", red, blue);
    return buffer;
}

}  // namespace

std::string render_svg(const FractalGraph& g, const std::vector<double>* field_values,
                       const AscentPath* path) {
    if (g.vertices.empty()) throw Error("cli_io", "cannot render an empty graph");
    if (field_values && field_values->size() != g.vertices.size())
        throw Error("cli_io", "field does not match the graph in the SVG renderer");

    const int d = g.system.dimension;
    std::vector<Planar> pts(g.vertices.size());
    for (std::size_t i = 0; i < g.vertices.size(); ++i)
        pts[i] = project(g.vertices[i].pos, d);

    double min_x = pts[0].x, max_x = pts[0].x, min_y = pts[0].y, max_y = pts[0].y;
    for (const Planar& p : pts) {
        min_x = std::min(min_x, p.x);
        max_x = std::max(max_x, p.x);
        min_y = std::min(min_y, p.y);
        max_y = std::max(max_y, p.y);
    }
    const double span = std::max({max_x - min_x, max_y - min_y, 1e-300});
    const double scale = (kCanvas - 2.0 * kMargin) / span;
    const double width = (max_x - min_x) * scale + 2.0 * kMargin;
    const double height = (max_y - min_y) * scale + 2.0 * kMargin;
    auto to_px = [&](const Planar& p) {
        return Planar{kMargin + (p.x - min_x) * scale,
                      height - (kMargin + (p.y - min_y) * scale)};
    };

    double lo = 0.0, hi = 0.0;
    if (field_values) {
        lo = *std::min_element(field_values->begin(), field_values->end());
        hi = *std::max_element(field_values->begin(), field_values->end());
    }

    const double radius =
        std::clamp(240.0 / std::sqrt(static_cast<double>(g.vertices.size())), 1.2, 6.0);

    std::string out;
    out += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + fmt(width) +
           "\" height=\"" + fmt(height) + "\" viewBox=\"0 0 " + fmt(width) + " " +
           fmt(height) + "\">\n";
    out += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";

    out += "<g stroke=\"#d0d0d0\" stroke-width=\"0.6\">\n";
    for (VertexId x = 0; x < g.vertex_count(); ++x)
        for (VertexId y : g.adjacency[x]) {
            if (y < x) continue;  // draw each segment once
            const Planar a = to_px(pts[x]);
            const Planar b = to_px(pts[y]);
            out += "<line x1=\"" + fmt(a.x) + "\" y1=\"" + fmt(a.y) + "\" x2=\"" + fmt(b.x) +
                   "\" y2=\"" + fmt(b.y) + "\"/>\n";
        }
    out += "</g>\n";

    out += "<g stroke=\"none\">\n";
    for (std::size_t i = 0; i < g.vertices.size(); ++i) {
        double t = 0.5;  // constant fields use the midpoint ramp color
        if (field_values && hi > lo) t = ((*field_values)[i] - lo) / (hi - lo);
        const Planar p = to_px(pts[i]);
        out += "<circle cx=\"" + fmt(p.x) + "\" cy=\"" + fmt(p.y) + "\" r=\"" + fmt(radius) +
               "\" fill=\"" + ramp_color(t) + "\"/>\n";
    }
    out += "</g>\n";

    if (path && !path->vertices.empty()) {
        out += "<polyline fill=\"none\" stroke=\"red\" stroke-width=\"1.8\" points=\"";
        for (std::size_t i = 0; i < path->vertices.size(); ++i) {
            const Planar p = to_px(pts[path->vertices[i]]);
            if (i) out += ' ';
            out += fmt(p.x) + "," + fmt(p.y);
        }
        out += "\"/>\n";
        for (VertexId v : path->vertices) {
            const Planar p = to_px(pts[v]);
            out += "<circle cx=\"" + fmt(p.x) + "\" cy=\"" + fmt(p.y) + "\" r=\"" +
                   fmt(radius * 1.6) + "\" fill=\"red\"/>\n";
        }
    }
    out += "</svg>\n";
    return out;
}

}  // namespace fractopt
