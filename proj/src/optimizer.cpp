#include "fractopt/optimizer.hpp"

#include <algorithm>
#include <cmath>

#include "fractopt/errors.hpp"

namespace fractopt {

namespace {

[[noreturn]] void fail(const std::string& message) {
    throw Error("optimizer", message);
}

void check_field(const ScalarField& u) {
    if (u.graph == nullptr || u.values.size() != u.graph->vertices.size())
        fail("field does not match its graph");
}

}  // namespace

EdgeWeights edge_weights(const ScalarField& u) {
    check_field(u);
    return EdgeWeights{&u};
}

int tolerance_to_level(const IfsSystem& ifs, double epsilon, std::size_t max_points) {
    if (!(epsilon > 0.0)) fail("tolerance must be positive");
    const double diameter = ifs.v0_diameter();
    const double ratio = ifs.max_ratio();
    int level = 0;
    double scale = diameter;
    std::uint64_t points = static_cast<std::uint64_t>(ifs.boundary_count());
    while (scale > epsilon) {
        ++level;
        scale *= ratio;
        points *= static_cast<std::uint64_t>(ifs.map_count());
        if (points > max_points)
            fail("tolerance " + format_double(epsilon) + " needs level " +
                 std::to_string(level) + ", which exceeds the graph budget");
    }
    return level;
}

AscentPath gradient_ascent(const ScalarField& u, VertexId x0) {
    check_field(u);
    const FractalGraph& g = *u.graph;
    if (!g.valid_vertex(x0)) fail("start vertex id out of range");

    AscentPath path;
    VertexId x = x0;
    path.vertices.push_back(x);
    path.values.push_back(u.values[x]);
    while (true) {
        VertexId best = -1;
        double best_gain = 0.0;
        for (VertexId y : g.adjacency[x]) {
            const double gain = u.values[y] - u.values[x];
            if (gain <= 0.0) continue;
            if (best < 0 || gain > best_gain ||
                (gain == best_gain && lex_less(g.vertices[y].pos, g.vertices[best].pos))) {
                best = y;
                best_gain = gain;
            }
        }
        if (best < 0) break;
        x = best;
        path.vertices.push_back(x);
        path.values.push_back(u.values[x]);
    }
    path.terminated = true;
    path.steps = static_cast<int>(path.vertices.size()) - 1;
    return path;
}

AscentPath gradient_descent(const ScalarField& u, VertexId x0) {
    check_field(u);
    ScalarField negated = u;
    for (double& v : negated.values) v = -v;
    AscentPath path = gradient_ascent(negated, x0);
    for (std::size_t i = 0; i < path.vertices.size(); ++i)
        path.values[i] = u.values[path.vertices[i]];
    return path;
}

std::vector<double> bellman_step(const EdgeWeights& D, const std::vector<double>& v) {
    check_field(*D.field);
    const FractalGraph& g = *D.field->graph;
    if (v.size() != g.vertices.size()) fail("value vector does not match the graph");
    std::vector<double> next(v.size(), 0.0);
    for (VertexId x = 0; x < g.vertex_count(); ++x) {
        double best = 0.0;
        for (VertexId y : g.adjacency[x]) {
            const double d = D(x, y);
            if (d > 0.0) best = std::max(best, d + v[y]);
        }
        next[x] = best;
    }
    return next;
}

ValueFunction value_iteration(const EdgeWeights& D) {
    check_field(*D.field);
    const FractalGraph& g = *D.field->graph;
    ValueFunction vf;
    vf.values.assign(g.vertices.size(), 0.0);
    // Arcs with D > 0 form a DAG (u strictly increases along them), so the
    // fixed point is reached after at most #V_m sweeps; equality is exact.
    const int cap = g.vertex_count() + 1;
    for (int sweep = 1; sweep <= cap; ++sweep) {
        std::vector<double> next = bellman_step(D, vf.values);
        vf.iterations = sweep;
        if (next == vf.values) return vf;
        vf.values = std::move(next);
    }
    fail("value iteration failed to reach a fixed point");
}

Extrema exhaustive_extrema(const ScalarField& u) {
    check_field(u);
    Extrema out;
    out.min_value = u.values[0];
    out.max_value = u.values[0];
    for (double v : u.values) {
        out.min_value = std::min(out.min_value, v);
        out.max_value = std::max(out.max_value, v);
    }
    for (VertexId x = 0; x < u.graph->vertex_count(); ++x) {
        if (u.values[x] == out.min_value) out.argmin.push_back(x);
        if (u.values[x] == out.max_value) out.argmax.push_back(x);
    }
    return out;
}

std::string path_to_csv(const AscentPath& path, const FractalGraph& g) {
    const int d = g.system.dimension;
    std::string out = "step,x";
    if (d >= 2) out += ",y";
    if (d >= 3) out += ",z";
    out += ",value\n";
    for (std::size_t i = 0; i < path.vertices.size(); ++i) {
        out += std::to_string(i);
        const Vec& p = g.vertices[path.vertices[i]].pos;
        for (int c = 0; c < d; ++c) {
            out += ',';
            out += format_double(p[c]);
        }
        out += ',';
        out += format_double(path.values[i]);
        out += '\n';
    }
    return out;
}

std::string value_function_to_csv(const ValueFunction& vf) {
    std::string out = "vertex_id,v\n";
    for (std::size_t x = 0; x < vf.values.size(); ++x) {
        out += std::to_string(x);
        out += ',';
        out += format_double(vf.values[x]);
        out += '\n';
    }
    return out;
}

}  // namespace fractopt
