// Acceptance gate: one line per criterion, exit 0 only if all gating
// criteria pass. Criterion 12 is an informational timing trend and does
// not affect the exit code.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <string>
#include <vector>

#include "fractopt/calculus.hpp"
#include "fractopt/expr.hpp"
#include "fractopt/graph.hpp"
#include "fractopt/optimizer.hpp"
#include "oracles.hpp"

using namespace fractopt;

namespace {

volatile double g_sink = 0.0;

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

Vec point_from(const std::string& text, int dimension) {
    const std::vector<Expr> parts = parse_expression_list(text);
    Vec p{};
    for (int i = 0; i < dimension && i < static_cast<int>(parts.size()); ++i)
        p[i] = evaluate(parts[i], Vec{}, 0);
    return p;
}

std::string fmt(double v) {
    char buffer[64];
    std::snprintf(buffer, sizeof buffer, "%.3g", v);
    return buffer;
}

struct HeadlineRun {
    const FractalGraph* g = nullptr;
    ScalarField u;
    AscentPath path;
    double seconds = 0.0;
};

HeadlineRun ascend(const FractalGraph& g, const std::string& function,
                const std::string& start) {
    HeadlineRun run;
    run.g = &g;
    run.u = field_from_expr(parse_expression(function), g);
    const VertexId x0 = snap_to_vertex(g, point_from(start, g.system.dimension));
    run.path = gradient_ascent(run.u, x0);
    return run;
}

std::vector<VertexId> interior_of(const FractalGraph& g) {
    std::vector<char> boundary(g.vertices.size(), 0);
    for (VertexId b : g.boundary_ids) boundary[b] = 1;
    std::vector<VertexId> out;
    for (VertexId x = 0; x < g.vertex_count(); ++x)
        if (!boundary[x]) out.push_back(x);
    return out;
}

bool is_boundary(const FractalGraph& g, VertexId x) {
    for (VertexId b : g.boundary_ids)
        if (b == x) return true;
    return false;
}

// wall time per graph build + field evaluation at one level; the fastest
// of several adequately long batches, so a background process stealing the
// core mid-batch cannot inflate one level's cost
double level_cost(const IfsSystem& ifs, int m, const Expr& fn) {
    auto batch = [&](int reps) {
        const auto t0 = Clock::now();
        for (int i = 0; i < reps; ++i) {
            const FractalGraph g = build_graph(ifs, m);
            const ScalarField u = field_from_expr(fn, g);
            g_sink = g_sink + u.values.back();
        }
        return seconds_since(t0);
    };
    int reps = 1;
    double total = batch(reps);
    while (total < 0.02 && reps < (1 << 14)) {
        reps *= 4;
        total = batch(reps);
    }
    double best = total / reps;
    for (int trial = 0; trial < 5; ++trial) best = std::min(best, batch(reps) / reps);
    return best;
}

}  // namespace

int main() {
    bool all_pass = true;
    auto report = [&](int id, bool pass, const std::string& detail,
                      bool informational = false) {
        std::printf("criterion %2d: %s - %s%s\n", id, pass ? "PASS" : "FAIL",
                    detail.c_str(), !pass && informational ? " (informational only)" : "");
        if (!pass && !informational) all_pass = false;
    };
    auto guard = [&](int id, auto&& body, bool informational = false) {
        try {
            body();
        } catch (const std::exception& e) {
            report(id, false, std::string("exception: ") + e.what(), informational);
        }
    };

    const IfsSystem gasket = load_preset("gasket");
    const IfsSystem tetra = load_preset("tetrahedron");
    const IfsSystem mink = load_preset("minkowski");

    FractalGraph gasket6, tetra6, mink3, mink6;
    HeadlineRun run1, run2, run3, run4;

    // 1: gasket ascent of x^2+y^2 from (5/8, sqrt(3)/8) at level 6
    guard(1, [&] {
        const auto t0 = Clock::now();
        gasket6 = build_graph(gasket, 6);
        run1 = ascend(gasket6, "x^2+y^2", "5/8, sqrt(3)/8");
        run1.seconds = seconds_since(t0);
        const VertexId terminal = run1.path.vertices.back();
        const bool at_corner = gasket6.vertices[terminal].pos == Vec{1.0, 0.0, 0.0} &&
                               terminal == snap_to_vertex(gasket6, Vec{1.0, 0.0, 0.0});
        const bool value_ok = std::abs(run1.path.values.back() - 1.0) <= 1e-12;
        const bool fast = run1.seconds < 2.0;
        report(1, at_corner && value_ok && fast,
               "gasket level 6 ascent ends at (1, 0) value 1 in " + fmt(run1.seconds) +
                   " s, " + std::to_string(run1.path.steps) + " steps");
    });

    // 2: gasket ascent of -(x-1/2)^2-(y-sqrt(3)/4)^2 from (3/4, sqrt(3)/4)
    guard(2, [&] {
        run2 = ascend(gasket6, "-(x-1/2)^2-(y-sqrt(3)/4)^2", "3/4, sqrt(3)/4");
        const VertexId terminal = run2.path.vertices.back();
        const Vec expected{0.5, std::sqrt(3.0) / 4.0, 0.0};
        const bool at_peak = distance(gasket6.vertices[terminal].pos, expected) <= 1e-12 &&
                             terminal == snap_to_vertex(gasket6, expected);
        const bool value_ok = std::abs(run2.path.values.back()) <= 1e-12;
        report(2, at_peak && value_ok,
               "gasket level 6 ascent ends at (1/2, sqrt(3)/4) value 0, " +
                   std::to_string(run2.path.steps) + " steps");
    });

    // 3: tetrahedron ascent of x^2+y^2+z^2 at level 6
    guard(3, [&] {
        const auto t0 = Clock::now();
        tetra6 = build_graph(tetra, 6);
        run3 = ascend(tetra6, "x^2+y^2+z^2", "41/64, 1/64 + sqrt(3)/8, 1/64");
        run3.seconds = seconds_since(t0);
        const VertexId terminal = run3.path.vertices.back();
        const bool at_corner = tetra6.vertices[terminal].pos == Vec{1.0, 0.0, 0.0} &&
                               terminal == snap_to_vertex(tetra6, Vec{1.0, 0.0, 0.0});
        const bool value_ok = std::abs(run3.path.values.back() - 1.0) <= 1e-12;
        const bool fast = run3.seconds < 10.0;
        report(3, at_corner && value_ok && fast,
               "tetrahedron level 6 ascent ends at (1, 0, 0) value 1 in " +
                   fmt(run3.seconds) + " s, " + std::to_string(run3.path.steps) + " steps");
    });

    // 4: minkowski ascent of x^2+y^2 from (0, 0) at level 3
    guard(4, [&] {
        mink3 = build_graph(mink, 3);
        run4 = ascend(mink3, "x^2+y^2", "0, 0");
        const VertexId terminal = run4.path.vertices.back();
        const bool at_bump = mink3.vertices[terminal].pos == Vec{1.0 / 32.0, 1.0 / 64.0, 0.0};
        const bool value_ok = std::abs(run4.path.values.back() - 5.0 / 4096.0) <= 1e-15;
        report(4, at_bump && value_ok,
               "chain level 3 ascent ends at (1/32, 1/64) value 5/4096, " +
                   std::to_string(run4.path.steps) + " steps");
    });

    // 5: vertex and edge counting formulas
    guard(5, [&] {
        bool ok = true;
        for (int m = 0; m <= 6; ++m) {
            const FractalGraph g = build_graph(gasket, m);
            ok = ok && g.vertex_count() == oracles::gasket_vertices(m) &&
                 g.edge_count() == oracles::gasket_edges(m);
        }
        for (const IfsSystem* ifs : {&tetra, &mink}) {
            const long long n = ifs->map_count();
            const long long junctions =
                static_cast<long long>(junction_points(build_graph(*ifs, 1)).size());
            const long long a0 = build_graph(*ifs, 0).edge_count();
            long long vertices = ifs->boundary_count();
            long long edges = a0;
            for (int m = 0; m <= 4; ++m) {
                if (m > 0) {
                    vertices = n * vertices - junctions;
                    edges *= n;
                }
                const FractalGraph g = build_graph(*ifs, m);
                ok = ok && g.vertex_count() == vertices && g.edge_count() == edges;
            }
        }
        report(5, ok, "closed-form gasket counts (m <= 6) and the junction recursion "
                      "(tetrahedron, chain, m <= 4) match the built graphs");
    });

    // 6: gasket harmonic structure two independent ways
    guard(6, [&] {
        const HarmonicStructure hs = compute_harmonic_structure(gasket);
        const FractalGraph g1 = build_graph(gasket, 1);
        bool ok = std::abs(hs.r - 0.6) <= 1e-10;

        auto check_rule = [&](const Eigen::MatrixXd& matrix) {
            bool good = matrix.rows() == 3 && matrix.cols() == 3;
            for (int i = 0; good && i < 3; ++i) {
                const Vec pos = g1.vertices[hs.interior_order[i]].pos;
                int far = 0;
                for (int j = 1; j < 3; ++j)
                    if (distance(pos, gasket.boundary_point(j)) >
                        distance(pos, gasket.boundary_point(far)))
                        far = j;
                for (int j = 0; j < 3; ++j) {
                    const double want = j == far ? 0.2 : 0.4;
                    good = good && std::abs(matrix(i, j) - want) <= 1e-10;
                }
            }
            return good;
        };
        ok = ok && check_rule(hs.extension_matrix);

        // second route: level-1 Dirichlet solves, one basis vector at a time
        Eigen::MatrixXd direct(3, 3);
        double ratio = 0.0;
        const FractalGraph g0 = build_graph(gasket, 0);
        for (int j = 0; j < 3; ++j) {
            std::vector<double> basis(3, 0.0);
            basis[j] = 1.0;
            const ScalarField solved = solve_dirichlet(hs, g1, basis);
            for (int i = 0; i < 3; ++i)
                direct(i, j) = solved.values[hs.interior_order[i]];
            ScalarField coarse = make_field(g0);
            for (int k = 0; k < 3; ++k) coarse.values[g0.boundary_ids[k]] = basis[k];
            const double r1 = graph_energy(coarse) / graph_energy(solved);
            if (j == 0) ratio = r1;
            ok = ok && std::abs(r1 - ratio) <= 1e-10;
        }
        ok = ok && check_rule(direct) && std::abs(1.0 / ratio - 0.6) <= 1e-10;
        report(6, ok, "direct minimization and Dirichlet solves both give the "
                      "2/5-2/5-1/5 extension rule with r = 3/5");
    });

    // 7: renormalized energy of harmonic extensions is level independent
    guard(7, [&] {
        oracles::Rng rng(7001);
        double worst = 0.0;
        for (const IfsSystem* ifs : {&gasket, &mink}) {
            const HarmonicStructure hs = compute_harmonic_structure(*ifs);
            const FractalGraph g0 = build_graph(*ifs, 0);
            std::vector<FractalGraph> graphs;
            for (int m = 1; m <= 5; ++m) graphs.push_back(build_graph(*ifs, m));
            for (int trial = 0; trial < 50; ++trial) {
                const std::vector<double> u0 = oracles::random_values(
                    rng, static_cast<std::size_t>(ifs->boundary_count()));
                ScalarField coarse = make_field(g0);
                for (int j = 0; j < ifs->boundary_count(); ++j)
                    coarse.values[g0.boundary_ids[j]] = u0[j];
                const double e0 = graph_energy(coarse);
                for (const FractalGraph& g : graphs) {
                    const ScalarField u = harmonic_extension(hs, g, u0);
                    worst = std::max(worst, std::abs(renormalized_energy(hs, u) - e0));
                }
            }
        }
        report(7, worst <= 1e-9,
               "50 random boundary sets, levels 1..5, gasket and chain: max "
               "|renormalized energy - base energy| = " + fmt(worst));
    });

    // 8: Dirichlet form axioms and the Markov property on random fields
    guard(8, [&] {
        oracles::Rng rng(8001);
        int failures = 0;
        for (const IfsSystem* ifs : {&gasket, &tetra, &mink}) {
            for (int m = 0; m <= 4; ++m) {
                const FractalGraph g = build_graph(*ifs, m);
                if (graph_energy(make_field(g, 3.25)) != 0.0) ++failures;
                for (int trial = 0; trial < 100; ++trial) {
                    const ScalarField u = oracles::random_field(rng, g, -2.0, 3.0);
                    const double e = graph_energy(u);
                    if (!(e > 0.0)) ++failures;
                    if (!(graph_energy(markov_clamp(u)) <= e)) ++failures;
                }
            }
        }
        report(8, failures == 0,
               "energy positivity and clamp monotonicity over 100 random fields "
               "per preset per level (m <= 4), failures = " + std::to_string(failures));
    });

    // 9: pointwise Laplacian estimates
    guard(9, [&] {
        oracles::Rng rng(9001);
        double worst_harmonic = 0.0;
        for (const IfsSystem* ifs : {&gasket, &tetra, &mink}) {
            const HarmonicStructure hs = compute_harmonic_structure(*ifs);
            for (int m = 1; m <= 4; ++m) {
                const FractalGraph g = build_graph(*ifs, m);
                const std::vector<VertexId> interior = interior_of(g);
                for (int trial = 0; trial < 50; ++trial) {
                    const std::vector<double> u0 = oracles::random_values(
                        rng, static_cast<std::size_t>(ifs->boundary_count()));
                    const ScalarField u = harmonic_extension(hs, g, u0);
                    for (VertexId x : interior)
                        worst_harmonic = std::max(
                            worst_harmonic, std::abs(pointwise_laplacian_estimate(hs, u, x)));
                }
            }
        }

        const HarmonicStructure hs = compute_harmonic_structure(gasket);
        double worst_factor = 0.0;
        for (int m = 1; m <= 5; ++m) {
            const FractalGraph g = build_graph(gasket, m);
            const double factor = 1.5 * std::pow(5.0, m);
            for (VertexId x : interior_of(g)) {
                const double measured =
                    std::pow(hs.r, -m) / spline_integral(hs, g, x);
                worst_factor = std::max(worst_factor,
                                        std::abs(measured - factor) / factor);
            }
        }
        report(9, worst_harmonic < 1e-8 && worst_factor <= 1e-5,
               "max |estimate| on 50 random harmonic fields (m <= 4) = " +
                   fmt(worst_harmonic) + "; gasket factor matches (3/2)*5^m to " +
                   fmt(worst_factor) + " relative (m <= 5)");
    });

    // 10: extremum sign conditions across the four headline runs
    guard(10, [&] {
        bool ok = true;
        int certified = 0;
        for (const HeadlineRun* run : {&run1, &run2, &run3, &run4}) {
            if (run->g == nullptr) {
                ok = false;
                continue;
            }
            const VertexId terminal = run->path.vertices.back();
            if (!is_boundary(*run->g, terminal)) {
                const ExtremumReport rep = laplacian_extremum_test(run->u, terminal);
                ok = ok && rep.verdict == ExtremumVerdict::consistent_max &&
                     rep.laplacian <= 0.0;
                ++certified;
            }
            for (VertexId x : exhaustive_extrema(run->u).argmax) {
                const ExtremumReport rep = laplacian_extremum_test(run->u, x);
                ok = ok && rep.verdict == ExtremumVerdict::consistent_max &&
                     rep.laplacian <= 0.0;
                ++certified;
            }
        }
        report(10, ok, "sign condition holds at every interior terminal and every "
                       "global argmax vertex of the four headline runs (" +
                           std::to_string(certified) + " certifications)");
    });

    // 11: value iteration against brute force, plus greedy dominance
    guard(11, [&] {
        bool exact = true;
        for (const IfsSystem* ifs : {&gasket, &mink}) {
            for (int m = 1; m <= 3; ++m) {
                const FractalGraph g = build_graph(*ifs, m);
                ScalarField u = make_field(g);
                for (VertexId x = 0; x < g.vertex_count(); ++x) {
                    const Vec& p = g.vertices[x].pos;
                    u.values[x] = p[0] * p[0] + p[1] * p[1];
                }
                const ValueFunction vf = value_iteration(edge_weights(u));
                exact = exact && vf.values == oracles::brute_force_values(u) &&
                        vf.iterations <= g.vertex_count();
            }
        }

        mink6 = build_graph(mink, 6);
        bool dominated = true;
        for (const FractalGraph* g : {&gasket6, &mink6}) {
            if (g->vertex_count() == 0) {
                dominated = false;
                continue;
            }
            ScalarField u = make_field(*g);
            for (VertexId x = 0; x < g->vertex_count(); ++x) {
                const Vec& p = g->vertices[x].pos;
                u.values[x] = p[0] * p[0] + p[1] * p[1];
            }
            const ValueFunction vf = value_iteration(edge_weights(u));
            dominated = dominated && vf.iterations <= g->vertex_count();
            for (VertexId x = 0; x < g->vertex_count(); ++x) {
                const AscentPath path = gradient_ascent(u, x);
                const double bound = u.values[x] + vf.values[x];
                if (!(path.values.back() <= bound + 1e-12 * std::max(1.0, std::abs(bound))))
                    dominated = false;
            }
        }
        report(11, exact && dominated,
               "value iteration matches exhaustive path enumeration exactly "
               "(m <= 3) and greedy ascent never beats the value bound at level 6");
    });

    // 12: build cost growth per level stays near the branching factor
    guard(12, [&] {
        const Expr fn = parse_expression("x^2+y^2");
        std::vector<double> costs;
        for (int m = 4; m <= 7; ++m) costs.push_back(level_cost(gasket, m, fn));
        const double n = static_cast<double>(gasket.map_count());
        bool ok = true;
        std::string factors;
        for (std::size_t i = 0; i + 1 < costs.size(); ++i) {
            const double factor = costs[i + 1] / costs[i];
            ok = ok && factor >= 0.5 * n && factor <= 4.0 * n;
            if (!factors.empty()) factors += ", ";
            factors += fmt(factor);
        }
        report(12, ok, "gasket build+evaluate cost factors per level (m = 4..7): " +
                           factors + " (expected near 3)", true);
    }, true);

    std::printf("%s\n", all_pass ? "acceptance: all gating criteria passed"
                                 : "acceptance: FAILURES above");
    return all_pass ? 0 : 1;
}
