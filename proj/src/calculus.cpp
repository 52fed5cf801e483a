#include "fractopt/calculus.hpp"

#include <Eigen/Sparse>
#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <sstream>

#include "fractopt/errors.hpp"

namespace fractopt {

namespace {

[[noreturn]] void fail(const std::string& message) {
    throw Error("calculus", message);
}

void check_field(const ScalarField& u) {
    if (u.graph == nullptr) fail("field has no graph");
    if (u.values.size() != u.graph->vertices.size())
        fail("field size does not match its graph");
}

void check_vertex(const ScalarField& u, VertexId x) {
    check_field(u);
    if (!u.graph->valid_vertex(x)) fail("vertex id out of range");
}

Eigen::MatrixXd dense_laplacian(const FractalGraph& g) {
    const int n = g.vertex_count();
    Eigen::MatrixXd L = Eigen::MatrixXd::Zero(n, n);
    for (VertexId x = 0; x < n; ++x) {
        L(x, x) = static_cast<double>(g.adjacency[x].size());
        for (VertexId y : g.adjacency[x]) L(x, y) = -1.0;
    }
    return L;
}

std::vector<VertexId> interior_vertices(const FractalGraph& g) {
    std::vector<char> is_boundary(g.vertices.size(), 0);
    for (VertexId b : g.boundary_ids) is_boundary[b] = 1;
    std::vector<VertexId> interior;
    for (VertexId x = 0; x < g.vertex_count(); ++x)
        if (!is_boundary[x]) interior.push_back(x);
    return interior;
}

ScalarField basis_boundary_field(const FractalGraph& g, const Eigen::VectorXd& bvals) {
    ScalarField u = make_field(g);
    for (std::size_t j = 0; j < g.boundary_ids.size(); ++j)
        u.values[g.boundary_ids[j]] = bvals[static_cast<Eigen::Index>(j)];
    return u;
}

}  // namespace

ScalarField make_field(const FractalGraph& g, double fill) {
    ScalarField u;
    u.graph = &g;
    u.values.assign(g.vertices.size(), fill);
    return u;
}

double graph_energy(const ScalarField& u, const ScalarField& v) {
    check_field(u);
    check_field(v);
    if (u.graph != v.graph) fail("energy of fields on different graphs");
    const FractalGraph& g = *u.graph;
    double total = 0.0;
    for (VertexId x = 0; x < g.vertex_count(); ++x)
        for (VertexId y : g.adjacency[x])
            if (y > x)
                total += (u.values[x] - u.values[y]) * (v.values[x] - v.values[y]);
    return total;
}

ScalarField markov_clamp(const ScalarField& u) {
    check_field(u);
    ScalarField out = u;
    for (double& v : out.values) v = std::min(std::max(v, 0.0), 1.0);
    return out;
}

double discrete_laplacian(const ScalarField& u, VertexId x) {
    check_vertex(u, x);
    double total = 0.0;
    for (VertexId y : u.graph->adjacency[x]) total += u.values[y] - u.values[x];
    return total;
}

HarmonicStructure compute_harmonic_structure(const IfsSystem& ifs) {
    const FractalGraph g0 = build_graph(ifs, 0);
    const FractalGraph g1 = build_graph(ifs, 1);
    const int N0 = ifs.boundary_count();
    const int N = ifs.map_count();

    HarmonicStructure hs;
    hs.system = ifs;
    hs.interior_order = interior_vertices(g1);
    const int nI = static_cast<int>(hs.interior_order.size());
    if (nI == 0) fail("no interior vertices at level 1; nothing to extend");

    std::vector<int> combined_index(g1.vertices.size(), -1);
    for (int j = 0; j < N0; ++j) combined_index[g1.boundary_ids[j]] = j;
    for (int i = 0; i < nI; ++i) combined_index[hs.interior_order[i]] = N0 + i;

    const Eigen::MatrixXd L = dense_laplacian(g1);
    Eigen::MatrixXd L_II(nI, nI);
    Eigen::MatrixXd L_IB(nI, N0);
    for (int i = 0; i < nI; ++i) {
        for (int j = 0; j < nI; ++j) L_II(i, j) = L(hs.interior_order[i], hs.interior_order[j]);
        for (int j = 0; j < N0; ++j) L_IB(i, j) = L(hs.interior_order[i], g1.boundary_ids[j]);
    }
    Eigen::LLT<Eigen::MatrixXd> llt(L_II);
    if (llt.info() != Eigen::Success)
        fail("singular system: level-1 energy minimization is degenerate");
    hs.extension_matrix = llt.solve(-L_IB);

    for (int i = 0; i < nI; ++i) {
        const double row_sum = hs.extension_matrix.row(i).sum();
        if (std::abs(row_sum - 1.0) > 1e-10)
            fail("unsupported structure: extension of constants is not constant");
    }

    // Ratio E_0(u)/E_1(extension of u) must be one constant across boundary
    // data; checked on every basis vector and every basis pair.
    auto extension_energy_ratio = [&](const Eigen::VectorXd& bvals) {
        ScalarField u0 = basis_boundary_field(g0, bvals);
        ScalarField u1 = basis_boundary_field(g1, bvals);
        const Eigen::VectorXd w = hs.extension_matrix * bvals;
        for (int i = 0; i < nI; ++i) u1.values[hs.interior_order[i]] = w[i];
        const double e0 = graph_energy(u0);
        const double e1 = graph_energy(u1);
        if (e1 <= 0.0) fail("degenerate extension: zero energy for nonconstant data");
        return e0 / e1;
    };

    std::vector<Eigen::VectorXd> probes;
    for (int k = 0; k < N0; ++k) {
        Eigen::VectorXd e = Eigen::VectorXd::Zero(N0);
        e[k] = 1.0;
        probes.push_back(e);
    }
    for (int k = 0; k < N0; ++k)
        for (int l = k + 1; l < N0; ++l) {
            Eigen::VectorXd e = Eigen::VectorXd::Zero(N0);
            e[k] = 1.0;
            e[l] = 1.0;
            probes.push_back(e);
        }
    bool have_ratio = false;
    for (const Eigen::VectorXd& bvals : probes) {
        if (bvals.minCoeff() == bvals.maxCoeff()) continue;  // constant data
        const double ratio = extension_energy_ratio(bvals);
        if (!have_ratio) {
            hs.r1 = ratio;
            have_ratio = true;
        } else if (std::abs(ratio - hs.r1) > 1e-10 * std::max(1.0, std::abs(hs.r1))) {
            fail("unsupported structure: energy ratio is not constant across boundary data");
        }
    }
    if (!have_ratio) fail("unsupported structure: no nonconstant boundary data");
    if (!(hs.r1 > 1.0)) fail("unsupported structure: energy ratio r1 must exceed 1");
    hs.r = 1.0 / hs.r1;

    hs.child_slot.assign(N, std::vector<int>(N0, -1));
    for (int i = 0; i < N; ++i) {
        Word w;
        w.letters.assign(1, static_cast<std::uint8_t>(i));
        const std::int32_t cell = g1.find_cell(w);
        if (cell < 0) fail("internal error: level-1 cell missing");
        for (int j = 0; j < N0; ++j)
            hs.child_slot[i][j] = combined_index[g1.cells[cell].corners[j]];
    }
    return hs;
}

ScalarField harmonic_extension(const HarmonicStructure& hs, const FractalGraph& g,
                               const std::vector<double>& boundary_values) {
    const int N0 = hs.system.boundary_count();
    const int N = hs.system.map_count();
    if (static_cast<int>(boundary_values.size()) != N0)
        fail("expected one boundary value per V_0 corner");
    if (g.system.dimension != hs.system.dimension ||
        g.system.map_count() != N || g.system.boundary_count() != N0)
        fail("graph was built from a different system");

    ScalarField out = make_field(g);
    Word word;
    word.letters.reserve(g.level);

    // The new values are convex combinations of the cell corners; extended
    // accumulation keeps each stored value within half an ulp of the exact
    // combination, so the discrete Laplacian of the extension stays near
    // rounding level even after the huge r^{-m} magnification.
    const int nI = static_cast<int>(hs.extension_matrix.rows());
    auto interpolate = [&](const Eigen::VectorXd& bv) {
        Eigen::VectorXd interior(nI);
        for (int i = 0; i < nI; ++i) {
            long double s = 0.0L;
            for (int j = 0; j < N0; ++j)
                s += static_cast<long double>(hs.extension_matrix(i, j)) * bv[j];
            interior[i] = static_cast<double>(s);
        }
        return interior;
    };

    auto extend = [&](auto&& self, const Eigen::VectorXd& bv, int depth) -> void {
        if (depth == g.level) {
            const std::int32_t cell = g.find_cell(word);
            if (cell < 0) fail("internal error: cell missing during extension");
            for (int j = 0; j < N0; ++j) out.values[g.cells[cell].corners[j]] = bv[j];
            return;
        }
        const Eigen::VectorXd interior = interpolate(bv);
        Eigen::VectorXd child(N0);
        for (int i = 0; i < N; ++i) {
            for (int j = 0; j < N0; ++j) {
                const int slot = hs.child_slot[i][j];
                child[j] = slot < N0 ? bv[slot] : interior[slot - N0];
            }
            word.letters.push_back(static_cast<std::uint8_t>(i));
            self(self, child, depth + 1);
            word.letters.pop_back();
        }
    };

    Eigen::VectorXd bv(N0);
    for (int j = 0; j < N0; ++j) bv[j] = boundary_values[j];
    extend(extend, bv, 0);
    return out;
}

double renormalized_energy(const HarmonicStructure& hs, const ScalarField& u) {
    check_field(u);
    return std::pow(hs.r, -static_cast<double>(u.graph->level)) * graph_energy(u);
}

ScalarField solve_dirichlet(const HarmonicStructure& hs, const FractalGraph& g,
                            const std::vector<double>& boundary_values) {
    const int N0 = static_cast<int>(g.boundary_ids.size());
    if (static_cast<int>(boundary_values.size()) != N0)
        fail("expected one boundary value per V_0 corner");
    if (g.system.dimension != hs.system.dimension ||
        g.system.map_count() != hs.system.map_count() ||
        g.system.boundary_count() != hs.system.boundary_count())
        fail("graph was built from a different system");

    ScalarField out = make_field(g);
    for (int j = 0; j < N0; ++j) out.values[g.boundary_ids[j]] = boundary_values[j];

    const std::vector<VertexId> interior = interior_vertices(g);
    const int nI = static_cast<int>(interior.size());
    if (nI == 0) return out;

    std::vector<int> interior_rank(g.vertices.size(), -1);
    for (int i = 0; i < nI; ++i) interior_rank[interior[i]] = i;
    std::vector<double> boundary_value_of(g.vertices.size(),
                                          std::numeric_limits<double>::quiet_NaN());
    for (int j = 0; j < N0; ++j) boundary_value_of[g.boundary_ids[j]] = boundary_values[j];

    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(nI);
    for (int i = 0; i < nI; ++i)
        for (VertexId y : g.adjacency[interior[i]])
            if (interior_rank[y] < 0) rhs[i] += boundary_value_of[y];

    Eigen::VectorXd solution(nI);
    if (g.vertex_count() <= 5000) {
        Eigen::MatrixXd L_II = Eigen::MatrixXd::Zero(nI, nI);
        for (int i = 0; i < nI; ++i) {
            L_II(i, i) = static_cast<double>(g.adjacency[interior[i]].size());
            for (VertexId y : g.adjacency[interior[i]])
                if (interior_rank[y] >= 0) L_II(i, interior_rank[y]) = -1.0;
        }
        Eigen::LLT<Eigen::MatrixXd> llt(L_II);
        if (llt.info() != Eigen::Success) fail("singular system in Dirichlet solve");
        solution = llt.solve(rhs);
    } else {
        std::vector<Eigen::Triplet<double>> triplets;
        triplets.reserve(static_cast<std::size_t>(nI) * 5);
        for (int i = 0; i < nI; ++i) {
            triplets.emplace_back(i, i, static_cast<double>(g.adjacency[interior[i]].size()));
            for (VertexId y : g.adjacency[interior[i]])
                if (interior_rank[y] >= 0) triplets.emplace_back(i, interior_rank[y], -1.0);
        }
        Eigen::SparseMatrix<double> L_II(nI, nI);
        L_II.setFromTriplets(triplets.begin(), triplets.end());
        Eigen::ConjugateGradient<Eigen::SparseMatrix<double>, Eigen::Lower | Eigen::Upper> cg;
        cg.setTolerance(1e-14);
        cg.setMaxIterations(50LL * nI);
        cg.compute(L_II);
        solution = cg.solve(rhs);
        const double residual = (L_II * solution - rhs).lpNorm<Eigen::Infinity>();
        if (residual > 1e-12 * std::max(1.0, rhs.lpNorm<Eigen::Infinity>()))
            fail("iterative Dirichlet solve did not reach the residual tolerance");
    }
    for (int i = 0; i < nI; ++i) out.values[interior[i]] = solution[i];
    return out;
}

double spline_integral(const HarmonicStructure& hs, const FractalGraph& g, VertexId x) {
    if (!g.valid_vertex(x)) fail("vertex id out of range");
    const int N0 = hs.system.boundary_count();
    const int N = hs.system.map_count();
    const std::vector<double> mu = measure_weights(hs.system);

    // Quadrature at refinement depth k of the integral over F of the
    // harmonic interpolant with the given cell-corner values.
    auto quad = [&](auto&& self, const Eigen::VectorXd& bv, int k) -> double {
        if (k == 0) return bv.mean();
        const Eigen::VectorXd interior = hs.extension_matrix * bv;
        Eigen::VectorXd child(N0);
        double total = 0.0;
        for (int i = 0; i < N; ++i) {
            for (int j = 0; j < N0; ++j) {
                const int slot = hs.child_slot[i][j];
                child[j] = slot < N0 ? bv[slot] : interior[slot - N0];
            }
            total += mu[i] * self(self, child, k - 1);
        }
        return total;
    };

    const std::vector<Address>& addresses = g.vertices[x].addresses;
    auto estimate = [&](int k) {
        double total = 0.0;
        for (const Address& a : addresses) {
            Eigen::VectorXd bv = Eigen::VectorXd::Zero(N0);
            bv[a.corner] = 1.0;
            total += cell_measure(hs.system, a.word) * quad(quad, bv, k);
        }
        return total;
    };

    double previous = estimate(0);
    for (int k = 1; k <= 12; ++k) {
        const double current = estimate(k);
        if (std::abs(current - previous) < 1e-8) return current;
        previous = current;
    }
    fail("spline integral did not converge within the refinement cap");
}

double pointwise_laplacian_estimate(const HarmonicStructure& hs, const ScalarField& u,
                                    VertexId x) {
    check_vertex(u, x);
    const FractalGraph& g = *u.graph;
    for (VertexId b : g.boundary_ids)
        if (b == x) fail("pointwise estimate is defined on V_m minus V_0 only");
    const double weight = spline_integral(hs, g, x);
    return std::pow(hs.r, -static_cast<double>(g.level)) * discrete_laplacian(u, x) / weight;
}

std::string to_string(ExtremumVerdict v) {
    switch (v) {
        case ExtremumVerdict::consistent_max: return "consistent_max";
        case ExtremumVerdict::consistent_min: return "consistent_min";
        case ExtremumVerdict::inconsistent: return "inconsistent";
        case ExtremumVerdict::interiorless: return "interiorless";
    }
    return "inconsistent";
}

ExtremumReport laplacian_extremum_test(const ScalarField& u, VertexId x) {
    check_vertex(u, x);
    ExtremumReport report;
    report.local_max = true;
    report.local_min = true;
    for (VertexId y : u.graph->adjacency[x]) {
        if (u.values[y] > u.values[x]) report.local_max = false;
        if (u.values[y] < u.values[x]) report.local_min = false;
    }
    report.laplacian = discrete_laplacian(u, x);
    if (report.local_max && report.local_min)
        report.verdict = ExtremumVerdict::interiorless;
    else if (report.local_max)
        report.verdict = report.laplacian <= 0.0 ? ExtremumVerdict::consistent_max
                                                 : ExtremumVerdict::inconsistent;
    else if (report.local_min)
        report.verdict = report.laplacian >= 0.0 ? ExtremumVerdict::consistent_min
                                                 : ExtremumVerdict::inconsistent;
    else
        report.verdict = ExtremumVerdict::inconsistent;
    return report;
}

std::string field_to_csv(const ScalarField& u) {
    check_field(u);
    std::string out = "vertex_id,value\n";
    for (VertexId x = 0; x < u.graph->vertex_count(); ++x) {
        out += std::to_string(x);
        out += ',';
        out += format_double(u.values[x]);
        out += '\n';
    }
    return out;
}

ScalarField field_from_csv(const FractalGraph& g, const std::string& text) {
    ScalarField u = make_field(g);
    std::vector<char> seen(g.vertices.size(), 0);
    std::istringstream in(text);
    std::string line;
    bool first = true;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        if (first) {
            first = false;
            if (line == "vertex_id,value") continue;
        }
        const std::size_t comma = line.find(',');
        if (comma == std::string::npos) fail("malformed field CSV line: " + line);
        char* end = nullptr;
        const long id = std::strtol(line.c_str(), &end, 10);
        if (end != line.c_str() + comma) fail("malformed vertex id in: " + line);
        if (id < 0 || id >= g.vertex_count()) fail("vertex id out of range in: " + line);
        const std::string value_text = line.substr(comma + 1);
        const double value = std::strtod(value_text.c_str(), &end);
        if (end == value_text.c_str() || *end != '\0')
            fail("malformed value in: " + line);
        if (!std::isfinite(value)) fail("non-finite value in: " + line);
        if (seen[id]) fail("duplicate vertex id in field CSV: " + std::to_string(id));
        seen[id] = 1;
        u.values[id] = value;
    }
    for (VertexId x = 0; x < g.vertex_count(); ++x)
        if (!seen[x]) fail("field CSV is missing vertex " + std::to_string(x));
    return u;
}

}  // namespace fractopt
