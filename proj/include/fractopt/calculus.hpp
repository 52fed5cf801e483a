#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "fractopt/graph.hpp"

namespace fractopt {

struct ScalarField {
    const FractalGraph* graph = nullptr;
    std::vector<double> values;
};

ScalarField make_field(const FractalGraph& g, double fill = 0.0);

double graph_energy(const ScalarField& u, const ScalarField& v);
inline double graph_energy(const ScalarField& u) { return graph_energy(u, u); }

ScalarField markov_clamp(const ScalarField& u);

double discrete_laplacian(const ScalarField& u, VertexId x);

// Harmonic structure of an IFS: the level-1 energy-minimizing extension
// matrix and the renormalization constant r = 1/r1, with
// r1 = E_0(u) / E_1(extension of u) constant across boundary values.
struct HarmonicStructure {
    IfsSystem system;
    Eigen::MatrixXd extension_matrix;      // (N_1 - N_0) x N_0
    double r = 0.0;
    double r1 = 0.0;
    std::vector<VertexId> interior_order;  // level-1 interior ids, row order
    // child_slot[letter][corner]: position of f_letter(P_corner) in the
    // concatenated value vector [boundary values, interior values].
    std::vector<std::vector<int>> child_slot;
};

HarmonicStructure compute_harmonic_structure(const IfsSystem& ifs);

ScalarField harmonic_extension(const HarmonicStructure& hs, const FractalGraph& g,
                               const std::vector<double>& boundary_values);

double renormalized_energy(const HarmonicStructure& hs, const ScalarField& u);

ScalarField solve_dirichlet(const HarmonicStructure& hs, const FractalGraph& g,
                            const std::vector<double>& boundary_values);

double spline_integral(const HarmonicStructure& hs, const FractalGraph& g, VertexId x);

double pointwise_laplacian_estimate(const HarmonicStructure& hs, const ScalarField& u,
                                    VertexId x);

enum class ExtremumVerdict { consistent_max, consistent_min, inconsistent, interiorless };

std::string to_string(ExtremumVerdict v);

struct ExtremumReport {
    ExtremumVerdict verdict = ExtremumVerdict::inconsistent;
    double laplacian = 0.0;
    bool local_max = false;
    bool local_min = false;
};

ExtremumReport laplacian_extremum_test(const ScalarField& u, VertexId x);

std::string field_to_csv(const ScalarField& u);
ScalarField field_from_csv(const FractalGraph& g, const std::string& text);

}  // namespace fractopt
