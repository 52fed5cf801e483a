#pragma once

#include <string>
#include <vector>

#include "fractopt/calculus.hpp"
#include "fractopt/graph.hpp"

namespace fractopt {

// Arc weights D_XY = u(Y) - u(X) on adjacent pairs; non-edges are
// conceptually -infinity and never enumerated.
struct EdgeWeights {
    const ScalarField* field = nullptr;

    double operator()(VertexId x, VertexId y) const {
        return field->values[y] - field->values[x];
    }
};

EdgeWeights edge_weights(const ScalarField& u);

struct AscentPath {
    std::vector<VertexId> vertices;
    std::vector<double> values;
    bool terminated = false;
    int steps = 0;
};

struct ValueFunction {
    std::vector<double> values;
    int iterations = 0;
};

struct Extrema {
    std::vector<VertexId> argmin;
    std::vector<VertexId> argmax;
    double min_value = 0.0;
    double max_value = 0.0;
};

int tolerance_to_level(const IfsSystem& ifs, double epsilon,
                       std::size_t max_points = BuildOptions{}.max_points);

AscentPath gradient_ascent(const ScalarField& u, VertexId x0);
AscentPath gradient_descent(const ScalarField& u, VertexId x0);

std::vector<double> bellman_step(const EdgeWeights& D, const std::vector<double>& v);
ValueFunction value_iteration(const EdgeWeights& D);

Extrema exhaustive_extrema(const ScalarField& u);

std::string path_to_csv(const AscentPath& path, const FractalGraph& g);
std::string value_function_to_csv(const ValueFunction& vf);

}  // namespace fractopt
