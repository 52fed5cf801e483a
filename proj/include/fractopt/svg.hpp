#pragma once

#include <string>
#include <vector>

#include "fractopt/graph.hpp"
#include "fractopt/optimizer.hpp"

namespace fractopt {

// Renders the graph with light-gray edges and vertices colored on a
// blue-to-red ramp over [min, max] of the field (red = high); an optional
// ascent path is overdrawn in red. Output bytes are deterministic.
// 3-D systems are projected onto a fixed isometric basis.
std::string render_svg(const FractalGraph& g, const std::vector<double>* field_values,
                       const AscentPath* path);

}  // namespace fractopt
