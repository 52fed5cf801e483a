#pragma once

#include <cstdint>
#include <string>
#include <unordered_map>
#include <vector>

#include "fractopt/ifs.hpp"

namespace fractopt {

using VertexId = std::int32_t;

struct GraphVertex {
    Vec pos{};
    std::vector<Address> addresses;  // sorted by (word, corner)
};

struct OrientedEdge {
    VertexId from = 0;
    VertexId to = 0;
    std::int32_t cell = 0;  // index of the generating cell
};

struct GraphCell {
    Word word;
    std::vector<VertexId> corners;  // images of V_0, in boundary order
};

struct FractalGraph {
    IfsSystem system;
    int level = 0;
    std::vector<GraphVertex> vertices;
    std::vector<OrientedEdge> edges;
    std::vector<GraphCell> cells;
    std::vector<std::vector<VertexId>> adjacency;  // sorted, unique
    std::vector<VertexId> boundary_ids;            // one per boundary corner

    int vertex_count() const { return static_cast<int>(vertices.size()); }
    long long edge_count() const { return static_cast<long long>(edges.size()); }
    bool valid_vertex(VertexId id) const {
        return id >= 0 && id < vertex_count();
    }

    const std::vector<VertexId>& neighbors(VertexId x) const;
    std::vector<Word> neighborhood_system(VertexId x) const;
    std::int32_t find_cell(const Word& w) const;  // -1 when absent

  private:
    friend FractalGraph build_graph(const IfsSystem&, int, struct BuildOptions);
    std::unordered_map<std::string, std::int32_t> cell_index_;
};

struct BuildOptions {
    std::size_t max_points = 4'000'000;   // leaf corner budget: N_0 * N^m
    double dedup_tolerance_scale = 1e-9;  // of diam(V_0)
};

FractalGraph build_graph(const IfsSystem& ifs, int level, BuildOptions options = {});

struct GraphCounts {
    long long vertices = 0;
    long long edges = 0;
};

GraphCounts predicted_counts(const IfsSystem& ifs, int level);

std::vector<VertexId> junction_points(const FractalGraph& g);

VertexId snap_to_vertex(const FractalGraph& g, const Vec& p);

std::string graph_to_json(const FractalGraph& g);

}  // namespace fractopt
