#include "fractopt/graph.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <json.hpp>

#include "fractopt/errors.hpp"

namespace fractopt {

namespace {

[[noreturn]] void fail(const std::string& message) {
    throw Error("graph_builder", message);
}

std::string word_key(const Word& w) {
    return std::string(w.letters.begin(), w.letters.end());
}

struct CellKey {
    std::int64_t x, y, z;
    bool operator==(const CellKey&) const = default;
};

struct CellKeyHash {
    std::size_t operator()(const CellKey& k) const {
        std::uint64_t h = 1469598103934665603ull;
        for (std::uint64_t v : {static_cast<std::uint64_t>(k.x),
                                static_cast<std::uint64_t>(k.y),
                                static_cast<std::uint64_t>(k.z)}) {
            h ^= v;
            h *= 1099511628211ull;
        }
        return static_cast<std::size_t>(h);
    }
};

// Spatial hash for vertex deduplication: coordinates quantized to the
// tolerance, with a 3^3 neighbor probe so near-boundary points still merge.
class VertexPool {
  public:
    explicit VertexPool(double tolerance) : tolerance_(tolerance) {}

    VertexId intern(const Vec& p, std::vector<GraphVertex>& vertices) {
        const CellKey base = quantize(p);
        for (std::int64_t dx = -1; dx <= 1; ++dx)
            for (std::int64_t dy = -1; dy <= 1; ++dy)
                for (std::int64_t dz = -1; dz <= 1; ++dz) {
                    auto it = buckets_.find({base.x + dx, base.y + dy, base.z + dz});
                    if (it == buckets_.end()) continue;
                    for (VertexId id : it->second)
                        if (distance(vertices[id].pos, p) <= tolerance_) return id;
                }
        const VertexId id = static_cast<VertexId>(vertices.size());
        vertices.push_back(GraphVertex{p, {}});
        buckets_[base].push_back(id);
        return id;
    }

  private:
    CellKey quantize(const Vec& p) const {
        auto q = [this](double c) {
            return static_cast<std::int64_t>(std::floor(c / tolerance_));
        };
        return {q(p[0]), q(p[1]), q(p[2])};
    }

    double tolerance_;
    std::unordered_map<CellKey, std::vector<VertexId>, CellKeyHash> buckets_;
};

}  // namespace

const std::vector<VertexId>& FractalGraph::neighbors(VertexId x) const {
    if (!valid_vertex(x)) fail("vertex id out of range");
    return adjacency[x];
}

std::vector<Word> FractalGraph::neighborhood_system(VertexId x) const {
    if (!valid_vertex(x)) fail("vertex id out of range");
    std::vector<Word> words;
    for (const Address& a : vertices[x].addresses)
        if (words.empty() || !(words.back() == a.word)) words.push_back(a.word);
    return words;
}

std::int32_t FractalGraph::find_cell(const Word& w) const {
    auto it = cell_index_.find(word_key(w));
    return it == cell_index_.end() ? -1 : it->second;
}

FractalGraph build_graph(const IfsSystem& ifs, int level, BuildOptions options) {
    if (level < 0) fail("level must be >= 0");
    const int N = ifs.map_count();
    const int N0 = ifs.boundary_count();

    std::uint64_t leaf_points = static_cast<std::uint64_t>(N0);
    for (int i = 0; i < level; ++i) {
        leaf_points *= static_cast<std::uint64_t>(N);
        if (leaf_points > options.max_points)
            fail("graph budget exceeded: level " + std::to_string(level) +
                 " needs more than " + std::to_string(options.max_points) + " points");
    }

    FractalGraph g;
    g.system = ifs;
    g.level = level;

    const double tol = options.dedup_tolerance_scale * ifs.v0_diameter();
    VertexPool pool(tol);

    std::vector<Vec> corners_pos(N0);
    for (int j = 0; j < N0; ++j) corners_pos[j] = ifs.boundary_point(j);

    // Depth-first enumeration of all length-m words. Corner positions are
    // evaluated by applying the maps innermost-first to the fixed point;
    // unlike a composed affine transform this keeps dyadic coordinates and
    // map fixed points bitwise exact at every level.
    Word word;
    word.letters.reserve(level);
    std::vector<VertexId> ids(N0);

    auto emit_cell = [&]() {
        const auto cell_id = static_cast<std::int32_t>(g.cells.size());
        for (int j = 0; j < N0; ++j) {
            Vec p = corners_pos[j];
            for (auto it = word.letters.rbegin(); it != word.letters.rend(); ++it)
                p = ifs.maps[*it](p);
            ids[j] = pool.intern(p, g.vertices);
            g.vertices[ids[j]].addresses.push_back(Address{word, j});
        }
        g.cells.push_back(GraphCell{word, ids});
        g.cell_index_.emplace(word_key(word), cell_id);
        if (ifs.closed_boundary) {
            for (int a = 0; a < N0; ++a)
                for (int b = 0; b < N0; ++b)
                    if (a != b) g.edges.push_back(OrientedEdge{ids[a], ids[b], cell_id});
        } else {
            for (int j = 0; j + 1 < N0; ++j)
                g.edges.push_back(OrientedEdge{ids[j], ids[j + 1], cell_id});
        }
    };

    auto descend = [&](auto&& self, int depth) -> void {
        if (depth == level) {
            emit_cell();
            return;
        }
        for (int i = 0; i < N; ++i) {
            word.letters.push_back(static_cast<std::uint8_t>(i));
            self(self, depth + 1);
            word.letters.pop_back();
        }
    };
    descend(descend, 0);

    for (GraphVertex& v : g.vertices) {
        std::sort(v.addresses.begin(), v.addresses.end(),
                  [](const Address& a, const Address& b) {
                      if (a.word.letters != b.word.letters)
                          return a.word.letters < b.word.letters;
                      return a.corner < b.corner;
                  });
    }

    g.adjacency.assign(g.vertices.size(), {});
    for (const OrientedEdge& e : g.edges) {
        g.adjacency[e.from].push_back(e.to);
        g.adjacency[e.to].push_back(e.from);
    }
    for (auto& list : g.adjacency) {
        std::sort(list.begin(), list.end());
        list.erase(std::unique(list.begin(), list.end()), list.end());
    }

    g.boundary_ids.resize(N0);
    for (int j = 0; j < N0; ++j) {
        Word corner_word;
        corner_word.letters.assign(level, static_cast<std::uint8_t>(ifs.boundary[j]));
        const std::int32_t cell = g.find_cell(corner_word);
        if (cell < 0) fail("internal error: corner cell missing");
        g.boundary_ids[j] = g.cells[cell].corners[j];
    }
    return g;
}

GraphCounts predicted_counts(const IfsSystem& ifs, int level) {
    const FractalGraph g0 = build_graph(ifs, 0);
    const long long a0 = g0.edge_count();
    long long junctions = 0;
    if (level >= 1) {
        const FractalGraph g1 = build_graph(ifs, 1);
        junctions = static_cast<long long>(junction_points(g1).size());
    }
    const long long N = ifs.map_count();
    GraphCounts counts;
    counts.vertices = ifs.boundary_count();
    counts.edges = a0;
    for (int i = 0; i < level; ++i) {
        counts.vertices = N * counts.vertices - junctions;
        counts.edges *= N;
    }
    return counts;
}

std::vector<VertexId> junction_points(const FractalGraph& g) {
    std::vector<VertexId> out;
    for (VertexId id = 0; id < g.vertex_count(); ++id)
        if (g.vertices[id].addresses.size() >= 2) out.push_back(id);
    return out;
}

VertexId snap_to_vertex(const FractalGraph& g, const Vec& p) {
    if (g.vertices.empty()) fail("empty graph");
    VertexId best = 0;
    double best_dist = distance(g.vertices[0].pos, p);
    for (VertexId id = 1; id < g.vertex_count(); ++id) {
        const double d = distance(g.vertices[id].pos, p);
        if (d < best_dist) {
            best = id;
            best_dist = d;
        }
    }
    return best;
}

std::string graph_to_json(const FractalGraph& g) {
    nlohmann::ordered_json doc;
    doc["level"] = g.level;
    doc["vertices"] = nlohmann::ordered_json::array();
    const int d = g.system.dimension;
    for (VertexId id = 0; id < g.vertex_count(); ++id) {
        const GraphVertex& v = g.vertices[id];
        nlohmann::ordered_json entry;
        entry["id"] = id;
        entry["xy"] = std::vector<double>(v.pos.begin(), v.pos.begin() + d);
        auto addresses = nlohmann::ordered_json::array();
        for (const Address& a : v.addresses) {
            nlohmann::ordered_json addr;
            addr["word"] = a.word.letters;
            addr["corner"] = a.corner;
            addresses.push_back(std::move(addr));
        }
        entry["addresses"] = std::move(addresses);
        doc["vertices"].push_back(std::move(entry));
    }
    doc["edges"] = nlohmann::ordered_json::array();
    for (const OrientedEdge& e : g.edges)
        doc["edges"].push_back(std::vector<VertexId>{e.from, e.to});
    return doc.dump(2);
}

}  // namespace fractopt
