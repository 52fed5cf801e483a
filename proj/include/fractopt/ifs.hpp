#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "fractopt/geometry.hpp"

namespace fractopt {

// A contractive similarity x -> A x + t with A = ratio * O, O orthogonal.
struct SimilarityMap {
    Mat linear;
    Vec translation{};
    double ratio = 0.0;  // contraction ratio, in (0,1)
    Vec fixed_point{};   // cached solution of f(p) = p

    Vec operator()(const Vec& p) const { return mat_apply(linear, p) + translation; }
};

// Checks the similarity invariants (A^T A = ratio^2 I to 1e-10, ratio in
// (0,1)) and caches ratio and fixed point. Throws Error("ifs_core", ...).
SimilarityMap make_similarity(const Mat& linear, const Vec& translation, int dimension);

// A finite composition f_W = f_{w0} o f_{w1} o ... o f_{w(m-1)}.
// Letters are 0-based map indices, most significant first.
struct Word {
    std::vector<std::uint8_t> letters;

    Word() = default;
    explicit Word(std::vector<std::uint8_t> ls) : letters(std::move(ls)) {}

    std::size_t size() const { return letters.size(); }
    bool empty() const { return letters.empty(); }
    bool operator==(const Word&) const = default;
    auto operator<=>(const Word&) const = default;
};

std::string to_string(const Word& w);

// Names a vertex as f_W(P), where P is the corner-th boundary point.
struct Address {
    Word word;
    int corner = 0;  // position within the boundary list, 0..N_0-1

    bool operator==(const Address&) const = default;
};

struct IfsSystem {
    int dimension = 2;
    std::vector<SimilarityMap> maps;
    std::vector<int> boundary;  // map indices whose fixed points form V_0
    bool closed_boundary = true;

    int map_count() const { return static_cast<int>(maps.size()); }
    int boundary_count() const { return static_cast<int>(boundary.size()); }
    Vec boundary_point(int corner) const;
    double v0_diameter() const;
    double max_ratio() const;
};

// Validates map count, boundary indices, and per-map similarity invariants.
void validate_ifs(const IfsSystem& ifs);

// f_{w0}(f_{w1}(...f_{w(m-1)}(p)...)); the empty word is the identity.
Vec apply_word(const IfsSystem& ifs, const Word& w, const Vec& p);

// Unique s > 0 with sum_i ratio_i^s = 1, to |residual| < 1e-12.
double moran_dimension(const IfsSystem& ifs);

// Self-similar measure weights mu_i = ratio_i^moran_dimension.
std::vector<double> measure_weights(const IfsSystem& ifs);

// Measure of the cell f_W(F): product of the letters' weights; 1 for the
// empty word.
double cell_measure(const IfsSystem& ifs, const Word& w);

// Next / previous word of the same length in lexicographic order over the
// map alphabet. Throws at the last (resp. first) word of that length.
// Meaningful for curve systems, where successive words index successive
// segments.
Word word_successor(const IfsSystem& ifs, const Word& w);
Word word_predecessor(const IfsSystem& ifs, const Word& w);

// Parses the JSON description:
//   {"dimension": 2, "maps": [{"matrix": [[...]], "translation": [...]}, ...],
//    "boundary": [0,1,2], "closed": true}
// "boundary" defaults to all map indices, "closed" to true.
IfsSystem parse_ifs_json(const std::string& json_text);

// Embedded presets: "gasket", "tetrahedron", "minkowski".
std::vector<std::string> preset_names();
const std::string& preset_json(const std::string& name);
IfsSystem load_preset(const std::string& name);

}  // namespace fractopt
