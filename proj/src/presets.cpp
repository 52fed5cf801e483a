#include "fractopt/ifs.hpp"

#include <map>

#include "fractopt/errors.hpp"

namespace fractopt {

namespace {

// Sierpinski gasket: three ratio-1/2 maps toward the corners of the unit
// equilateral triangle, f_i(x) = (x + P_i) / 2.
const std::string kGasket = R"({
  "dimension": 2,
  "maps": [
    {"matrix": [[0.5, 0.0], [0.0, 0.5]], "translation": [0.0, 0.0]},
    {"matrix": [[0.5, 0.0], [0.0, 0.5]], "translation": [0.5, 0.0]},
    {"matrix": [[0.5, 0.0], [0.0, 0.5]], "translation": [0.25, 0.4330127018922193]}
  ],
  "boundary": [0, 1, 2],
  "closed": true
})";

// Sierpinski tetrahedron: four ratio-1/2 maps toward the corners of the
// regular unit tetrahedron.
const std::string kTetrahedron = R"({
  "dimension": 3,
  "maps": [
    {"matrix": [[0.5, 0.0, 0.0], [0.0, 0.5, 0.0], [0.0, 0.0, 0.5]], "translation": [0.0, 0.0, 0.0]},
    {"matrix": [[0.5, 0.0, 0.0], [0.0, 0.5, 0.0], [0.0, 0.0, 0.5]], "translation": [0.5, 0.0, 0.0]},
    {"matrix": [[0.5, 0.0, 0.0], [0.0, 0.5, 0.0], [0.0, 0.0, 0.5]], "translation": [0.25, 0.4330127018922193, 0.0]},
    {"matrix": [[0.5, 0.0, 0.0], [0.0, 0.5, 0.0], [0.0, 0.0, 0.5]], "translation": [0.25, 0.14433756729740646, 0.40824829046386302]}
  ],
  "boundary": [0, 1, 2, 3],
  "closed": true
})";

// Minkowski curve: eight ratio-1/4 maps tracing the square bump from (0,0)
// to (1,0), up first.  Each map sends the segment (0,0)-(1,0) onto one of
// the eight quarter-length segments, rotated as needed.
const std::string kMinkowski = R"({
  "dimension": 2,
  "maps": [
    {"matrix": [[0.25, 0.0], [0.0, 0.25]], "translation": [0.0, 0.0]},
    {"matrix": [[0.0, -0.25], [0.25, 0.0]], "translation": [0.25, 0.0]},
    {"matrix": [[0.25, 0.0], [0.0, 0.25]], "translation": [0.25, 0.25]},
    {"matrix": [[0.0, 0.25], [-0.25, 0.0]], "translation": [0.5, 0.25]},
    {"matrix": [[0.0, 0.25], [-0.25, 0.0]], "translation": [0.5, 0.0]},
    {"matrix": [[0.25, 0.0], [0.0, 0.25]], "translation": [0.5, -0.25]},
    {"matrix": [[0.0, -0.25], [0.25, 0.0]], "translation": [0.75, -0.25]},
    {"matrix": [[0.25, 0.0], [0.0, 0.25]], "translation": [0.75, 0.0]}
  ],
  "boundary": [0, 7],
  "closed": false
})";

const std::map<std::string, const std::string*>& preset_table() {
    static const std::map<std::string, const std::string*> table = {
        {"gasket", &kGasket},
        {"tetrahedron", &kTetrahedron},
        {"minkowski", &kMinkowski},
    };
    return table;
}

}  // namespace

std::vector<std::string> preset_names() {
    std::vector<std::string> names;
    for (const auto& [name, text] : preset_table()) names.push_back(name);
    return names;
}

const std::string& preset_json(const std::string& name) {
    const auto& table = preset_table();
    auto it = table.find(name);
    if (it == table.end()) {
        std::string known;
        for (const auto& [known_name, text] : table) {
            if (!known.empty()) known += ", ";
            known += known_name;
        }
        throw Error("ifs_core", "unknown preset '" + name + "' (available: " + known + ")");
    }
    return *it->second;
}

IfsSystem load_preset(const std::string& name) {
    IfsSystem system = parse_ifs_json(preset_json(name));
    return system;
}

}  // namespace fractopt
