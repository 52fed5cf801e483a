#pragma once

#include <iosfwd>
#include <string>

#include "fractopt/ifs.hpp"

namespace fractopt {

enum class RunMode { max, min, scan, dp, harmonic, laplacian };

RunMode parse_run_mode(const std::string& text);

struct RunConfig {
    std::string preset;       // exactly one of preset / ifs_file
    std::string ifs_file;
    bool has_level = false;   // exactly one of level / tolerance
    int level = 0;
    bool has_tolerance = false;
    double tolerance = 0.0;
    std::string function_text;
    std::string start_text;
    RunMode mode = RunMode::max;
    std::string csv_path;
    std::string json_path;
    std::string svg_path;
};

// Orchestrates one run: load system, build graph, evaluate, dispatch the
// mode, write requested files. Prints summary lines to `out`; throws Error
// on any failure.
void run(const RunConfig& config, std::ostream& out);

void write_file_atomic(const std::string& path, const std::string& content);

}  // namespace fractopt
