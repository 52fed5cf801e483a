#include <CLI11.hpp>
#include <exception>
#include <iostream>
#include <string>

#include "fractopt/errors.hpp"
#include "fractopt/run.hpp"

int main(int argc, char** argv) {
    CLI::App app{
        "fractopt: discrete gradient optimization, dynamic programming, and harmonic\n"
        "calculus on graph approximations of self-similar fractals.\n"
        "SVG output colors vertices blue (low) to red (high)."};

    fractopt::RunConfig config;
    std::string mode;
    bool seed_free = false;

    auto* preset = app.add_option("--preset", config.preset,
                                  "built-in system: gasket, tetrahedron, or minkowski");
    auto* ifs_file = app.add_option("--ifs", config.ifs_file, "path to an IFS JSON file");
    preset->excludes(ifs_file);

    auto* level = app.add_option("--level", config.level, "approximation level m (>= 0)");
    auto* tolerance =
        app.add_option("--tolerance", config.tolerance,
                       "edge-length tolerance; picks the smallest adequate level");
    level->excludes(tolerance);

    app.add_option("--function", config.function_text,
                   "objective expression in x, y, z (e.g. \"x^2+y^2\")");
    app.add_option("--start", config.start_text,
                   "start point as comma-separated constant expressions");
    app.add_option("--mode", mode, "max|min|scan|dp|harmonic|laplacian")
        ->required()
        ->check(CLI::IsMember({"max", "min", "scan", "dp", "harmonic", "laplacian"}));
    app.add_option("--csv", config.csv_path, "write the mode's CSV output here");
    app.add_option("--json", config.json_path, "write the mode's JSON output here");
    app.add_option("--svg", config.svg_path, "write an SVG rendering here");
    app.add_flag("--seed-free", seed_free, "reserved: the tool never uses random numbers")
        ->disable_flag_override();

    CLI11_PARSE(app, argc, argv);

    config.has_level = level->count() > 0;
    config.has_tolerance = tolerance->count() > 0;
    (void)seed_free;

    try {
        config.mode = fractopt::parse_run_mode(mode);
        fractopt::run(config, std::cout);
    } catch (const fractopt::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
