#pragma once

#include <optional>
#include <string>

#include "core/sim.hpp"

namespace cdma {

enum class sweep_direction { uplink, downlink, both };

// Code settings as configured. Generators may be absent: a published
// spectrum alone supports bound and pdf work, while the link simulation
// needs the polynomials.
struct code_settings {
    unsigned rate_inverse = 2;
    unsigned constraint_length = 3;
    std::vector<std::uint32_t> generators;           // octal in the file
    std::optional<distance_spectrum> spectrum;       // explicit d:c pairs
    std::optional<int> spectrum_max_distance;        // search depth when computed
    std::optional<int> free_distance;                // declared d_f, cross-checked
};

// One scenario file, faithfully. Resolution helpers below derive working
// objects from it.
struct scenario_config {
    // [scenario]
    std::uint32_t users = 1;
    double ebn0_db = 0.0;                 // per information bit; per coded bit without a code
    std::optional<double> coded_ebn0_db;  // pins the coded operating point exactly
    sweep_direction directions = sweep_direction::uplink;
    std::optional<unsigned> pdf_diversity;  // combining order for pdf output
    // [code]
    std::optional<code_settings> code;
    // [experiment]
    std::uint32_t trials = 100000;
    std::optional<std::uint64_t> seed;  // file seed; flag and environment outrank it
    std::size_t grid_points = 200;
    double grid_max = 0.0;
    channel_model channel = channel_model::rayleigh_iid;
    std::uint32_t block_bits = 1000;
    unsigned interleaver_depth = 1;
    unsigned threads = 1;
    std::uint32_t fading_block_symbols = 0;
    std::uint32_t target_errors = 500;
    // [output]
    std::string pdf_csv;
    std::string ber_csv;
};

// Strict INI parsing: unknown sections/keys, duplicate keys, and malformed
// values all raise parse_error carrying the 1-based line number. Comments
// start at '#' or ';'.
scenario_config parse_scenario_text(const std::string& text);
scenario_config parse_scenario_file(const std::string& path);  // io_error when unreadable

// Per-coded-bit operating point for an information-bit Eb/N0. An explicit
// coded_ebn0_db wins when the requested point equals the file's ebn0_db;
// otherwise the point shifts by 10 log10(rate_inverse) under a code.
double coded_ebn0_db_at(const scenario_config& cfg, double info_ebn0_db);

// Link scenario at an operating point, with xi = 1 and
// N0 = 10^(-coded_ebn0_db/10). NaN selects the file's own point.
link_scenario scenario_at(const scenario_config& cfg, double info_ebn0_db, direction dir);

// Distance spectrum for bound work: explicit pairs win; otherwise computed
// from the generators up to spectrum_max_distance; an uncoded configuration
// acts as the trivial single-branch spectrum {d=1: 1}. A declared
// free_distance that disagrees raises std::invalid_argument.
distance_spectrum resolve_spectrum(const scenario_config& cfg);

// Combining order for pdf output: the explicit pdf_diversity key, else the
// code's free distance, else 1.
unsigned pdf_diversity_of(const scenario_config& cfg);

// Simulation bundle for one direction at the file's operating point.
// The code slot is filled only when generators are present.
experiment_config experiment_at(const scenario_config& cfg, direction dir);

}  // namespace cdma
