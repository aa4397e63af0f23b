#include "core/scenario.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>
#include <type_traits>

#include "core/errors.hpp"

namespace cdma {

namespace {

std::string trim(const std::string& s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string::npos) return "";
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

// Numeric parsing that insists on consuming the whole token.
template <typename T>
T parse_number(const std::string& value, int line, const char* what, int base = 10) {
    T out{};
    const char* begin = value.data();
    const char* end = begin + value.size();
    std::from_chars_result r{};
    if constexpr (std::is_floating_point_v<T>)
        r = std::from_chars(begin, end, out);
    else
        r = std::from_chars(begin, end, out, base);
    if (r.ec != std::errc{} || r.ptr != end)
        throw parse_error(std::string("expected ") + what + ", got '" + value + "'", line);
    return out;
}

std::vector<std::string> split_tokens(const std::string& value) {
    std::vector<std::string> out;
    std::istringstream in(value);
    std::string tok;
    while (in >> tok) out.push_back(tok);
    return out;
}

}  // namespace

scenario_config parse_scenario_text(const std::string& text) {
    scenario_config cfg;
    std::set<std::string> seen_keys;
    std::set<std::string> seen_sections;
    std::string section;

    std::istringstream in(text);
    std::string raw;
    int line = 0;
    while (std::getline(in, raw)) {
        ++line;
        const auto comment = raw.find_first_of("#;");
        std::string body = trim(comment == std::string::npos ? raw : raw.substr(0, comment));
        if (body.empty()) continue;

        if (body.front() == '[') {
            if (body.back() != ']')
                throw parse_error("unterminated section header", line);
            section = trim(body.substr(1, body.size() - 2));
            if (section != "scenario" && section != "code" && section != "experiment" &&
                section != "output")
                throw parse_error("unknown section [" + section + "]", line);
            if (!seen_sections.insert(section).second)
                throw parse_error("duplicate section [" + section + "]", line);
            if (section == "code") cfg.code.emplace();
            continue;
        }

        const auto eq = body.find('=');
        if (eq == std::string::npos)
            throw parse_error("expected 'key = value'", line);
        const std::string key = trim(body.substr(0, eq));
        const std::string value = trim(body.substr(eq + 1));
        if (key.empty()) throw parse_error("empty key", line);
        if (value.empty()) throw parse_error("empty value for '" + key + "'", line);
        if (section.empty())
            throw parse_error("key '" + key + "' appears before any section", line);
        const std::string full = section + "." + key;
        if (!seen_keys.insert(full).second)
            throw parse_error("duplicate key '" + full + "'", line);

        if (full == "scenario.users") {
            cfg.users = parse_number<std::uint32_t>(value, line, "a positive integer");
            if (cfg.users == 0) throw parse_error("users must be >= 1", line);
        } else if (full == "scenario.ebn0_db") {
            cfg.ebn0_db = parse_number<double>(value, line, "a number");
        } else if (full == "scenario.coded_ebn0_db") {
            cfg.coded_ebn0_db = parse_number<double>(value, line, "a number");
        } else if (full == "scenario.direction") {
            if (value == "uplink")
                cfg.directions = sweep_direction::uplink;
            else if (value == "downlink")
                cfg.directions = sweep_direction::downlink;
            else if (value == "both")
                cfg.directions = sweep_direction::both;
            else
                throw parse_error("direction must be uplink, downlink, or both", line);
        } else if (full == "scenario.pdf_diversity") {
            cfg.pdf_diversity = parse_number<unsigned>(value, line, "a positive integer");
            if (*cfg.pdf_diversity == 0) throw parse_error("pdf_diversity must be >= 1", line);
        } else if (full == "code.rate_inverse") {
            cfg.code->rate_inverse = parse_number<unsigned>(value, line, "a positive integer");
            if (cfg.code->rate_inverse == 0) throw parse_error("rate_inverse must be >= 1", line);
        } else if (full == "code.constraint_length") {
            cfg.code->constraint_length = parse_number<unsigned>(value, line, "a positive integer");
            if (cfg.code->constraint_length == 0 || cfg.code->constraint_length > 16)
                throw parse_error("constraint_length must be in [1, 16]", line);
        } else if (full == "code.generators") {
            for (const auto& tok : split_tokens(value)) {
                const auto g = parse_number<std::uint32_t>(tok, line, "an octal generator", 8);
                if (g == 0) throw parse_error("generator must be nonzero", line);
                cfg.code->generators.push_back(g);
            }
            if (cfg.code->generators.empty())
                throw parse_error("generators list is empty", line);
        } else if (full == "code.spectrum") {
            distance_spectrum sp;
            for (const auto& tok : split_tokens(value)) {
                const auto colon = tok.find(':');
                if (colon == std::string::npos)
                    throw parse_error("spectrum entries look like distance:weight", line);
                const int d = parse_number<int>(tok.substr(0, colon), line, "an integer distance");
                const double c =
                    parse_number<double>(tok.substr(colon + 1), line, "a positive weight");
                if (d < 1 || c <= 0.0)
                    throw parse_error("spectrum entries need distance >= 1 and weight > 0", line);
                if (!sp.weights.emplace(d, c).second)
                    throw parse_error("duplicate spectrum distance", line);
            }
            if (sp.weights.empty()) throw parse_error("spectrum list is empty", line);
            sp.free_distance = sp.weights.begin()->first;
            sp.truncation_distance = sp.weights.rbegin()->first;
            cfg.code->spectrum = std::move(sp);
        } else if (full == "code.spectrum_max_distance") {
            const int d = parse_number<int>(value, line, "a positive integer");
            if (d < 1) throw parse_error("spectrum_max_distance must be >= 1", line);
            cfg.code->spectrum_max_distance = d;
        } else if (full == "code.free_distance") {
            const int d = parse_number<int>(value, line, "a positive integer");
            if (d < 1) throw parse_error("free_distance must be >= 1", line);
            cfg.code->free_distance = d;
        } else if (full == "experiment.trials") {
            cfg.trials = parse_number<std::uint32_t>(value, line, "a positive integer");
            if (cfg.trials == 0) throw parse_error("trials must be >= 1", line);
        } else if (full == "experiment.seed") {
            cfg.seed = parse_number<std::uint64_t>(value, line, "an unsigned integer");
        } else if (full == "experiment.grid_points") {
            cfg.grid_points = parse_number<std::size_t>(value, line, "a positive integer");
            if (cfg.grid_points == 0) throw parse_error("grid_points must be >= 1", line);
        } else if (full == "experiment.grid_max") {
            cfg.grid_max = parse_number<double>(value, line, "a positive number");
            if (!(cfg.grid_max > 0.0)) throw parse_error("grid_max must be > 0", line);
        } else if (full == "experiment.channel") {
            if (value == "awgn")
                cfg.channel = channel_model::awgn;
            else if (value == "rayleigh_iid")
                cfg.channel = channel_model::rayleigh_iid;
            else if (value == "rayleigh_block")
                cfg.channel = channel_model::rayleigh_block;
            else
                throw parse_error("channel must be awgn, rayleigh_iid, or rayleigh_block", line);
        } else if (full == "experiment.block_bits") {
            cfg.block_bits = parse_number<std::uint32_t>(value, line, "a positive integer");
            if (cfg.block_bits == 0) throw parse_error("block_bits must be >= 1", line);
        } else if (full == "experiment.interleaver_depth") {
            cfg.interleaver_depth = parse_number<unsigned>(value, line, "a positive integer");
            if (cfg.interleaver_depth == 0)
                throw parse_error("interleaver_depth must be >= 1", line);
        } else if (full == "experiment.threads") {
            cfg.threads = parse_number<unsigned>(value, line, "a positive integer");
            if (cfg.threads == 0) throw parse_error("threads must be >= 1", line);
        } else if (full == "experiment.fading_block_symbols") {
            cfg.fading_block_symbols = parse_number<std::uint32_t>(value, line, "an integer");
        } else if (full == "experiment.target_errors") {
            cfg.target_errors = parse_number<std::uint32_t>(value, line, "an integer");
        } else if (full == "output.pdf_csv") {
            cfg.pdf_csv = value;
        } else if (full == "output.ber_csv") {
            cfg.ber_csv = value;
        } else {
            throw parse_error("unknown key '" + full + "'", line);
        }
    }

    if (cfg.code) {
        const auto limit = std::uint32_t{1} << cfg.code->constraint_length;
        for (std::uint32_t g : cfg.code->generators)
            if (g >= limit)
                throw parse_error("generator does not fit in constraint_length bits", 0);
        if (!cfg.code->generators.empty() &&
            cfg.code->generators.size() != cfg.code->rate_inverse)
            throw parse_error("generator count must equal rate_inverse", 0);
    }
    return cfg;
}

scenario_config parse_scenario_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw io_error("cannot open scenario file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_scenario_text(buf.str());
}

double coded_ebn0_db_at(const scenario_config& cfg, double info_ebn0_db) {
    if (cfg.coded_ebn0_db && info_ebn0_db == cfg.ebn0_db) return *cfg.coded_ebn0_db;
    const double shift =
        cfg.code ? 10.0 * std::log10(static_cast<double>(cfg.code->rate_inverse)) : 0.0;
    return info_ebn0_db - shift;
}

link_scenario scenario_at(const scenario_config& cfg, double info_ebn0_db, direction dir) {
    if (std::isnan(info_ebn0_db)) info_ebn0_db = cfg.ebn0_db;
    const double coded_db = coded_ebn0_db_at(cfg, info_ebn0_db);
    link_scenario s;
    s.num_users = cfg.users;
    s.energy_per_coded_bit = 1.0;
    s.noise_density = std::pow(10.0, -coded_db / 10.0);
    s.dir = dir;
    return s;
}

distance_spectrum resolve_spectrum(const scenario_config& cfg) {
    if (!cfg.code) {
        // Uncoded: a single branch at combining order 1.
        distance_spectrum sp;
        sp.free_distance = 1;
        sp.weights = {{1, 1.0}};
        sp.truncation_distance = 1;
        return sp;
    }
    const code_settings& cs = *cfg.code;
    if (cs.spectrum) {
        distance_spectrum sp = *cs.spectrum;
        validate(sp);
        if (cs.free_distance && *cs.free_distance != sp.free_distance)
            throw std::invalid_argument("declared free_distance disagrees with the spectrum");
        return sp;
    }
    if (!cs.generators.empty() && cs.spectrum_max_distance) {
        const code_spec c{cs.rate_inverse, cs.constraint_length, cs.generators};
        distance_spectrum sp = compute_distance_spectrum(c, *cs.spectrum_max_distance);
        if (cs.free_distance && *cs.free_distance != sp.free_distance)
            throw std::invalid_argument(
                "declared free_distance disagrees with the computed spectrum");
        return sp;
    }
    throw missing_data_error(
        "no distance spectrum: provide spectrum pairs, or generators plus "
        "spectrum_max_distance");
}

unsigned pdf_diversity_of(const scenario_config& cfg) {
    if (cfg.pdf_diversity) return *cfg.pdf_diversity;
    if (!cfg.code) return 1;
    if (cfg.code->free_distance) return static_cast<unsigned>(*cfg.code->free_distance);
    return static_cast<unsigned>(resolve_spectrum(cfg).free_distance);
}

experiment_config experiment_at(const scenario_config& cfg, direction dir) {
    experiment_config e;
    e.scenario = scenario_at(cfg, std::numeric_limits<double>::quiet_NaN(), dir);
    if (cfg.code && !cfg.code->generators.empty())
        e.code = code_spec{cfg.code->rate_inverse, cfg.code->constraint_length,
                           cfg.code->generators};
    e.num_trials = cfg.trials;
    e.seed = cfg.seed.value_or(12345);
    e.grid_points = cfg.grid_points;
    e.grid_max = cfg.grid_max;
    e.channel = cfg.channel;
    e.block_bits = cfg.block_bits;
    e.interleaver_depth = cfg.interleaver_depth;
    e.threads = cfg.threads;
    e.fading_block_symbols = cfg.fading_block_symbols;
    e.target_errors = cfg.target_errors;
    return e;
}

}  // namespace cdma
