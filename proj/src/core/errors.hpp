#pragma once

#include <stdexcept>
#include <string>

namespace cdma {

// Convolution inputs sampled on incompatible grids.
struct step_mismatch_error : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Pre-normalization integral of a convolution strayed too far from 1,
// signalling an inadequate grid.
struct drift_error : std::runtime_error {
    drift_error(const std::string& msg, double measured)
        : std::runtime_error(msg), drift(measured) {}
    double drift;
};

// Distance-spectrum search exceeded its path-length budget (catastrophic
// encoder or hopeless truncation depth).
struct search_budget_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Scenario-file syntax or schema violation; line is 1-based, 0 if unknown.
struct parse_error : std::runtime_error {
    parse_error(const std::string& msg, int line_no)
        : std::runtime_error(line_no > 0 ? "line " + std::to_string(line_no) + ": " + msg
                                         : msg),
          line(line_no) {}
    int line;
};

// A requested quantity is absent from the configuration (spectrum weights,
// generators, per-distance error probabilities, ...).
struct missing_data_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Monte-Carlo run would test fewer bits than the contract allows.
struct insufficient_bits_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// File could not be opened, read, or written.
struct io_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace cdma
