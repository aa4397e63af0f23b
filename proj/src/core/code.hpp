#pragma once

#include <cstdint>
#include <vector>

#include "core/pdf.hpp"

namespace cdma {

// Rate-1/n feedforward convolutional code. Generator masks address the
// register as bit i = u[n-i] (bit 0 = current input); outputs are emitted in
// listed generator order each step.
struct code_spec {
    unsigned rate_inverse = 2;              // n
    unsigned constraint_length = 3;         // memory stages + 1, <= 16
    std::vector<std::uint32_t> generators;  // n masks, each nonzero, < 2^constraint_length
};

void validate(const code_spec& c);

// Tabulated state machine: 2^(constraint_length-1) states, two transitions
// out of every state.
struct trellis {
    explicit trellis(const code_spec& c);

    unsigned num_states = 0;
    unsigned outputs_per_step = 0;
    // Indexed [state * 2 + input].
    std::vector<std::uint16_t> next_state;
    std::vector<std::uint32_t> output_bits;  // packed, bit j = generator j's output
    std::vector<std::uint8_t> output_weight;
};

// Zero-terminated encoding: constraint_length - 1 flush steps drive the
// register back to state 0. Output length rate_inverse * (len + K - 1).
// The trellis overloads skip rebuilding the tables on every block.
std::vector<std::uint8_t> encode(const trellis& t, const std::vector<std::uint8_t>& bits);
std::vector<std::uint8_t> encode(const code_spec& c, const std::vector<std::uint8_t>& bits);

// Maximum-likelihood sequence decoding over soft metrics (positive metric
// means bit 0, magnitude is reliability; path metric = correlation sum).
// Exact metric ties resolve toward the lexicographically smaller information
// sequence. Metric count must be a multiple of rate_inverse and cover at
// least the flush steps. Throws std::invalid_argument on length violations.
std::vector<std::uint8_t> viterbi_decode(const trellis& t, const std::vector<double>& metrics);
std::vector<std::uint8_t> viterbi_decode(const code_spec& c, const std::vector<double>& metrics);

// Exact first-event distance spectrum up to max_distance: breadth-first
// search over detours from the zero state accumulating information-bit
// weight per codeword distance. Throws search_budget_error when a path
// exceeds the length any non-catastrophic detour could need (zero-weight
// loop), and std::invalid_argument if max_distance lies below the free
// distance.
distance_spectrum compute_distance_spectrum(const code_spec& c, int max_distance);

}  // namespace cdma
