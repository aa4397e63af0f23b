#pragma once

#include <complex>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "core/pdf.hpp"
#include "core/rng.hpp"

namespace cdma {

enum class channel_model { awgn, rayleigh_iid, rayleigh_block };

// Block interleaver: bits fill a matrix with `depth` columns row by row and
// leave column by column, so adjacent input bits end up `rows` apart.
// `depth` must divide the input length. The metric-domain inverse mirrors it.
template <typename T>
std::vector<T> interleave(const std::vector<T>& in, unsigned depth) {
    if (depth == 0 || in.size() % depth != 0)
        throw std::invalid_argument("interleave: depth must divide the input length");
    if (depth == 1) return in;
    const std::size_t rows = in.size() / depth;
    std::vector<T> out(in.size());
    for (std::size_t r = 0; r < rows; ++r)
        for (std::size_t c = 0; c < depth; ++c) out[c * rows + r] = in[r * depth + c];
    return out;
}

template <typename T>
std::vector<T> deinterleave(const std::vector<T>& in, unsigned depth) {
    if (depth == 0 || in.size() % depth != 0)
        throw std::invalid_argument("deinterleave: depth must divide the input length");
    if (depth == 1) return in;
    const std::size_t rows = in.size() / depth;
    std::vector<T> out(in.size());
    for (std::size_t r = 0; r < rows; ++r)
        for (std::size_t c = 0; c < depth; ++c) out[r * depth + c] = in[c * rows + r];
    return out;
}

// Gray-mapped QPSK on the unit circle. The first bit of each pair selects the
// imaginary-axis sign, the second the real-axis sign; a 0 bit maps to +.
std::vector<std::complex<double>> qpsk_modulate(const std::vector<std::uint8_t>& bits);

// Soft demodulation: two metrics per symbol, (Im, Re), matching the modulator
// bit order. Positive metric favors bit 0.
std::vector<double> qpsk_demodulate(const std::vector<std::complex<double>>& symbols);

// One +-1 chip per symbol, from the (scramble, user, block) substream.
std::vector<double> scramble_chips(std::uint64_t seed, std::uint32_t user, std::uint32_t block,
                                   std::size_t count);

// One complex Rayleigh fading coefficient with E|a|^2 = 1.
std::complex<double> draw_rayleigh_tap(rng::stream& s);

// In-place elementwise multiply; scrambling and descrambling are the same op.
void apply_chips(std::vector<std::complex<double>>& symbols, const std::vector<double>& chips);

struct channel_config {
    link_scenario scenario;
    channel_model model = channel_model::rayleigh_iid;
    std::uint32_t fading_block_symbols = 0;  // 0: one tap draw per block
    std::uint64_t seed = 12345;
};

struct channel_output {
    std::vector<std::complex<double>> received;
    std::vector<std::complex<double>> desired_tap;  // one per symbol
};

// Superimposes the desired user's signal, num_users - 1 interfering signals
// carrying random scrambled QPSK, and white noise of density noise_density.
// `sent` holds the desired user's scrambled unit-energy symbols; each signal
// is scaled so one symbol carries twice energy_per_coded_bit. Uplink
// interferers fade independently; downlink signals share one tap.
channel_output apply_channel(const channel_config& cfg,
                             const std::vector<std::complex<double>>& sent, std::uint32_t block);

// Descrambles with the desired user's chips, derotates by the tap phase
// (unit factor when the tap is exactly zero), and demodulates.
std::vector<double> receiver_front_end(const channel_output& out,
                                       const std::vector<double>& chips);

}  // namespace cdma
