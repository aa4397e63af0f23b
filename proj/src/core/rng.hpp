#pragma once

#include <array>
#include <cstdint>

namespace cdma::rng {

// Philox 4x64, 10 rounds: a counter-based generator. Every 64-bit output word
// is a pure function of (counter, key), so logical substreams addressed by
// (seed, stream id, sample index) are reproducible and order-independent --
// parallel fan-out over blocks cannot change any drawn value.
std::array<std::uint64_t, 4> philox4x64(const std::array<std::uint64_t, 4>& counter,
                                        const std::array<std::uint64_t, 2>& key);

// Substream roles. A stream id packs (role, user, block); streams with
// distinct ids never share a (counter, key) pair.
enum class role : std::uint64_t {
    data = 1,      // information / interferer payload bits
    taps = 2,      // fading coefficients
    noise = 3,     // receiver thermal noise
    scramble = 4,  // +-1 chip sequences
};

std::uint64_t stream_id(role r, std::uint32_t user, std::uint32_t block);

// Sequential view of one substream. Cheap to construct; holds a 4-word buffer.
class stream {
  public:
    stream(std::uint64_t seed, std::uint64_t id)
        : key_{seed, id} {}

    std::uint64_t next_u64();

    // Uniform on (0, 1]; never 0, safe under log().
    double next_unit();

    // Standard normal pair via the Box-Muller transform.
    void next_gaussian_pair(double& g0, double& g1);

    // +-1 chip, one bit of stream consumption.
    int next_sign();

    // Raw 0/1 bit, one bit of stream consumption.
    std::uint8_t next_bit();

  private:
    std::array<std::uint64_t, 2> key_;
    std::array<std::uint64_t, 4> buffer_{};
    std::uint64_t block_index_ = 0;
    unsigned buffer_pos_ = 4;  // empty
    std::uint64_t bit_word_ = 0;
    unsigned bits_left_ = 0;
};

}  // namespace cdma::rng
