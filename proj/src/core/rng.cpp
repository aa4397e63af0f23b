#include "core/rng.hpp"

#include <cmath>

namespace cdma::rng {

namespace {

constexpr std::uint64_t kM0 = 0xD2E7470EE14C6C93ULL;
constexpr std::uint64_t kM1 = 0xCA5A826395121157ULL;
constexpr std::uint64_t kW0 = 0x9E3779B97F4A7C15ULL;
constexpr std::uint64_t kW1 = 0xBB67AE8584CAA73BULL;

inline void mulhilo(std::uint64_t a, std::uint64_t b, std::uint64_t& hi, std::uint64_t& lo) {
    const unsigned __int128 p = static_cast<unsigned __int128>(a) * b;
    hi = static_cast<std::uint64_t>(p >> 64);
    lo = static_cast<std::uint64_t>(p);
}

}  // namespace

std::array<std::uint64_t, 4> philox4x64(const std::array<std::uint64_t, 4>& counter,
                                        const std::array<std::uint64_t, 2>& key) {
    std::array<std::uint64_t, 4> c = counter;
    std::array<std::uint64_t, 2> k = key;
    for (int round = 0; round < 10; ++round) {
        std::uint64_t hi0, lo0, hi1, lo1;
        mulhilo(kM0, c[0], hi0, lo0);
        mulhilo(kM1, c[2], hi1, lo1);
        c = {hi1 ^ c[1] ^ k[0], lo1, hi0 ^ c[3] ^ k[1], lo0};
        k[0] += kW0;
        k[1] += kW1;
    }
    return c;
}

std::uint64_t stream_id(role r, std::uint32_t user, std::uint32_t block) {
    return (static_cast<std::uint64_t>(r) << 56) |
           (static_cast<std::uint64_t>(user & 0xFFFFFFu) << 32) |
           static_cast<std::uint64_t>(block);
}

std::uint64_t stream::next_u64() {
    if (buffer_pos_ >= 4) {
        buffer_ = philox4x64({block_index_, 0, 0, 0}, key_);
        ++block_index_;
        buffer_pos_ = 0;
    }
    return buffer_[buffer_pos_++];
}

double stream::next_unit() {
    // 53 mantissa bits, shifted into (0, 1].
    const std::uint64_t w = next_u64() >> 11;
    return (static_cast<double>(w) + 1.0) * 0x1p-53;
}

void stream::next_gaussian_pair(double& g0, double& g1) {
    const double u1 = next_unit();
    const double u2 = next_unit();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double theta = 6.283185307179586476925286766559 * u2;
#if defined(__GLIBC__)
    double s, c;
    ::sincos(theta, &s, &c);
    g0 = r * c;
    g1 = r * s;
#else
    g0 = r * std::cos(theta);
    g1 = r * std::sin(theta);
#endif
}

int stream::next_sign() {
    return next_bit() ? 1 : -1;
}

std::uint8_t stream::next_bit() {
    if (bits_left_ == 0) {
        bit_word_ = next_u64();
        bits_left_ = 64;
    }
    const std::uint8_t b = static_cast<std::uint8_t>(bit_word_ & 1u);
    bit_word_ >>= 1;
    --bits_left_;
    return b;
}

}  // namespace cdma::rng
