#include "core/chain.hpp"

#include <algorithm>
#include <cmath>

namespace cdma {

namespace {

constexpr double kInvSqrt2 = 0.70710678118654752440;

inline std::complex<double> qpsk_point(std::uint8_t b_im, std::uint8_t b_re) {
    return {b_re ? -kInvSqrt2 : kInvSqrt2, b_im ? -kInvSqrt2 : kInvSqrt2};
}

// Fills `taps` according to the fading model, one entry per symbol.
void fill_taps(std::vector<std::complex<double>>& taps, const channel_config& cfg,
               rng::stream& s) {
    switch (cfg.model) {
        case channel_model::awgn:
            std::fill(taps.begin(), taps.end(), std::complex<double>{1.0, 0.0});
            return;
        case channel_model::rayleigh_iid:
            for (auto& t : taps) t = draw_rayleigh_tap(s);
            return;
        case channel_model::rayleigh_block: {
            const std::size_t span =
                cfg.fading_block_symbols == 0 ? taps.size() : cfg.fading_block_symbols;
            for (std::size_t i = 0; i < taps.size(); i += span) {
                const std::complex<double> t = draw_rayleigh_tap(s);
                const std::size_t end = std::min(i + span, taps.size());
                for (std::size_t j = i; j < end; ++j) taps[j] = t;
            }
            return;
        }
    }
    throw std::invalid_argument("channel: unknown fading model");
}

}  // namespace

std::complex<double> draw_rayleigh_tap(rng::stream& s) {
    double g0, g1;
    s.next_gaussian_pair(g0, g1);
    return {g0 * kInvSqrt2, g1 * kInvSqrt2};
}

std::vector<std::complex<double>> qpsk_modulate(const std::vector<std::uint8_t>& bits) {
    if (bits.size() % 2 != 0)
        throw std::invalid_argument("modulate: bit count must be even");
    std::vector<std::complex<double>> out(bits.size() / 2);
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = qpsk_point(bits[2 * i], bits[2 * i + 1]);
    return out;
}

std::vector<double> qpsk_demodulate(const std::vector<std::complex<double>>& symbols) {
    std::vector<double> out(symbols.size() * 2);
    for (std::size_t i = 0; i < symbols.size(); ++i) {
        out[2 * i] = symbols[i].imag();
        out[2 * i + 1] = symbols[i].real();
    }
    return out;
}

std::vector<double> scramble_chips(std::uint64_t seed, std::uint32_t user, std::uint32_t block,
                                   std::size_t count) {
    rng::stream s(seed, rng::stream_id(rng::role::scramble, user, block));
    std::vector<double> chips(count);
    for (auto& c : chips) c = static_cast<double>(s.next_sign());
    return chips;
}

void apply_chips(std::vector<std::complex<double>>& symbols, const std::vector<double>& chips) {
    if (symbols.size() != chips.size())
        throw std::invalid_argument("scramble: chip count does not match symbol count");
    for (std::size_t i = 0; i < symbols.size(); ++i) symbols[i] *= chips[i];
}

channel_output apply_channel(const channel_config& cfg,
                             const std::vector<std::complex<double>>& sent, std::uint32_t block) {
    const link_scenario& sc = cfg.scenario;
    validate(sc);
    const std::size_t n = sent.size();
    const double amp = std::sqrt(2.0 * sc.energy_per_coded_bit);

    channel_output out;
    out.desired_tap.resize(n);
    {
        rng::stream taps(cfg.seed, rng::stream_id(rng::role::taps, 0, block));
        fill_taps(out.desired_tap, cfg, taps);
    }

    out.received.resize(n);
    for (std::size_t i = 0; i < n; ++i) out.received[i] = out.desired_tap[i] * (amp * sent[i]);

    // Interfering users carry independent random QPSK under their own
    // scrambling codes. On the uplink each arrives through its own channel;
    // on the downlink everything shares the desired tap.
    std::vector<std::complex<double>> itaps;
    if (sc.dir == direction::uplink) itaps.resize(n);
    for (std::uint32_t u = 1; u < sc.num_users; ++u) {
        rng::stream data(cfg.seed, rng::stream_id(rng::role::data, u, block));
        rng::stream chips(cfg.seed, rng::stream_id(rng::role::scramble, u, block));
        const std::complex<double>* tap = out.desired_tap.data();
        if (sc.dir == direction::uplink) {
            rng::stream ts(cfg.seed, rng::stream_id(rng::role::taps, u, block));
            fill_taps(itaps, cfg, ts);
            tap = itaps.data();
        }
        for (std::size_t i = 0; i < n; ++i) {
            const std::uint8_t b_im = data.next_bit();
            const std::uint8_t b_re = data.next_bit();
            const double chip = chips.next_sign();
            out.received[i] += tap[i] * (amp * chip * qpsk_point(b_im, b_re));
        }
    }

    if (sc.noise_density > 0.0) {
        rng::stream noise(cfg.seed, rng::stream_id(rng::role::noise, 0, block));
        const double sigma = std::sqrt(sc.noise_density * 0.5);
        for (std::size_t i = 0; i < n; ++i) {
            double g0, g1;
            noise.next_gaussian_pair(g0, g1);
            out.received[i] += std::complex<double>{sigma * g0, sigma * g1};
        }
    }
    return out;
}

std::vector<double> receiver_front_end(const channel_output& out,
                                       const std::vector<double>& chips) {
    if (out.received.size() != out.desired_tap.size())
        throw std::invalid_argument("front end: tap count does not match symbol count");
    std::vector<std::complex<double>> y(out.received.size());
    for (std::size_t i = 0; i < y.size(); ++i) {
        const std::complex<double> a = out.desired_tap[i];
        if (a.imag() == 0.0 && a.real() == 1.0) {  // unfaded tap, nothing to undo
            y[i] = out.received[i];
            continue;
        }
        const double mag = std::abs(a);
        const std::complex<double> rot = mag > 0.0 ? std::conj(a) / mag
                                                   : std::complex<double>{1.0, 0.0};
        y[i] = rot * out.received[i];
    }
    apply_chips(y, chips);
    return qpsk_demodulate(y);
}

}  // namespace cdma
