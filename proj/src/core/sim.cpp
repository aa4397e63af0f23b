#include "core/sim.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <limits>
#include <thread>

#include "core/errors.hpp"
#include "core/rng.hpp"

namespace cdma {

namespace {

constexpr double kZ95 = 1.959963984540054;  // two-sided 95% normal quantile

// Uplink histogram/grid default reach: the exponential's 1 - 1e-6 quantile.
constexpr double kUplinkTailQuantile = 13.815510557964274;

link_scenario with_direction(link_scenario s, direction d) {
    s.dir = d;
    return s;
}

double default_grid_max(const link_scenario& s, direction dir) {
    if (dir == direction::downlink && s.num_users >= 2)
        return 1.25 * downlink_support_edge(with_direction(s, direction::downlink));
    return 30.0 * avg_coded_snr(s);
}

double snr_from_tap_power(const link_scenario& s, double a2) {
    const double xi = s.energy_per_coded_bit;
    const double mai = 2.0 * static_cast<double>(s.num_users - 1) * xi;
    if (s.dir == direction::downlink) return a2 * xi / (mai * a2 + s.noise_density);
    return a2 * xi / (mai + s.noise_density);
}

check_result make_check(std::string name) {
    check_result c;
    c.name = std::move(name);
    return c;
}

std::string format_detail(const char* fmt, double a, double b) {
    char buf[160];
    std::snprintf(buf, sizeof buf, fmt, a, b);
    return buf;
}

}  // namespace

std::vector<double> draw_snr_samples(const link_scenario& s, std::size_t count,
                                     std::uint64_t seed) {
    validate(s);
    avg_coded_snr(s);  // rejects the degenerate zero-denominator case up front
    rng::stream taps(seed, rng::stream_id(rng::role::taps, 0, 0));
    std::vector<double> out(count);
    for (auto& v : out) v = snr_from_tap_power(s, std::norm(draw_rayleigh_tap(taps)));
    return out;
}

empirical_pdf estimate_snr_pdf(const experiment_config& cfg, direction dir) {
    if (cfg.grid_points == 0)
        throw std::invalid_argument("histogram: grid_points must be positive");
    if (cfg.num_trials == 0) throw std::invalid_argument("histogram: num_trials must be positive");
    const link_scenario sc = with_direction(cfg.scenario, dir);
    const double gmax = cfg.grid_max > 0.0 ? cfg.grid_max : default_grid_max(sc, dir);
    const auto samples = draw_snr_samples(sc, cfg.num_trials, cfg.seed);

    empirical_pdf h;
    h.step = gmax / static_cast<double>(cfg.grid_points);
    h.counts.assign(cfg.grid_points, 0);
    for (double v : samples) {
        auto idx = static_cast<std::size_t>(v / h.step);
        if (idx >= cfg.grid_points) idx = cfg.grid_points - 1;  // clamp outliers inward
        ++h.counts[idx];
    }
    h.density.resize(cfg.grid_points);
    const double scale = 1.0 / (static_cast<double>(samples.size()) * h.step);
    for (std::size_t i = 0; i < h.counts.size(); ++i)
        h.density[i] = static_cast<double>(h.counts[i]) * scale;
    return h;
}

double ks_statistic(std::vector<double> samples, const std::function<double(double)>& cdf) {
    if (samples.empty()) throw std::invalid_argument("ks: no samples");
    std::sort(samples.begin(), samples.end());
    const double n = static_cast<double>(samples.size());
    double d = 0.0;
    for (std::size_t i = 0; i < samples.size(); ++i) {
        const double f = cdf(samples[i]);
        d = std::max(d, std::abs(f - static_cast<double>(i) / n));
        d = std::max(d, std::abs(f - static_cast<double>(i + 1) / n));
    }
    return d;
}

double two_sample_ks(std::vector<double> a, std::vector<double> b) {
    if (a.empty() || b.empty()) throw std::invalid_argument("ks: no samples");
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    const double n = static_cast<double>(a.size());
    const double m = static_cast<double>(b.size());
    std::size_t i = 0, j = 0;
    double d = 0.0;
    while (i < a.size() && j < b.size()) {
        const double x = std::min(a[i], b[j]);
        while (i < a.size() && a[i] == x) ++i;  // advance through ties together
        while (j < b.size() && b[j] == x) ++j;
        d = std::max(d, std::abs(static_cast<double>(i) / n - static_cast<double>(j) / m));
    }
    return d;
}

double snr_ks_distance(const experiment_config& cfg, direction dir) {
    const link_scenario sc = with_direction(cfg.scenario, dir);
    auto samples = draw_snr_samples(sc, cfg.num_trials, cfg.seed);
    const bool bounded = dir == direction::downlink && sc.num_users >= 2;
    return ks_statistic(std::move(samples), [sc, bounded](double g) {
        return bounded ? downlink_bit_cdf(sc, g) : uplink_bit_cdf(sc, g);
    });
}

void wilson_interval(std::uint64_t errors, std::uint64_t bits, double& lo, double& hi) {
    if (bits == 0) throw std::invalid_argument("wilson: no bits observed");
    if (errors > bits) throw std::invalid_argument("wilson: errors exceed bits");
    const double n = static_cast<double>(bits);
    const double p = static_cast<double>(errors) / n;
    const double z2 = kZ95 * kZ95;
    const double denom = 1.0 + z2 / n;
    const double center = (p + z2 / (2.0 * n)) / denom;
    const double half = kZ95 * std::sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n)) / denom;
    lo = std::max(0.0, center - half);
    hi = std::min(1.0, center + half);
}

ber_estimate estimate_ber(const experiment_config& cfg) {
    const link_scenario& sc = cfg.scenario;
    validate(sc);
    if (cfg.block_bits == 0) throw std::invalid_argument("simulate: block_bits must be positive");
    if (cfg.num_trials == 0) throw std::invalid_argument("simulate: num_trials must be positive");
    if (static_cast<std::uint64_t>(cfg.num_trials) * cfg.block_bits < 10000)
        throw insufficient_bits_error(
            "simulate: num_trials * block_bits must reach 10^4 for a usable estimate");

    std::optional<trellis> trel;
    std::size_t coded_len = cfg.block_bits;
    if (cfg.code) {
        validate(*cfg.code);
        trel.emplace(*cfg.code);
        coded_len = std::size_t{cfg.code->rate_inverse} *
                    (cfg.block_bits + cfg.code->constraint_length - 1);
    }
    if (coded_len % 2 != 0)
        throw std::invalid_argument("simulate: coded block length must be even for QPSK");
    if (cfg.interleaver_depth == 0 || coded_len % cfg.interleaver_depth != 0)
        throw std::invalid_argument(
            "simulate: interleaver depth must divide the coded block length");
    const std::size_t n_sym = coded_len / 2;

    const channel_config ch{sc, cfg.channel, cfg.fading_block_symbols, cfg.seed};

    auto run_block = [&](std::uint32_t block) -> std::uint64_t {
        rng::stream data(cfg.seed, rng::stream_id(rng::role::data, 0, block));
        std::vector<std::uint8_t> info(cfg.block_bits);
        for (auto& b : info) b = data.next_bit();

        std::vector<std::uint8_t> coded = trel ? encode(*trel, info) : info;
        std::vector<std::uint8_t> tx = interleave(coded, cfg.interleaver_depth);
        auto syms = qpsk_modulate(tx);
        const auto chips = scramble_chips(cfg.seed, 0, block, n_sym);
        apply_chips(syms, chips);
        const auto out = apply_channel(ch, syms, block);
        const auto metrics = receiver_front_end(out, chips);
        const auto de = deinterleave(metrics, cfg.interleaver_depth);

        std::uint64_t errors = 0;
        if (trel) {
            const auto decoded = viterbi_decode(*trel, de);
            for (std::size_t i = 0; i < info.size(); ++i) errors += decoded[i] != info[i];
        } else {
            for (std::size_t i = 0; i < info.size(); ++i)
                errors += static_cast<std::uint8_t>(de[i] < 0.0) != info[i];
        }
        return errors;
    };

    ber_estimate r;
    const std::uint32_t total = cfg.num_trials;
    const unsigned nthreads = std::max(1u, cfg.threads);
    if (nthreads == 1) {
        for (std::uint32_t b = 0; b < total; ++b) {
            r.errors += run_block(b);
            r.bits += cfg.block_bits;
            if (cfg.target_errors > 0 && r.errors >= cfg.target_errors) break;
        }
    } else {
        // Waves of block indices; the stop rule scans results in index order,
        // so the counted prefix matches a sequential run exactly.
        std::vector<std::uint64_t> wave(nthreads);
        std::uint32_t base = 0;
        bool done = false;
        while (base < total && !done) {
            const auto count =
                static_cast<std::uint32_t>(std::min<std::uint64_t>(nthreads, total - base));
            std::vector<std::thread> pool;
            pool.reserve(count);
            for (std::uint32_t t = 0; t < count; ++t)
                pool.emplace_back([&, t] { wave[t] = run_block(base + t); });
            for (auto& th : pool) th.join();
            for (std::uint32_t t = 0; t < count && !done; ++t) {
                r.errors += wave[t];
                r.bits += cfg.block_bits;
                done = cfg.target_errors > 0 && r.errors >= cfg.target_errors;
            }
            base += count;
        }
    }
    r.ber = static_cast<double>(r.errors) / static_cast<double>(r.bits);
    wilson_interval(r.errors, r.bits, r.ci_lo, r.ci_hi);
    return r;
}

double measure_interference_variance(const experiment_config& cfg, std::uint64_t num_symbols) {
    if (num_symbols == 0) throw std::invalid_argument("interference: num_symbols must be positive");
    link_scenario sc = cfg.scenario;
    sc.noise_density = 0.0;  // isolate the multi-access term
    validate(sc);
    const channel_config ch{sc, cfg.channel, cfg.fading_block_symbols, cfg.seed};

    constexpr std::uint64_t kChunk = 65536;
    std::vector<std::complex<double>> silent;
    double acc = 0.0;
    std::uint32_t block = 0;
    for (std::uint64_t left = num_symbols; left > 0;) {
        const auto n = static_cast<std::size_t>(std::min(kChunk, left));
        silent.assign(n, {0.0, 0.0});
        const auto out = apply_channel(ch, silent, block++);
        for (const auto& v : out.received) acc += std::norm(v);
        left -= n;
    }
    return acc / static_cast<double>(num_symbols);
}

std::vector<check_result> run_validation(const experiment_config& cfg, bool check_uplink,
                                         bool check_downlink) {
    std::vector<check_result> out;
    const link_scenario up = with_direction(cfg.scenario, direction::uplink);
    const link_scenario down = with_direction(cfg.scenario, direction::downlink);
    const bool bounded = cfg.scenario.num_users >= 2;
    const double gbar = avg_coded_snr(up);

    {
        check_result c = make_check("uplink-pdf-normalization");
        c.measured = trapezoid_integral(uplink_bit_pdf(up, default_uplink_grid(up)));
        c.threshold = 1e-6;
        c.passed = std::abs(c.measured - 1.0) <= c.threshold;
        c.detail = format_detail("integral %.12g on the default grid (target 1 +- %.0e)",
                                 c.measured, c.threshold);
        out.push_back(std::move(c));
    }
    {
        check_result c = make_check("downlink-pdf-normalization");
        const pdf_grid g = bounded ? downlink_bit_pdf(down, default_downlink_grid(down))
                                   : uplink_bit_pdf(up, default_uplink_grid(up));
        c.measured = trapezoid_integral(g);
        c.threshold = 1e-6;
        c.passed = std::abs(c.measured - 1.0) <= c.threshold;
        c.detail = bounded ? format_detail("integral %.12g on the default grid (target 1 +- %.0e)",
                                           c.measured, c.threshold)
                           : "single user: bounded-support form degenerates to the exponential";
        out.push_back(std::move(c));
    }
    {
        check_result c = make_check("uplink-ks");
        c.measured = snr_ks_distance(cfg, direction::uplink);
        c.threshold = 0.01;
        c.passed = c.measured < c.threshold;
        c.detail = format_detail("KS distance %.6g over %.0f sampled SNR draws", c.measured,
                                 static_cast<double>(cfg.num_trials));
        out.push_back(std::move(c));
    }
    {
        check_result c = make_check("downlink-ks");
        c.measured = snr_ks_distance(cfg, direction::downlink);
        c.threshold = 0.01;
        c.passed = c.measured < c.threshold;
        c.detail = format_detail("KS distance %.6g over %.0f sampled SNR draws", c.measured,
                                 static_cast<double>(cfg.num_trials));
        out.push_back(std::move(c));
    }

    // Raw fading-tap statistics from the generator the simulation uses.
    constexpr std::size_t kTapSamples = 100000;
    {
        rng::stream ts(cfg.seed, rng::stream_id(rng::role::taps, 0, 0));
        double power = 0.0, m2 = 0.0, m4 = 0.0;
        std::array<std::uint64_t, 16> phase_bins{};
        for (std::size_t i = 0; i < kTapSamples; ++i) {
            const std::complex<double> a = draw_rayleigh_tap(ts);
            power += std::norm(a);
            for (double comp : {a.real(), a.imag()}) {
                const double c2 = comp * comp;
                m2 += c2;
                m4 += c2 * c2;
            }
            const double phi = std::atan2(a.imag(), a.real());
            auto bin = static_cast<std::size_t>((phi + 3.14159265358979323846) *
                                                (16.0 / 6.28318530717958647692));
            if (bin >= 16) bin = 15;
            ++phase_bins[bin];
        }
        power /= static_cast<double>(kTapSamples);
        m2 /= static_cast<double>(2 * kTapSamples);
        m4 /= static_cast<double>(2 * kTapSamples);

        check_result cp = make_check("tap-power");
        cp.measured = power;
        cp.threshold = 0.02;
        cp.passed = std::abs(cp.measured - 1.0) <= cp.threshold;
        cp.detail = format_detail("mean |a|^2 = %.6g over %.0f taps (target 1 +- 2%%)",
                                  cp.measured, static_cast<double>(kTapSamples));
        out.push_back(std::move(cp));

        check_result cu = make_check("tap-phase-uniformity");
        const double expected = static_cast<double>(kTapSamples) / 16.0;
        double chi2 = 0.0;
        for (std::uint64_t o : phase_bins) {
            const double dlt = static_cast<double>(o) - expected;
            chi2 += dlt * dlt / expected;
        }
        cu.measured = chi2;
        cu.threshold = 30.57791416689249;  // chi-square(15) 0.99 quantile
        cu.passed = cu.measured <= cu.threshold;
        cu.detail = "chi-square over 16 phase bins against the uniform law";
        out.push_back(std::move(cu));

        check_result cg = make_check("tap-gaussianity");
        cg.measured = m4 / (m2 * m2);
        cg.threshold = 0.1;
        cg.passed = std::abs(cg.measured - 3.0) <= cg.threshold;
        cg.detail = format_detail("component kurtosis %.6g (target 3 +- %.1f)", cg.measured,
                                  cg.threshold);
        out.push_back(std::move(cg));
    }

    {
        check_result c = make_check("scramble-balance");
        rng::stream ss(cfg.seed, rng::stream_id(rng::role::scramble, 0, 0));
        double sum = 0.0;
        constexpr std::size_t kChips = 100000;
        for (std::size_t i = 0; i < kChips; ++i) sum += ss.next_sign();
        c.measured = sum / static_cast<double>(kChips);
        c.threshold = 0.02;
        c.passed = std::abs(c.measured) <= c.threshold;
        c.detail = format_detail("mean chip %.6g over %.0f draws", c.measured,
                                 static_cast<double>(kChips));
        out.push_back(std::move(c));
    }

    {
        check_result c = make_check("interference-coefficient");
        const double v = measure_interference_variance(cfg, 1000000);
        if (cfg.scenario.num_users >= 2) {
            const double expected = 2.0 * static_cast<double>(cfg.scenario.num_users - 1) *
                                    cfg.scenario.energy_per_coded_bit;
            c.measured = v / expected;
            c.threshold = 0.05;
            c.passed = std::abs(c.measured - 1.0) <= c.threshold;
            c.detail = format_detail("variance %.6g vs expected %.6g per complex sample", v,
                                     expected);
        } else {
            c.measured = v;
            c.threshold = 0.0;
            c.passed = v == 0.0;
            c.detail = "single user: no interference, exact zero expected";
        }
        out.push_back(std::move(c));
    }

    {
        check_result c = make_check("grid-coverage");
        c.threshold = 1.0;
        double worst = std::numeric_limits<double>::infinity();
        if (check_uplink) {
            const double gmax = cfg.grid_max > 0.0 ? cfg.grid_max
                                                   : default_grid_max(up, direction::uplink);
            worst = std::min(worst, gmax / (1.1 * kUplinkTailQuantile * gbar));
        }
        if (check_downlink) {
            const double gmax = cfg.grid_max > 0.0 ? cfg.grid_max
                                                   : default_grid_max(down, direction::downlink);
            const double need = bounded ? downlink_support_edge(down)
                                        : kUplinkTailQuantile * gbar;
            worst = std::min(worst, gmax / (1.1 * need));
        }
        if (!check_uplink && !check_downlink) worst = 1.0;  // nothing declared, nothing to cover
        c.measured = worst;
        c.passed = c.measured >= c.threshold;
        c.detail = "histogram reach over 1.1x the required span (tail quantile or support edge)";
        out.push_back(std::move(c));
    }

    return out;
}

}  // namespace cdma
