#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "core/chain.hpp"
#include "core/code.hpp"
#include "core/pdf.hpp"

namespace cdma {

// Everything the Monte-Carlo paths need. `scenario.dir` is a default; the
// sampling helpers take the link direction explicitly.
struct experiment_config {
    link_scenario scenario;
    std::optional<code_spec> code;
    std::optional<distance_spectrum> spectrum;
    std::uint32_t num_trials = 100000;  // SNR samples, or max simulated blocks
    std::uint64_t seed = 12345;
    std::size_t grid_points = 200;  // histogram bins
    double grid_max = 0.0;          // 0: direction-dependent default
    channel_model channel = channel_model::rayleigh_iid;
    std::uint32_t block_bits = 1000;  // information bits per block
    unsigned interleaver_depth = 1;
    unsigned threads = 1;
    std::uint32_t fading_block_symbols = 0;
    std::uint32_t target_errors = 500;  // 0: never stop early
};

// Normalized histogram density on [0, step * counts.size()).
struct empirical_pdf {
    double gamma_min = 0.0;
    double step = 0.0;
    std::vector<std::uint64_t> counts;
    std::vector<double> density;  // counts / (total * step)
};

struct ber_estimate {
    std::uint64_t errors = 0;
    std::uint64_t bits = 0;
    double ber = 0.0;
    double ci_lo = 0.0;  // 95% Wilson interval
    double ci_hi = 0.0;
};

struct check_result {
    std::string name;
    bool passed = false;
    double measured = 0.0;
    double threshold = 0.0;
    std::string detail;
};

// Per-coded-bit SNR draws through the same fading generator the link
// simulation uses. Uplink: gamma = |a|^2 xi / (2(K-1) xi + N0); downlink:
// gamma = |a|^2 xi / (2(K-1)|a|^2 xi + N0). The uplink form carries the
// average multi-access power, matching the analytic model.
std::vector<double> draw_snr_samples(const link_scenario& s, std::size_t count,
                                     std::uint64_t seed);

// Histogram estimate over [0, grid_max) with grid_points bins; samples at or
// beyond grid_max land in the last bin. Defaults: 30 gamma_bar (uplink),
// 1.25 * edge (downlink, exponential default when K = 1).
empirical_pdf estimate_snr_pdf(const experiment_config& cfg, direction dir);

// Kolmogorov-Smirnov distance of the samples against a reference CDF.
double ks_statistic(std::vector<double> samples, const std::function<double(double)>& cdf);
double two_sample_ks(std::vector<double> a, std::vector<double> b);

// KS distance of num_trials SNR draws against the matching closed-form CDF
// (K = 1 downlink degenerates to the exponential).
double snr_ks_distance(const experiment_config& cfg, direction dir);

// 95% Wilson score interval for errors out of bits.
void wilson_interval(std::uint64_t errors, std::uint64_t bits, double& lo, double& hi);

// Bit-true link simulation: per block, encode (if configured), interleave,
// modulate, scramble, fade, add interference and noise, derotate, decode,
// count information-bit errors. Blocks are consumed in index order and the
// run stops after the first block where cumulative errors reach
// target_errors, so the counted set is identical for any thread count.
// Throws insufficient_bits_error when num_trials * block_bits < 10^4.
ber_estimate estimate_ber(const experiment_config& cfg);

// Mean received power with the desired signal and noise switched off;
// expected 2 (K-1) xi per complex sample.
double measure_interference_variance(const experiment_config& cfg, std::uint64_t num_symbols);

// Named self-checks of the simulation machinery against the analytic model:
// pdf normalizations, sampled-SNR KS distances, tap power/phase/gaussianity,
// scramble balance, interference coefficient, histogram grid coverage.
// grid-coverage is asserted for the link directions flagged here.
std::vector<check_result> run_validation(const experiment_config& cfg, bool check_uplink,
                                         bool check_downlink);

}  // namespace cdma
