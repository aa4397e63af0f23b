#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <vector>

namespace cdma {

enum class direction { uplink, downlink };

// Operating point of one link: K synchronous users with per-coded-bit energy
// xi and one-sided noise density n0 (normalized units, xi = 1 by convention).
struct link_scenario {
    std::uint32_t num_users = 1;
    double energy_per_coded_bit = 1.0;  // xi
    double noise_density = 1.0;         // N0
    direction dir = direction::uplink;
};

// Throws std::invalid_argument / std::domain_error on invariant violations.
void validate(const link_scenario& s);

// Equivalent average SNR per coded bit: xi / (2(K-1) xi + N0).
// Reduces to xi/N0 for a single user. Throws std::domain_error when the
// denominator vanishes (K = 1 with N0 = 0).
double avg_coded_snr(const link_scenario& s);

// A pdf sampled on a uniform gamma grid with inclusive endpoints. The step
// is stored explicitly so convolution outputs keep exact grid compatibility.
// Every factory in this module renormalizes so the trapezoid integral is 1.
struct pdf_grid {
    double gamma_min = 0.0;
    double step = 0.0;
    std::vector<double> values;

    std::size_t size() const { return values.size(); }
    double gamma_max() const { return gamma_min + step * static_cast<double>(values.size() - 1); }
    double gamma_at(std::size_t i) const { return gamma_min + step * static_cast<double>(i); }
};

double trapezoid_integral(const pdf_grid& g);
double grid_mean(const pdf_grid& g);
double grid_variance(const pdf_grid& g);

// Divides by the trapezoid integral; throws std::invalid_argument if the
// integral is not a positive finite number.
void renormalize(pdf_grid& g);

// Throws std::invalid_argument unless g satisfies the pdf-grid invariants
// (len >= 2, positive step, nonnegative values, integral within tol of 1).
void check_pdf_invariants(const pdf_grid& g, double tol = 1e-6);

// Uniform grid descriptor: `intervals` steps covering [0, gamma_max].
struct grid_spec {
    double gamma_max = 0.0;
    std::size_t intervals = 0;
};

// Defaults: uplink step gamma_bar/200 over [0, 30 gamma_bar d];
// downlink step gamma_edge/400 per bit (combined support [0, d gamma_edge]).
grid_spec default_uplink_grid(const link_scenario& s, unsigned d = 1);
grid_spec default_downlink_grid(const link_scenario& s, unsigned d = 1);

// Upper edge of the downlink per-bit SNR support, 1 / (2(K-1)).
double downlink_support_edge(const link_scenario& s);

// Per-coded-bit SNR density of the independently-fading link: exponential
// with mean avg_coded_snr(s).
pdf_grid uplink_bit_pdf(const link_scenario& s, const grid_spec& g);

// d-fold combined SNR density of the independently-fading link: the Erlang /
// chi-square(2d) closed form, evaluated in log space (stable to d >> 200).
pdf_grid uplink_combined_pdf(const link_scenario& s, unsigned d, const grid_spec& g);

// Per-coded-bit SNR density of the common-fading link. With a^2 ~ Exp(1),
// gamma = a^2 xi / (2(K-1) a^2 xi + N0) has bounded support [0, edge) and
// density exp(-x(gamma)) (N0/xi) / (1 - gamma/edge)^2,
// x(gamma) = (N0/xi) gamma / (1 - gamma/edge). Requires K >= 2.
pdf_grid downlink_bit_pdf(const link_scenario& s, const grid_spec& g);

// Closed-form CDFs matching the two per-bit densities (KS oracles).
double uplink_bit_cdf(const link_scenario& s, double gamma);
double downlink_bit_cdf(const link_scenario& s, double gamma);

// Moment-matched Gaussian approximation to the d-fold downlink density:
// mean and variance are d times the per-bit grid moments, the tails are cut
// at the support boundaries (0, d * edge), and the remainder is renormalized.
pdf_grid downlink_gaussian_approx(const link_scenario& s, unsigned d, const grid_spec& g);

// Standard Gaussian upper-tail probability, relative error ~1e-15.
double q_function(double x);

// Integral of f(gamma) Q(sqrt(2 gamma)) over the grid (trapezoid), clamped
// to [0, 1/2].
double pairwise_error_prob(const pdf_grid& pdf);

// Union bound over a truncated distance spectrum. {free_distance, weights}
// with weights keyed by distance d >= free_distance, values c_d > 0.
struct distance_spectrum {
    int free_distance = 0;
    std::map<int, double> weights;
    int truncation_distance = 0;
};

void validate(const distance_spectrum& sp);

// Sum of c_d * p2(d) over the spectrum. Throws missing_data_error if p2
// lacks an entry for some spectrum distance.
double union_bound_ber(const distance_spectrum& sp, const std::map<int, double>& p2);

}  // namespace cdma
