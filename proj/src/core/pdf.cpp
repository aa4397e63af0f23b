#include "core/pdf.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "core/errors.hpp"

namespace cdma {

void validate(const link_scenario& s) {
    if (s.num_users < 1)
        throw std::invalid_argument("scenario: num_users must be >= 1");
    if (!(s.energy_per_coded_bit > 0.0) || !std::isfinite(s.energy_per_coded_bit))
        throw std::invalid_argument("scenario: energy_per_coded_bit must be positive");
    if (!(s.noise_density >= 0.0) || !std::isfinite(s.noise_density))
        throw std::invalid_argument("scenario: noise_density must be nonnegative");
    if (s.num_users == 1 && s.noise_density == 0.0)
        throw std::invalid_argument("scenario: noise_density must be positive for a single user");
}

double avg_coded_snr(const link_scenario& s) {
    validate(s);
    const double k1 = static_cast<double>(s.num_users - 1);
    const double denom = 2.0 * k1 * s.energy_per_coded_bit + s.noise_density;
    if (denom <= 0.0)
        throw std::domain_error("avg_coded_snr: zero interference-plus-noise denominator");
    return s.energy_per_coded_bit / denom;
}

double trapezoid_integral(const pdf_grid& g) {
    double sum = 0.0;
    for (double v : g.values) sum += v;
    sum -= 0.5 * (g.values.front() + g.values.back());
    return sum * g.step;
}

double grid_mean(const pdf_grid& g) {
    double sum = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i) {
        double w = g.values[i] * g.gamma_at(i);
        if (i == 0 || i + 1 == g.size()) w *= 0.5;
        sum += w;
    }
    return sum * g.step;
}

double grid_variance(const pdf_grid& g) {
    const double m = grid_mean(g);
    double sum = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i) {
        const double d = g.gamma_at(i) - m;
        double w = g.values[i] * d * d;
        if (i == 0 || i + 1 == g.size()) w *= 0.5;
        sum += w;
    }
    return sum * g.step;
}

void renormalize(pdf_grid& g) {
    const double integral = trapezoid_integral(g);
    if (!(integral > 0.0) || !std::isfinite(integral))
        throw std::invalid_argument("pdf renormalization: nonpositive or non-finite integral");
    for (double& v : g.values) v /= integral;
}

void check_pdf_invariants(const pdf_grid& g, double tol) {
    if (g.size() < 2)
        throw std::invalid_argument("pdf grid: need at least two samples");
    if (!(g.step > 0.0) || !std::isfinite(g.step))
        throw std::invalid_argument("pdf grid: step must be positive");
    if (g.gamma_min < 0.0)
        throw std::invalid_argument("pdf grid: gamma_min must be nonnegative");
    for (double v : g.values)
        if (!(v >= 0.0) || !std::isfinite(v))
            throw std::invalid_argument("pdf grid: values must be nonnegative and finite");
    const double integral = trapezoid_integral(g);
    if (std::abs(integral - 1.0) > tol)
        throw std::invalid_argument("pdf grid: trapezoid integral " + std::to_string(integral) +
                                    " outside 1 +- " + std::to_string(tol));
}

namespace {

void check_grid_spec(const grid_spec& g) {
    if (!(g.gamma_max > 0.0) || !std::isfinite(g.gamma_max))
        throw std::invalid_argument("grid: gamma_max must be positive");
    if (g.intervals < 1)
        throw std::invalid_argument("grid: need at least one interval");
}

pdf_grid make_grid(const grid_spec& g) {
    check_grid_spec(g);
    pdf_grid out;
    out.gamma_min = 0.0;
    out.step = g.gamma_max / static_cast<double>(g.intervals);
    out.values.assign(g.intervals + 1, 0.0);
    return out;
}

}  // namespace

grid_spec default_uplink_grid(const link_scenario& s, unsigned d) {
    if (d < 1) throw std::invalid_argument("grid: d must be >= 1");
    const double gbar = avg_coded_snr(s);
    return {30.0 * gbar * static_cast<double>(d), 6000u * static_cast<std::size_t>(d)};
}

grid_spec default_downlink_grid(const link_scenario& s, unsigned d) {
    if (d < 1) throw std::invalid_argument("grid: d must be >= 1");
    const double edge = downlink_support_edge(s);
    return {edge * static_cast<double>(d), 400u * static_cast<std::size_t>(d)};
}

double downlink_support_edge(const link_scenario& s) {
    validate(s);
    if (s.num_users < 2)
        throw std::domain_error("downlink SNR model requires at least two users");
    return 1.0 / (2.0 * static_cast<double>(s.num_users - 1));
}

pdf_grid uplink_bit_pdf(const link_scenario& s, const grid_spec& g) {
    if (s.dir != direction::uplink)
        throw std::invalid_argument("uplink_bit_pdf: scenario direction is not uplink");
    const double gbar = avg_coded_snr(s);
    pdf_grid out = make_grid(g);
    for (std::size_t i = 0; i < out.size(); ++i)
        out.values[i] = std::exp(-out.gamma_at(i) / gbar) / gbar;
    renormalize(out);
    return out;
}

pdf_grid uplink_combined_pdf(const link_scenario& s, unsigned d, const grid_spec& g) {
    if (s.dir != direction::uplink)
        throw std::invalid_argument("uplink_combined_pdf: scenario direction is not uplink");
    if (d < 1) throw std::invalid_argument("uplink_combined_pdf: d must be >= 1");
    if (d == 1) return uplink_bit_pdf(s, g);  // chi-square(2) == exponential, bit-identical
    const double gbar = avg_coded_snr(s);
    const double log_norm = std::lgamma(static_cast<double>(d)) +
                            static_cast<double>(d) * std::log(gbar);
    pdf_grid out = make_grid(g);
    out.values[0] = 0.0;  // gamma^(d-1) with d >= 2 vanishes at the origin
    for (std::size_t i = 1; i < out.size(); ++i) {
        const double gamma = out.gamma_at(i);
        out.values[i] = std::exp(static_cast<double>(d - 1) * std::log(gamma) -
                                 gamma / gbar - log_norm);
    }
    renormalize(out);
    return out;
}

pdf_grid downlink_bit_pdf(const link_scenario& s, const grid_spec& g) {
    if (s.dir != direction::downlink)
        throw std::invalid_argument("downlink_bit_pdf: scenario direction is not downlink");
    const double edge = downlink_support_edge(s);  // throws for K < 2
    const double ratio = s.noise_density / s.energy_per_coded_bit;
    pdf_grid out = make_grid(g);
    for (std::size_t i = 0; i < out.size(); ++i) {
        const double gamma = out.gamma_at(i);
        if (gamma >= edge) continue;  // bounded support, zero beyond the edge
        const double rem = 1.0 - gamma / edge;
        const double x = ratio * gamma / rem;
        out.values[i] = std::exp(-x) * ratio / (rem * rem);
    }
    renormalize(out);
    return out;
}

pdf_grid downlink_gaussian_approx(const link_scenario& s, unsigned d, const grid_spec& g) {
    if (d < 1) throw std::invalid_argument("downlink_gaussian_approx: d must be >= 1");
    const double edge = downlink_support_edge(s);
    const pdf_grid bit = downlink_bit_pdf(s, default_downlink_grid(s, 1));
    const double mu = static_cast<double>(d) * grid_mean(bit);
    const double var = static_cast<double>(d) * grid_variance(bit);
    const double inv2v = 0.5 / var;
    const double top = static_cast<double>(d) * edge;

    pdf_grid out = make_grid(g);
    for (std::size_t i = 0; i < out.size(); ++i) {
        const double gamma = out.gamma_at(i);
        if (gamma <= 0.0 || gamma >= top) continue;  // support is the open interval (0, d*edge)
        out.values[i] = std::exp(-(gamma - mu) * (gamma - mu) * inv2v);
    }
    renormalize(out);  // absorbs both the Gaussian constant and the cut tails
    return out;
}

double uplink_bit_cdf(const link_scenario& s, double gamma) {
    if (gamma <= 0.0) return 0.0;
    return -std::expm1(-gamma / avg_coded_snr(s));
}

double downlink_bit_cdf(const link_scenario& s, double gamma) {
    const double edge = downlink_support_edge(s);
    if (gamma <= 0.0) return 0.0;
    if (gamma >= edge) return 1.0;
    const double ratio = s.noise_density / s.energy_per_coded_bit;
    const double x = ratio * gamma / (1.0 - gamma / edge);
    return -std::expm1(-x);
}

double q_function(double x) {
    return 0.5 * std::erfc(x * 0.70710678118654752440);
}

double pairwise_error_prob(const pdf_grid& pdf) {
    double sum = 0.0;
    for (std::size_t i = 0; i < pdf.size(); ++i) {
        double w = pdf.values[i] * q_function(std::sqrt(2.0 * pdf.gamma_at(i)));
        if (i == 0 || i + 1 == pdf.size()) w *= 0.5;
        sum += w;
    }
    const double p = sum * pdf.step;
    if (p < 0.0) return 0.0;
    if (p > 0.5) return 0.5;
    return p;
}

void validate(const distance_spectrum& sp) {
    if (sp.weights.empty())
        throw std::invalid_argument("distance spectrum: no weights");
    if (sp.weights.begin()->first != sp.free_distance)
        throw std::invalid_argument("distance spectrum: smallest distance must equal free_distance");
    if (sp.free_distance < 1)
        throw std::invalid_argument("distance spectrum: free_distance must be positive");
    if (sp.truncation_distance < sp.free_distance)
        throw std::invalid_argument("distance spectrum: truncation below free distance");
    for (const auto& [d, c] : sp.weights) {
        if (d > sp.truncation_distance)
            throw std::invalid_argument("distance spectrum: weight beyond truncation distance");
        if (!(c > 0.0) || !std::isfinite(c))
            throw std::invalid_argument("distance spectrum: weights must be positive");
    }
}

double union_bound_ber(const distance_spectrum& sp, const std::map<int, double>& p2) {
    validate(sp);
    double bound = 0.0;
    for (const auto& [d, c] : sp.weights) {
        const auto it = p2.find(d);
        if (it == p2.end())
            throw missing_data_error("union bound: missing p2 for distance " + std::to_string(d));
        if (!(it->second >= 0.0))
            throw std::invalid_argument("union bound: p2 must be nonnegative");
        bound += c * it->second;
    }
    return bound;
}

}  // namespace cdma
