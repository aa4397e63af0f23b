#include "core/code.hpp"

#include <bit>
#include <cmath>
#include <deque>
#include <limits>
#include <stdexcept>
#include <string>

#include "core/errors.hpp"

namespace cdma {

void validate(const code_spec& c) {
    if (c.rate_inverse < 1)
        throw std::invalid_argument("code: rate_inverse must be >= 1");
    if (c.constraint_length < 1 || c.constraint_length > 16)
        throw std::invalid_argument("code: constraint_length must be in [1, 16]");
    if (c.generators.size() != c.rate_inverse)
        throw std::invalid_argument("code: expected " + std::to_string(c.rate_inverse) +
                                    " generators, got " + std::to_string(c.generators.size()));
    const std::uint32_t limit = 1u << c.constraint_length;
    for (std::uint32_t g : c.generators) {
        if (g == 0) throw std::invalid_argument("code: zero generator");
        if (g >= limit)
            throw std::invalid_argument("code: generator does not fit in constraint length");
    }
}

trellis::trellis(const code_spec& c) {
    validate(c);
    num_states = 1u << (c.constraint_length - 1);
    outputs_per_step = c.rate_inverse;
    next_state.resize(std::size_t{num_states} * 2);
    output_bits.resize(std::size_t{num_states} * 2);
    output_weight.resize(std::size_t{num_states} * 2);
    const std::uint32_t state_mask = num_states - 1;
    for (unsigned s = 0; s < num_states; ++s) {
        for (unsigned u = 0; u < 2; ++u) {
            const std::uint32_t full = (s << 1) | u;  // bit i = u[n-i]
            std::uint32_t out = 0;
            for (unsigned j = 0; j < c.rate_inverse; ++j)
                out |= static_cast<std::uint32_t>(std::popcount(full & c.generators[j]) & 1) << j;
            const std::size_t idx = std::size_t{s} * 2 + u;
            next_state[idx] = static_cast<std::uint16_t>(full & state_mask);
            output_bits[idx] = out;
            output_weight[idx] = static_cast<std::uint8_t>(std::popcount(out));
        }
    }
}

std::vector<std::uint8_t> encode(const trellis& t, const std::vector<std::uint8_t>& bits) {
    const unsigned flush = static_cast<unsigned>(std::countr_zero(t.num_states));
    const unsigned n = t.outputs_per_step;
    std::vector<std::uint8_t> out;
    out.reserve(n * (bits.size() + flush));
    unsigned state = 0;
    auto push_step = [&](unsigned input) {
        const std::size_t idx = std::size_t{state} * 2 + input;
        const std::uint32_t o = t.output_bits[idx];
        for (unsigned j = 0; j < n; ++j) out.push_back(static_cast<std::uint8_t>((o >> j) & 1u));
        state = t.next_state[idx];
    };
    for (std::uint8_t b : bits) {
        if (b > 1) throw std::invalid_argument("encode: input must be 0/1 bits");
        push_step(b);
    }
    for (unsigned i = 0; i < flush; ++i) push_step(0);
    return out;
}

std::vector<std::uint8_t> encode(const code_spec& c, const std::vector<std::uint8_t>& bits) {
    return encode(trellis(c), bits);
}

namespace {

// Reconstructs the information prefix ending at `state` after `steps` steps.
std::vector<std::uint8_t> trace_prefix(const std::vector<std::uint8_t>& decisions,
                                       unsigned num_states, std::size_t steps, unsigned state,
                                       const std::vector<std::uint32_t>& prev_state,
                                       const std::vector<std::uint8_t>& prev_input) {
    std::vector<std::uint8_t> bits(steps);
    unsigned s = state;
    for (std::size_t t = steps; t-- > 0;) {
        const std::uint8_t branch = decisions[t * num_states + s];
        const std::size_t in_idx = std::size_t{s} * 2 + branch;
        bits[t] = prev_input[in_idx];
        s = prev_state[in_idx];
    }
    return bits;
}

}  // namespace

std::vector<std::uint8_t> viterbi_decode(const trellis& t, const std::vector<double>& metrics) {
    const unsigned n = t.outputs_per_step;
    if (metrics.size() % n != 0)
        throw std::invalid_argument("viterbi: metric count must be a multiple of rate_inverse");
    const std::size_t total_steps = metrics.size() / n;
    const unsigned flush = static_cast<unsigned>(std::countr_zero(t.num_states));
    if (total_steps < flush)
        throw std::invalid_argument("viterbi: fewer steps than the flush tail");
    const std::size_t info_len = total_steps - flush;

    // Incoming-branch table: for each state, its two (predecessor, input).
    std::vector<std::uint32_t> prev_state(std::size_t{t.num_states} * 2);
    std::vector<std::uint8_t> prev_input(std::size_t{t.num_states} * 2);
    std::vector<std::uint32_t> prev_out(std::size_t{t.num_states} * 2);
    {
        std::vector<unsigned> fill(t.num_states, 0);
        for (unsigned s = 0; s < t.num_states; ++s)
            for (unsigned u = 0; u < 2; ++u) {
                const unsigned ns = t.next_state[std::size_t{s} * 2 + u];
                const std::size_t slot = std::size_t{ns} * 2 + fill[ns]++;
                prev_state[slot] = s;
                prev_input[slot] = static_cast<std::uint8_t>(u);
                prev_out[slot] = t.output_bits[std::size_t{s} * 2 + u];
            }
    }

    constexpr double kUnreached = -std::numeric_limits<double>::infinity();
    std::vector<double> metric(t.num_states, kUnreached);
    std::vector<double> next_metric(t.num_states);
    metric[0] = 0.0;
    std::vector<std::uint8_t> decisions(total_steps * t.num_states, 0);

    // Correlation of each possible branch output word against the step's
    // soft metrics (positive metric favors bit 0), tabulated once per step.
    const double* m = metrics.data();
    const unsigned table_size = 1u << n;
    if (n > 12) throw std::invalid_argument("viterbi: rate_inverse too large");
    std::vector<double> corr(table_size);

    // Lexicographic comparison of the two tied survivors' information
    // prefixes; returns the branch index holding the smaller one. Only runs
    // on exact floating-point metric ties.
    auto tie_break = [&](std::size_t step, unsigned state) -> std::uint8_t {
        const auto a = trace_prefix(decisions, t.num_states, step, prev_state[std::size_t{state} * 2],
                                    prev_state, prev_input);
        const auto b = trace_prefix(decisions, t.num_states, step,
                                    prev_state[std::size_t{state} * 2 + 1], prev_state, prev_input);
        const std::uint8_t ia = prev_input[std::size_t{state} * 2];
        const std::uint8_t ib = prev_input[std::size_t{state} * 2 + 1];
        for (std::size_t i = 0; i < a.size(); ++i) {
            if (a[i] != b[i]) return a[i] < b[i] ? 0 : 1;
        }
        return ia <= ib ? 0 : 1;
    };

    for (std::size_t step = 0; step < total_steps; ++step) {
        const double* step_m = m + step * n;
        double all_zero = 0.0;
        for (unsigned j = 0; j < n; ++j) all_zero += step_m[j];
        corr[0] = all_zero;
        for (unsigned out = 1; out < table_size; ++out)
            corr[out] = corr[out & (out - 1)] - 2.0 * step_m[std::countr_zero(out)];

        const bool tail = step >= info_len;  // flush steps admit only input 0
        for (unsigned s = 0; s < t.num_states; ++s) {
            double best = kUnreached;
            std::uint8_t choice = 0;
            bool tied = false;
            for (unsigned branch = 0; branch < 2; ++branch) {
                const std::size_t in_idx = std::size_t{s} * 2 + branch;
                if (tail && prev_input[in_idx] != 0) continue;
                const double pm = metric[prev_state[in_idx]];
                if (pm == kUnreached) continue;
                const double cand = pm + corr[prev_out[in_idx]];
                if (cand > best) {
                    best = cand;
                    choice = static_cast<std::uint8_t>(branch);
                    tied = false;
                } else if (cand == best && best != kUnreached) {
                    tied = true;
                }
            }
            if (tied) choice = tie_break(step, s);
            next_metric[s] = best;
            decisions[step * t.num_states + s] = choice;
        }
        metric.swap(next_metric);
    }

    auto full = trace_prefix(decisions, t.num_states, total_steps, 0, prev_state, prev_input);
    full.resize(info_len);
    return full;
}

std::vector<std::uint8_t> viterbi_decode(const code_spec& c, const std::vector<double>& metrics) {
    return viterbi_decode(trellis(c), metrics);
}

distance_spectrum compute_distance_spectrum(const code_spec& c, int max_distance) {
    const trellis t(c);
    if (max_distance < 1)
        throw std::invalid_argument("distance spectrum: max_distance must be >= 1");

    struct node {
        unsigned state;
        int weight;
        std::uint32_t info_weight;
        std::uint32_t length;
    };

    // Any detour on a non-catastrophic code gains at least one unit of
    // weight per num_states steps, so a weight-bounded detour has bounded
    // length; exceeding the bound reveals a zero-weight loop.
    const std::uint32_t max_length =
        static_cast<std::uint32_t>(max_distance + 2) * t.num_states + c.constraint_length;
    constexpr std::size_t kExpansionBudget = 200'000'000;

    std::map<int, double> weights;
    std::deque<node> queue;

    // Detours leave state 0 with input 1 (input 0 never leaves).
    {
        const std::size_t idx = 0 * 2 + 1;
        const int w0 = t.output_weight[idx];
        if (t.next_state[idx] == 0) {
            if (w0 <= max_distance && w0 >= 1) weights[w0] += 1.0;
        } else if (w0 <= max_distance) {
            queue.push_back({t.next_state[idx], w0, 1, 1});
        }
    }

    std::size_t expansions = 0;
    while (!queue.empty()) {
        const node cur = queue.front();
        queue.pop_front();
        if (++expansions > kExpansionBudget)
            throw search_budget_error("distance spectrum: expansion budget exceeded");
        if (cur.length > max_length)
            throw search_budget_error(
                "distance spectrum: path outlived the weight bound (zero-weight loop; "
                "catastrophic encoder?)");
        for (unsigned input = 0; input < 2; ++input) {
            const std::size_t idx = std::size_t{cur.state} * 2 + input;
            const int w = cur.weight + t.output_weight[idx];
            if (w > max_distance) continue;
            const std::uint32_t iw = cur.info_weight + input;
            const unsigned ns = t.next_state[idx];
            if (ns == 0) {
                // Merged back: one complete first-event detour.
                if (w >= 1) weights[w] += static_cast<double>(iw);
            } else {
                queue.push_back({ns, w, iw, cur.length + 1});
            }
        }
    }

    if (weights.empty())
        throw std::invalid_argument(
            "distance spectrum: no detour within max_distance (below free distance)");

    distance_spectrum sp;
    sp.free_distance = weights.begin()->first;
    sp.weights = std::move(weights);
    sp.truncation_distance = max_distance;
    return sp;
}

}  // namespace cdma
