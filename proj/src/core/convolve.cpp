#include "core/convolve.hpp"

#include <fftw3.h>

#include <cmath>
#include <cstring>
#include <mutex>
#include <stdexcept>
#include <string>
#include <vector>

#include "core/errors.hpp"

namespace cdma {

namespace {

// Direct O(n*m) linear convolution; preferred for small sizes where it is
// both faster than planning an FFT and free of rounding noise.
std::vector<double> convolve_direct(const std::vector<double>& a, const std::vector<double>& b) {
    std::vector<double> out(a.size() + b.size() - 1, 0.0);
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double ai = a[i];
        if (ai == 0.0) continue;
        for (std::size_t j = 0; j < b.size(); ++j) out[i + j] += ai * b[j];
    }
    return out;
}

// Smallest 5-smooth number >= n; FFTW handles these sizes efficiently.
std::size_t next_fast_size(std::size_t n) {
    for (;; ++n) {
        std::size_t m = n;
        for (std::size_t p : {2u, 3u, 5u})
            while (m % p == 0) m /= p;
        if (m == 1) return n;
    }
}

// The FFTW planner is not thread-safe; executing a plan is.
std::mutex fftw_planner_mutex;

std::vector<double> convolve_fft(const std::vector<double>& a, const std::vector<double>& b) {
    const std::size_t out_len = a.size() + b.size() - 1;
    const std::size_t n = next_fast_size(out_len);
    const std::size_t nc = n / 2 + 1;

    double* ta = fftw_alloc_real(n);
    double* tb = fftw_alloc_real(n);
    fftw_complex* fa = fftw_alloc_complex(nc);
    fftw_complex* fb = fftw_alloc_complex(nc);
    if (!ta || !tb || !fa || !fb) throw std::bad_alloc();

    std::memset(ta, 0, n * sizeof(double));
    std::memset(tb, 0, n * sizeof(double));
    std::memcpy(ta, a.data(), a.size() * sizeof(double));
    std::memcpy(tb, b.data(), b.size() * sizeof(double));

    fftw_plan pa, pb, pinv;
    {
        std::lock_guard<std::mutex> lock(fftw_planner_mutex);
        pa = fftw_plan_dft_r2c_1d(static_cast<int>(n), ta, fa, FFTW_ESTIMATE);
        pb = fftw_plan_dft_r2c_1d(static_cast<int>(n), tb, fb, FFTW_ESTIMATE);
        pinv = fftw_plan_dft_c2r_1d(static_cast<int>(n), fa, ta, FFTW_ESTIMATE);
    }
    fftw_execute(pa);
    fftw_execute(pb);
    const double scale = 1.0 / static_cast<double>(n);
    for (std::size_t i = 0; i < nc; ++i) {
        const double re = fa[i][0] * fb[i][0] - fa[i][1] * fb[i][1];
        const double im = fa[i][0] * fb[i][1] + fa[i][1] * fb[i][0];
        fa[i][0] = re * scale;
        fa[i][1] = im * scale;
    }
    fftw_execute(pinv);

    std::vector<double> out(ta, ta + out_len);
    {
        std::lock_guard<std::mutex> lock(fftw_planner_mutex);
        fftw_destroy_plan(pa);
        fftw_destroy_plan(pb);
        fftw_destroy_plan(pinv);
    }
    fftw_free(ta);
    fftw_free(tb);
    fftw_free(fa);
    fftw_free(fb);
    return out;
}

}  // namespace

pdf_grid convolve_pdfs(const pdf_grid& a, const pdf_grid& b) {
    if (a.size() < 2 || b.size() < 2)
        throw std::invalid_argument("convolve_pdfs: grids need at least two samples");
    if (a.gamma_min != 0.0 || b.gamma_min != 0.0)
        throw step_mismatch_error("convolve_pdfs: grids must start at gamma = 0");
    const double h = a.step;
    if (std::abs(a.step - b.step) > 1e-12 * std::max(a.step, b.step))
        throw step_mismatch_error("convolve_pdfs: grid steps differ (" + std::to_string(a.step) +
                                  " vs " + std::to_string(b.step) + ")");

    // Halving the endpoint samples makes h * (wa (*) wb)[k] the exact
    // trapezoid rule for integral a(t) b(gamma_k - t) dt over [0, gamma_k].
    std::vector<double> wa = a.values;
    std::vector<double> wb = b.values;
    wa.front() *= 0.5;
    wa.back() *= 0.5;
    wb.front() *= 0.5;
    wb.back() *= 0.5;

    const double direct_cost = static_cast<double>(wa.size()) * static_cast<double>(wb.size());
    std::vector<double> conv =
        direct_cost <= 2.5e7 ? convolve_direct(wa, wb) : convolve_fft(wa, wb);

    pdf_grid out;
    out.gamma_min = 0.0;
    out.step = h;
    out.values = std::move(conv);
    for (double& v : out.values) {
        v *= h;
        if (v < 0.0) v = 0.0;  // FFT rounding noise, ~1e-13 of peak
    }
    // Both endpoints integrate over a zero-width range.
    out.values.front() = 0.0;
    out.values.back() = 0.0;

    const double integral = trapezoid_integral(out);
    const double drift = std::abs(integral - 1.0);
    if (drift >= 1e-3)
        throw drift_error("convolve_pdfs: integral drift " + std::to_string(drift) +
                              " signals an inadequate grid",
                          drift);
    renormalize(out);
    return out;
}

pdf_grid downlink_combined_pdf(const link_scenario& s, unsigned d) {
    return self_convolve(downlink_bit_pdf(s, default_downlink_grid(s, 1)), d);
}

pdf_grid self_convolve(const pdf_grid& base, unsigned d) {
    if (d < 1) throw std::invalid_argument("self_convolve: d must be >= 1");
    pdf_grid acc;
    bool have = false;
    // Process the exponent bits from the most significant down.
    for (int bit = 31; bit >= 0; --bit) {
        if (have) acc = convolve_pdfs(acc, acc);
        if ((d >> bit) & 1u) {
            if (have)
                acc = convolve_pdfs(acc, base);
            else {
                acc = base;
                have = true;
            }
        }
    }
    return acc;
}

}  // namespace cdma
