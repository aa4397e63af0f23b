#pragma once

#include "core/pdf.hpp"

namespace cdma {

// Density of the sum of two independent variables sampled on compatible
// grids (equal step, gamma_min = 0). Trapezoid-consistent discrete scheme:
// each interior output sample is the exact trapezoid rule for the continuous
// convolution integral; the zero-width endpoints are identically 0.
//
// Throws step_mismatch_error on incompatible grids and drift_error when the
// pre-normalization integral strays from 1 by >= 1e-3 (inadequate grid).
// The result is renormalized. Output support [0, a.max + b.max].
pdf_grid convolve_pdfs(const pdf_grid& a, const pdf_grid& b);

// d-fold self-convolution via repeated squaring (O(log d) convolutions).
pdf_grid self_convolve(const pdf_grid& base, unsigned d);

// Exact d-fold downlink density: numeric self-convolution of the per-bit
// density on its default grid. Support [0, d * edge], step edge/400.
pdf_grid downlink_combined_pdf(const link_scenario& s, unsigned d);

}  // namespace cdma
