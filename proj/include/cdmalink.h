/* C interface to the coded-CDMA link laboratory.
 *
 * All functions returning cdmalink_status follow one pattern: outputs are
 * written through out-parameters, CDMALINK_OK means every output is valid,
 * and any other status leaves outputs untouched with a human-readable
 * explanation available from cdmalink_last_error() (thread-local). Handles
 * returned through *_create/_load functions are owned by the caller and
 * released with the matching *_destroy; destroy functions accept NULL.
 */
#ifndef CDMALINK_H
#define CDMALINK_H

#include <stddef.h>
#include <stdint.h>

#if defined(CDMALINK_BUILD)
#define CDMALINK_API __attribute__((visibility("default")))
#else
#define CDMALINK_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum cdmalink_status {
    CDMALINK_OK = 0,
    CDMALINK_EINVAL = 1,    /* invalid argument or NULL pointer */
    CDMALINK_EDOMAIN = 2,   /* quantity undefined for these parameters */
    CDMALINK_ESTEP = 3,     /* convolution grids are incompatible */
    CDMALINK_EDRIFT = 4,    /* convolution integral drifted, grid inadequate */
    CDMALINK_EBUDGET = 5,   /* spectrum search exceeded its path budget */
    CDMALINK_EPARSE = 6,    /* scenario file is malformed */
    CDMALINK_EMISSING = 7,  /* required configuration data is absent */
    CDMALINK_EBITS = 8,     /* simulation would test too few bits */
    CDMALINK_EIO = 9,       /* file could not be opened or read */
    CDMALINK_EINTERNAL = 10 /* unexpected internal failure */
} cdmalink_status;

enum { CDMALINK_UPLINK = 0, CDMALINK_DOWNLINK = 1, CDMALINK_BOTH = 2 };
enum {
    CDMALINK_CHANNEL_AWGN = 0,
    CDMALINK_CHANNEL_RAYLEIGH_IID = 1,
    CDMALINK_CHANNEL_RAYLEIGH_BLOCK = 2
};

/* A single-link operating point. direction is CDMALINK_UPLINK or
 * CDMALINK_DOWNLINK; energies are linear (not dB). */
typedef struct cdmalink_scenario {
    uint32_t num_users;
    double energy_per_coded_bit;
    double noise_density;
    int direction;
} cdmalink_scenario;

typedef struct cdmalink_pdf cdmalink_pdf;
typedef struct cdmalink_spectrum cdmalink_spectrum;
typedef struct cdmalink_code cdmalink_code;
typedef struct cdmalink_config cdmalink_config;
typedef struct cdmalink_empirical cdmalink_empirical;
typedef struct cdmalink_report cdmalink_report;

typedef struct cdmalink_ber_result {
    double info_ebn0_db;
    unsigned long long errors;
    unsigned long long bits;
    double ber;
    double ci_lo; /* 95% Wilson interval */
    double ci_hi;
} cdmalink_ber_result;

CDMALINK_API const char* cdmalink_version(void);
CDMALINK_API const char* cdmalink_status_string(cdmalink_status s);
/* Message describing this thread's most recent failure ("" after success). */
CDMALINK_API const char* cdmalink_last_error(void);

/* ---- analytic quantities ---- */

/* Gaussian upper-tail probability Q(x). */
CDMALINK_API double cdmalink_q_function(double x);

/* Equivalent average SNR per coded bit, xi / (2(K-1) xi + N0). */
CDMALINK_API cdmalink_status cdmalink_avg_coded_snr(const cdmalink_scenario* sc, double* out);

/* Upper edge of the downlink per-coded-bit SNR support, 1/(2(K-1)); needs
 * num_users >= 2. */
CDMALINK_API cdmalink_status cdmalink_downlink_edge(const cdmalink_scenario* sc, double* out);

/* pdf constructors sample a density on a uniform grid starting at 0 and
 * renormalize it to unit trapezoid integral. gamma_max <= 0 together with
 * intervals == 0 selects the built-in default grid. */
CDMALINK_API cdmalink_status cdmalink_uplink_bit_pdf(const cdmalink_scenario* sc,
                                                     double gamma_max, size_t intervals,
                                                     cdmalink_pdf** out);
CDMALINK_API cdmalink_status cdmalink_uplink_combined_pdf(const cdmalink_scenario* sc,
                                                          unsigned d, double gamma_max,
                                                          size_t intervals, cdmalink_pdf** out);
CDMALINK_API cdmalink_status cdmalink_downlink_bit_pdf(const cdmalink_scenario* sc,
                                                       double gamma_max, size_t intervals,
                                                       cdmalink_pdf** out);
/* Exact d-fold downlink density by numeric self-convolution on the default
 * per-bit grid (step edge/400). */
CDMALINK_API cdmalink_status cdmalink_downlink_combined_pdf(const cdmalink_scenario* sc,
                                                            unsigned d, cdmalink_pdf** out);
/* Moment-matched Gaussian approximation of the d-fold downlink density,
 * truncated to (0, d*edge). */
CDMALINK_API cdmalink_status cdmalink_downlink_gaussian_pdf(const cdmalink_scenario* sc,
                                                            unsigned d, double gamma_max,
                                                            size_t intervals,
                                                            cdmalink_pdf** out);

/* Raw closed-form d-fold uplink density value at one point (no grid, no
 * renormalization): the chi-square(2d) law with per-bit mean avg_coded_snr. */
CDMALINK_API cdmalink_status cdmalink_uplink_combined_density(const cdmalink_scenario* sc,
                                                              unsigned d, double gamma,
                                                              double* out);

/* Closed-form per-bit SNR CDFs. */
CDMALINK_API cdmalink_status cdmalink_uplink_bit_cdf(const cdmalink_scenario* sc, double gamma,
                                                     double* out);
CDMALINK_API cdmalink_status cdmalink_downlink_bit_cdf(const cdmalink_scenario* sc, double gamma,
                                                       double* out);

/* Density of the sum of two independent variables (grids must share the
 * step and start at 0). */
CDMALINK_API cdmalink_status cdmalink_convolve_pdfs(const cdmalink_pdf* a, const cdmalink_pdf* b,
                                                    cdmalink_pdf** out);
CDMALINK_API cdmalink_status cdmalink_self_convolve(const cdmalink_pdf* p, unsigned d,
                                                    cdmalink_pdf** out);

/* Integral of pdf(gamma) Q(sqrt(2 gamma)) over the grid, clamped to
 * [0, 1/2]: the pairwise error probability under this SNR density. */
CDMALINK_API cdmalink_status cdmalink_pairwise_error_prob(const cdmalink_pdf* p, double* out);

/* ---- pdf accessors ---- */

CDMALINK_API size_t cdmalink_pdf_size(const cdmalink_pdf* p); /* 0 for NULL */
CDMALINK_API double cdmalink_pdf_step(const cdmalink_pdf* p);
CDMALINK_API double cdmalink_pdf_gamma_min(const cdmalink_pdf* p);
/* Copies all samples; capacity must be at least cdmalink_pdf_size(p). */
CDMALINK_API cdmalink_status cdmalink_pdf_values(const cdmalink_pdf* p, double* buf,
                                                 size_t capacity);
CDMALINK_API cdmalink_status cdmalink_pdf_integral(const cdmalink_pdf* p, double* out);
CDMALINK_API cdmalink_status cdmalink_pdf_mean(const cdmalink_pdf* p, double* out);
CDMALINK_API cdmalink_status cdmalink_pdf_variance(const cdmalink_pdf* p, double* out);
CDMALINK_API void cdmalink_pdf_destroy(cdmalink_pdf* p);

/* ---- convolutional code ---- */

/* Rate-1/n feedforward code; generators are bit masks (one per output, bit 0
 * taps the newest bit), each nonzero and below 2^constraint_length. */
CDMALINK_API cdmalink_status cdmalink_code_create(unsigned rate_inverse,
                                                  unsigned constraint_length,
                                                  const uint32_t* generators, size_t count,
                                                  cdmalink_code** out);
CDMALINK_API void cdmalink_code_destroy(cdmalink_code* c);

/* Coded length for a zero-terminated block of info_bits information бits. */
CDMALINK_API cdmalink_status cdmalink_encoded_length(const cdmalink_code* c, size_t info_bits,
                                                     size_t* out);
/* Encode 0/1 bytes; writes rate_inverse*(count + constraint_length - 1)
 * bits. capacity must cover that length. */
CDMALINK_API cdmalink_status cdmalink_encode(const cdmalink_code* c, const uint8_t* bits,
                                             size_t count, uint8_t* out, size_t capacity,
                                             size_t* out_len);
/* Maximum-likelihood sequence decoding of soft metrics (positive = bit 0,
 * one metric per coded bit; exact ties resolve to the lexicographically
 * smaller information sequence). */
CDMALINK_API cdmalink_status cdmalink_viterbi_decode(const cdmalink_code* c,
                                                     const double* metrics, size_t count,
                                                     uint8_t* out, size_t capacity,
                                                     size_t* out_len);
/* Exact first-event distance spectrum up to max_distance. */
CDMALINK_API cdmalink_status cdmalink_code_spectrum(const cdmalink_code* c, int max_distance,
                                                    cdmalink_spectrum** out);

/* ---- distance spectrum ---- */

/* Entries are (distance, information-bit weight) pairs, distances unique. */
CDMALINK_API cdmalink_status cdmalink_spectrum_create(const int* distances,
                                                      const double* weights, size_t count,
                                                      cdmalink_spectrum** out);
CDMALINK_API size_t cdmalink_spectrum_size(const cdmalink_spectrum* sp);
CDMALINK_API cdmalink_status cdmalink_spectrum_entry(const cdmalink_spectrum* sp, size_t index,
                                                     int* distance, double* weight);
CDMALINK_API cdmalink_status cdmalink_spectrum_free_distance(const cdmalink_spectrum* sp,
                                                             int* out);
/* Union bound: sum of weight_d * p2[d] over the spectrum. p2 maps
 * distances[i] -> p2[i] and must cover every spectrum entry. */
CDMALINK_API cdmalink_status cdmalink_union_bound(const cdmalink_spectrum* sp,
                                                  const int* distances, const double* p2,
                                                  size_t count, double* out);
CDMALINK_API void cdmalink_spectrum_destroy(cdmalink_spectrum* sp);

/* ---- scenario configuration ---- */

CDMALINK_API cdmalink_status cdmalink_config_load(const char* path, cdmalink_config** out);
CDMALINK_API cdmalink_status cdmalink_config_parse(const char* text, cdmalink_config** out);
CDMALINK_API void cdmalink_config_destroy(cdmalink_config* cfg);

/* Overrides the configured seed (flag/environment precedence is the
 * caller's business). */
CDMALINK_API cdmalink_status cdmalink_config_set_seed(cdmalink_config* cfg, uint64_t seed);
CDMALINK_API cdmalink_status cdmalink_config_seed(const cdmalink_config* cfg, uint64_t* out);
/* CDMALINK_UPLINK / CDMALINK_DOWNLINK / CDMALINK_BOTH. */
CDMALINK_API cdmalink_status cdmalink_config_direction(const cdmalink_config* cfg, int* out);
CDMALINK_API cdmalink_status cdmalink_config_users(const cdmalink_config* cfg, uint32_t* out);
CDMALINK_API cdmalink_status cdmalink_config_trials(const cdmalink_config* cfg, uint32_t* out);
CDMALINK_API cdmalink_status cdmalink_config_ebn0_db(const cdmalink_config* cfg, double* out);
/* Per-coded-bit operating point for an information-bit Eb/N0 (NaN selects
 * the file's own point). */
CDMALINK_API cdmalink_status cdmalink_config_coded_ebn0_db(const cdmalink_config* cfg,
                                                           double info_ebn0_db, double* out);
CDMALINK_API int cdmalink_config_has_code(const cdmalink_config* cfg); /* 0/1 */
/* Combining order for pdf output (explicit key, else free distance, else 1). */
CDMALINK_API cdmalink_status cdmalink_config_pdf_diversity(const cdmalink_config* cfg,
                                                           unsigned* out);
/* Configured output paths; "" when unset, NULL only for a NULL config. The
 * storage lives inside the config handle. */
CDMALINK_API const char* cdmalink_config_pdf_csv(const cdmalink_config* cfg);
CDMALINK_API const char* cdmalink_config_ber_csv(const cdmalink_config* cfg);
/* Canonical "key = value" description of the resolved configuration, one
 * entry per line; cached inside the handle. */
CDMALINK_API const char* cdmalink_config_describe(cdmalink_config* cfg);

/* Operating point as a scenario struct. info_ebn0_db may be NaN (file's
 * point); direction must be CDMALINK_UPLINK or CDMALINK_DOWNLINK. */
CDMALINK_API cdmalink_status cdmalink_config_scenario(const cdmalink_config* cfg,
                                                      double info_ebn0_db, int direction,
                                                      cdmalink_scenario* out);
/* Distance spectrum from the configuration (explicit pairs, or computed
 * from the generators; uncoded yields the trivial {1: 1}). */
CDMALINK_API cdmalink_status cdmalink_config_spectrum(const cdmalink_config* cfg,
                                                      cdmalink_spectrum** out);

/* ---- Monte-Carlo ---- */

/* Histogram of sampled per-coded-bit SNR draws. */
CDMALINK_API cdmalink_status cdmalink_estimate_snr_pdf(const cdmalink_config* cfg, int direction,
                                                       cdmalink_empirical** out);
CDMALINK_API size_t cdmalink_empirical_size(const cdmalink_empirical* h);
CDMALINK_API double cdmalink_empirical_step(const cdmalink_empirical* h);
CDMALINK_API cdmalink_status cdmalink_empirical_density(const cdmalink_empirical* h, double* buf,
                                                        size_t capacity);
CDMALINK_API cdmalink_status cdmalink_empirical_counts(const cdmalink_empirical* h,
                                                       uint64_t* buf, size_t capacity);
CDMALINK_API void cdmalink_empirical_destroy(cdmalink_empirical* h);

/* Kolmogorov-Smirnov distance between sampled SNR draws and the closed-form
 * CDF for that link. */
CDMALINK_API cdmalink_status cdmalink_snr_ks_distance(const cdmalink_config* cfg, int direction,
                                                      double* out);

/* Bit-true link simulation at an operating point (NaN: file's point). */
CDMALINK_API cdmalink_status cdmalink_estimate_ber(const cdmalink_config* cfg,
                                                   double info_ebn0_db, int direction,
                                                   cdmalink_ber_result* out);
/* Union-bound BER at an operating point: deterministic pairwise terms on
 * AWGN, SNR-density integrals on fading channels. */
CDMALINK_API cdmalink_status cdmalink_bound_ber(const cdmalink_config* cfg, double info_ebn0_db,
                                                int direction, double* out);
/* Mean received interference power per complex sample (desired signal and
 * noise muted); expected 2(K-1)xi. */
CDMALINK_API cdmalink_status cdmalink_measure_interference_variance(const cdmalink_config* cfg,
                                                                    uint64_t num_symbols,
                                                                    double* out);

/* Named self-checks of the simulation machinery against the analytic model. */
CDMALINK_API cdmalink_status cdmalink_validate(const cdmalink_config* cfg,
                                               cdmalink_report** out);
CDMALINK_API size_t cdmalink_report_size(const cdmalink_report* r);
CDMALINK_API const char* cdmalink_report_name(const cdmalink_report* r, size_t index);
CDMALINK_API int cdmalink_report_passed(const cdmalink_report* r, size_t index); /* -1 bad index */
CDMALINK_API cdmalink_status cdmalink_report_measured(const cdmalink_report* r, size_t index,
                                                      double* out);
CDMALINK_API cdmalink_status cdmalink_report_threshold(const cdmalink_report* r, size_t index,
                                                       double* out);
CDMALINK_API const char* cdmalink_report_detail(const cdmalink_report* r, size_t index);
CDMALINK_API void cdmalink_report_destroy(cdmalink_report* r);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* CDMALINK_H */
