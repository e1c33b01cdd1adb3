#ifndef MICROGARCH_H
#define MICROGARCH_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

// Bits of `MgFacts::present`.
#define MG_FACT_NEGATIVE_SKEW 1

#define MG_FACT_EXCESS_KURTOSIS (1 << 1)

#define MG_FACT_NON_NORMAL (1 << 2)

#define MG_FACT_VOLATILITY_CLUSTERING (1 << 3)

typedef enum MgStatus {
  MG_STATUS_OK = 0,
  MG_STATUS_NULL_POINTER = 1,
  MG_STATUS_INVALID_ARGUMENT = 2,
  MG_STATUS_NON_STATIONARY = 3,
  MG_STATUS_DEGENERATE_DATA = 4,
  MG_STATUS_BUFFER_TOO_SMALL = 5,
  MG_STATUS_PANIC = 6,
} MgStatus;

// Opaque micro parameter set.
typedef struct MgParams MgParams;

// Opaque simulated return series.
typedef struct MgSeries MgSeries;

// GARCH(1,1) coefficients for one step.
typedef struct MgGarch {
  double omega;
  double f;
  double alpha;
  double beta;
} MgGarch;

// Stylized-facts statistics with one-sided p-values.
typedef struct MgFacts {
  uintptr_t sample_size;
  double skewness;
  double skewness_p;
  double kurtosis;
  double kurtosis_p;
  double ks;
  double ks_p;
  double sq_autocorr1;
  double sq_autocorr1_p;
  // Bitmask of `MG_FACT_*`.
  uint32_t present;
} MgFacts;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message for the last failed call on this thread, or NULL. The pointer
// stays valid until the next failing call on the same thread.
const char *mg_last_error(void);

// Identifier of the random stream used by [`mg_simulate`]. Static string.
const char *mg_rng_id(void);

// Create a validated parameter set with the default `g` (log) and `h`
// (AR, 0.1) functions.
//
// # Safety
// `out` must be a valid pointer to writable storage for one handle.
enum MgStatus mg_params_new(double rho,
                            double k,
                            double s_liquidity,
                            double p1,
                            double p2,
                            double lambda,
                            double gamma,
                            struct MgParams **out);

// Reference parameters: rho=4, k=0.4, S=1, p1=0.2, p2=0.4, lambda=gamma=1.2.
//
// # Safety
// `out` must be a valid pointer to writable storage for one handle.
enum MgStatus mg_params_default(struct MgParams **out);

// Replace the `g` and `h` function tags (`"log"`/`"identity"`,
// `"ar"`/`"ar:<coef>"`/`"zero"`). A NULL tag leaves that function unchanged.
//
// # Safety
// `params` must be a live handle; tags must be NULL or NUL-terminated strings.
enum MgStatus mg_params_set_functions(struct MgParams *params,
                                      const char *g_tag,
                                      const char *h_tag);

// # Safety
// `params` must be NULL or a handle from `mg_params_*` not yet freed.
void mg_params_free(struct MgParams *params);

// `1 - (alpha + beta)` of the implied GARCH; NaN for a NULL handle.
//
// # Safety
// `params` must be NULL or a live handle.
double mg_stationarity_margin(const struct MgParams *params);

// GARCH coefficients implied at the lagged state `(x, u, sigma)`.
//
// # Safety
// `params` must be a live handle and `out` writable.
enum MgStatus mg_micro_to_garch(const struct MgParams *params,
                                double x_prev,
                                double u_prev,
                                double sigma_prev,
                                struct MgGarch *out);

// One GARCH(1,1) step. Writes the return, the new residual `u`, and the
// new conditional variance.
//
// # Safety
// `garch` must be readable; the three out pointers writable.
enum MgStatus mg_garch_step(const struct MgGarch *garch,
                            double u_prev,
                            double sigma2_prev,
                            double eps,
                            double *out_r,
                            double *out_u,
                            double *out_sigma2);

// Run the market simulation. `length` kept steps after `burn_in`
// discarded ones.
//
// # Safety
// `params` must be a live handle and `out` writable.
enum MgStatus mg_simulate(const struct MgParams *params,
                          uintptr_t length,
                          uintptr_t burn_in,
                          uint64_t seed,
                          struct MgSeries **out);

// Number of returns; 0 for NULL.
//
// # Safety
// `series` must be NULL or a live handle.
uintptr_t mg_series_len(const struct MgSeries *series);

// Kept steps with a negative buy or sell volume; 0 for NULL.
//
// # Safety
// `series` must be NULL or a live handle.
uintptr_t mg_series_negative_volume_steps(const struct MgSeries *series);

// Copy the returns into `buf`, which must hold at least
// `mg_series_len(series)` doubles.
//
// # Safety
// `series` must be a live handle and `buf` writable for `cap` doubles.
enum MgStatus mg_series_returns(const struct MgSeries *series, double *buf, uintptr_t cap);

// # Safety
// `series` must be NULL or a handle from [`mg_simulate`] not yet freed.
void mg_series_free(struct MgSeries *series);

// Stylized-facts statistics of `len` returns at the given significance.
//
// # Safety
// `returns` must be readable for `len` doubles and `out` writable.
enum MgStatus mg_stylized_facts(const double *returns,
                                uintptr_t len,
                                double significance,
                                struct MgFacts *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* MICROGARCH_H */
