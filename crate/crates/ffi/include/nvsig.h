#ifndef NVSIG_H
#define NVSIG_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum NvMode {
  NV_MODE_FULL = 0,
  NV_MODE_REAL_PART = 1,
  NV_MODE_IMAG_PART = 2,
} NvMode;

typedef enum NvStatus {
  NV_STATUS_OK = 0,
  NV_STATUS_NULL_POINTER = 1,
  NV_STATUS_INVALID_ARGUMENT = 2,
  NV_STATUS_OUTSIDE_WINDOW = 3,
  /**
   * A numerical guard tripped (overflow, causality, quadrature, solve).
   */
  NV_STATUS_NUMERICAL = 4,
  /**
   * The output buffer length does not match what the call produces.
   */
  NV_STATUS_BUFFER_SIZE = 5,
  NV_STATUS_IO = 6,
  NV_STATUS_PANIC = 7,
} NvStatus;

/**
 * Convolution kernel with its tail bound.
 */
typedef struct NvKernel NvKernel;

/**
 * Built one-step predictor.
 */
typedef struct NvPredictor NvPredictor;

/**
 * Sampled, exponential-sum or density-backed signal.
 */
typedef struct NvSignal NvSignal;

/**
 * Finitely supported Fourier coefficient sequence.
 */
typedef struct NvWiener NvWiener;

typedef struct NvComplex {
  double re;
  double im;
} NvComplex;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failed call on this thread, or NULL. The pointer stays
 * valid until the next `nv_*` call on the same thread.
 */
const char *nv_last_error(void);

/**
 * sqrt(pi coth pi), the constant of the Sobolev embedding bound.
 */
double nv_embedding_constant(void);

/**
 * Coefficients `coeffs[i]` sit at index `offset + i`.
 *
 * # Safety
 * `coeffs` must point to `len` values (or be NULL with `len == 0`) and `out`
 * must be writable.
 */
enum NvStatus nv_wiener_new(int64_t offset,
                            const struct NvComplex *coeffs,
                            size_t len,
                            struct NvWiener **out);

/**
 * # Safety
 * `w` must come from `nv_wiener_new` and not be freed twice.
 */
void nv_wiener_free(struct NvWiener *w);

/**
 * # Safety
 * Pointers must be valid.
 */
enum NvStatus nv_wiener_norm(const struct NvWiener *w, double *out);

/**
 * # Safety
 * Pointers must be valid.
 */
enum NvStatus nv_wiener_evaluate(const struct NvWiener *w, double omega, struct NvComplex *out);

/**
 * Product of two Wiener functions (coefficient convolution).
 *
 * # Safety
 * Pointers must be valid.
 */
enum NvStatus nv_wiener_product(const struct NvWiener *f,
                                const struct NvWiener *g,
                                struct NvWiener **out);

/**
 * Samples `values[i]` at t = `t_min + i`.
 *
 * # Safety
 * `values` must point to `len` values and `out` must be writable.
 */
enum NvStatus nv_signal_samples(int64_t t_min,
                                const struct NvComplex *values,
                                size_t len,
                                struct NvSignal **out);

/**
 * x(t) = sum_j amplitudes[j] exp(i omegas[j] t).
 *
 * # Safety
 * Both arrays must hold `len` values and `out` must be writable.
 */
enum NvStatus nv_signal_tones(const struct NvComplex *amplitudes,
                              const double *omegas,
                              size_t len,
                              struct NvSignal **out);

/**
 * # Safety
 * `x` must come from an `nv_signal_*` constructor and not be freed twice.
 */
void nv_signal_free(struct NvSignal *x);

/**
 * # Safety
 * Pointers must be valid.
 */
enum NvStatus nv_signal_sample(const struct NvSignal *x, int64_t t, struct NvComplex *out);

/**
 * <X, f> = sum_k x(k) f_k. `truncation` receives the bound on the error of
 * the value (0 for exact signals); it may be NULL.
 *
 * # Safety
 * Pointers must be valid; `truncation` may be NULL.
 */
enum NvStatus nv_pairing(const struct NvSignal *x,
                         const struct NvWiener *f,
                         struct NvComplex *out,
                         double *truncation);

/**
 * Coefficients `coeffs[i]` at k = `offset + i`. A negative `tail_bound`
 * marks the tail as unknown.
 *
 * # Safety
 * `coeffs` must point to `len` values and `out` must be writable.
 */
enum NvStatus nv_kernel_new(int64_t offset,
                            const struct NvComplex *coeffs,
                            size_t len,
                            double tail_bound,
                            struct NvKernel **out);

/**
 * Trapezoid low-pass: 1 on |w| <= p, 0 on |w| >= q, truncated to |k| <= K.
 *
 * # Safety
 * `out` must be writable.
 */
enum NvStatus nv_kernel_trapezoid(double p, double q, size_t half_width, struct NvKernel **out);

/**
 * The causal filter x(t) -> xhat(t) of a predictor.
 *
 * # Safety
 * Pointers must be valid.
 */
enum NvStatus nv_predictor_kernel(const struct NvPredictor *p, struct NvKernel **out);

/**
 * # Safety
 * `h` must come from an `nv_kernel_*` constructor and not be freed twice.
 */
void nv_kernel_free(struct NvKernel *h);

/**
 * Support of the stored coefficients: first index and count.
 *
 * # Safety
 * Pointers must be valid.
 */
enum NvStatus nv_kernel_support(const struct NvKernel *h, int64_t *offset, size_t *len);

/**
 * Copies the coefficients; `len` must equal the count from
 * `nv_kernel_support`.
 *
 * # Safety
 * `out` must point to `len` writable values.
 */
enum NvStatus nv_kernel_coeffs(const struct NvKernel *h, struct NvComplex *out, size_t len);

/**
 * Tail bound, or -1 when unknown.
 *
 * # Safety
 * Pointers must be valid.
 */
enum NvStatus nv_kernel_tail_bound(const struct NvKernel *h, double *out);

/**
 * H(w) = sum_k h_k exp(-i w k).
 *
 * # Safety
 * Pointers must be valid.
 */
enum NvStatus nv_kernel_spectrum(const struct NvKernel *h, double omega, struct NvComplex *out);

/**
 * y(t) = sum_k h_k x(t - k) for t in [lo, hi]. `out` holds hi - lo + 1
 * values. `error_bound` receives tail, rounding and sample error together,
 * or -1 when the kernel tail is unknown; it may be NULL.
 *
 * # Safety
 * Pointers must be valid; `error_bound` may be NULL.
 */
enum NvStatus nv_apply_transfer(const struct NvKernel *h,
                                const struct NvSignal *x,
                                int64_t lo,
                                int64_t hi,
                                struct NvComplex *out,
                                size_t len,
                                double *error_bound);

/**
 * Builds the H_gamma predictor. Fails with `NV_STATUS_NUMERICAL` when the
 * overflow or causality guard trips.
 *
 * # Safety
 * `out` must be writable.
 */
enum NvStatus nv_predictor_new(double gamma,
                               double r,
                               double omega_hat,
                               size_t half_width,
                               size_t n,
                               struct NvPredictor **out);

/**
 * # Safety
 * `p` must come from `nv_predictor_new` and not be freed twice.
 */
void nv_predictor_free(struct NvPredictor *p);

/**
 * xhat(t), the prediction of x(t + 1), for t in [lo, hi]. `tail_error`
 * receives sup|x| times the kernel tail; it may be NULL.
 *
 * # Safety
 * Pointers must be valid; `tail_error` may be NULL.
 */
enum NvStatus nv_predict(const struct NvPredictor *p,
                         const struct NvSignal *x,
                         int64_t lo,
                         int64_t hi,
                         struct NvComplex *out,
                         size_t len,
                         double *tail_error);

/**
 * Exact one-step error of the predictor on the unit tone at w0.
 *
 * # Safety
 * Pointers must be valid.
 */
enum NvStatus nv_predictor_oracle(const struct NvPredictor *p, double omega0, double *out);

/**
 * Recovers x on `missing` from the rest of the signal, given that
 * `intervals` (pairs lo, hi flattened, `n_intervals` pairs) is a spectral
 * gap. Values land in `out` in ascending time order; `out_len` must equal
 * the number of distinct missing times. `residual` and `ambiguous` may be
 * NULL. A `ridge` <= 0 selects the default.
 *
 * # Safety
 * Arrays must hold the stated counts; optional outputs may be NULL.
 */
enum NvStatus nv_recover(const struct NvSignal *x,
                         const int64_t *missing,
                         size_t n_missing,
                         const double *intervals,
                         size_t n_intervals,
                         size_t bank_size,
                         size_t half_width,
                         enum NvMode mode,
                         double ridge,
                         struct NvComplex *out,
                         size_t out_len,
                         double *residual,
                         bool *ambiguous);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* NVSIG_H */
