#ifndef PATHSPECTRA_H
#define PATHSPECTRA_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result of every call. The numeric values match the command-line exit
 * codes where the two overlap.
 */
typedef enum PsStatus {
  PS_STATUS_OK = 0,
  PS_STATUS_USAGE = 2,
  PS_STATUS_DOMAIN = 3,
  PS_STATUS_SINGULARITY = 4,
  PS_STATUS_IO = 5,
  PS_STATUS_NULL_POINTER = 6,
  PS_STATUS_PANIC = 7,
} PsStatus;

typedef enum PsSystem {
  PS_SYSTEM_FREE_LINE = 0,
  PS_SYSTEM_CIRCLE = 1,
  PS_SYSTEM_HARD_WALL = 2,
  PS_SYSTEM_SQUARE_WELL = 3,
  PS_SYSTEM_HARMONIC_OSCILLATOR = 4,
} PsSystem;

/**
 * A sampled path distribution.
 */
typedef struct PsDistribution PsDistribution;

/**
 * An eigenstate of one of the supported systems.
 */
typedef struct PsState PsState;

typedef struct PsComplex {
  double re;
  double im;
} PsComplex;

typedef struct PsMoments {
  double norm;
  double mean;
  double peak_location;
  double fwhm;
  double max_im_ratio;
} PsMoments;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the most recent failed call on this thread, or an empty
 * string. The pointer stays valid until the next call on the same thread.
 */
const char *ps_last_error(void);

/**
 * Creates an eigenstate. `param` is the circle radius, the well width or
 * the oscillator frequency (ignored for the line and half-line).
 * `quantum` is k, ℓ or n as the system requires.
 *
 * # Safety
 * `out` must be a valid pointer to writable storage for one pointer.
 */
enum PsStatus ps_state_new(enum PsSystem system,
                           double hbar,
                           double mass,
                           double param,
                           double quantum,
                           struct PsState **out);

/**
 * Releases a state. Null is ignored.
 *
 * # Safety
 * `state` must come from [`ps_state_new`] and not be used afterwards.
 */
void ps_state_free(struct PsState *state);

/**
 * # Safety
 * Pointers must be valid or null.
 */
enum PsStatus ps_state_energy(const struct PsState *state, double *out);

/**
 * ψ(x).
 *
 * # Safety
 * Pointers must be valid or null.
 */
enum PsStatus ps_eigenfunction(const struct PsState *state, double x, struct PsComplex *out);

/**
 * K(x_f, T; x₀, 0) of the state's system.
 *
 * # Safety
 * Pointers must be valid or null.
 */
enum PsStatus ps_propagator(const struct PsState *state,
                            double x0,
                            double xf,
                            double t,
                            struct PsComplex *out);

/**
 * ∫_a^b e^{iγu²} du.
 *
 * # Safety
 * `out` must be valid or null.
 */
enum PsStatus ps_gaussian_phase_integral(double a, double b, double gamma, struct PsComplex *out);

/**
 * The p_c integrand at one point.
 *
 * # Safety
 * Pointers must be valid or null.
 */
enum PsStatus ps_integrand(const struct PsState *state,
                           double p_c,
                           double x_f,
                           double t,
                           struct PsComplex *out);

/**
 * ΔF/(2w) at one p_c with the default grids.
 *
 * # Safety
 * Pointers must be valid or null.
 */
enum PsStatus ps_window_average(const struct PsState *state,
                                double p_c,
                                double x_f,
                                double t,
                                struct PsComplex *out);

/**
 * Computes 𝒫(p_c, T), or its period average when `time_averaged` is
 * nonzero (oscillator only). `dp_c <= 0` keeps the default spacing.
 *
 * # Safety
 * Pointers must be valid or null.
 */
enum PsStatus ps_distribution_new(const struct PsState *state,
                                  double t,
                                  int32_t time_averaged,
                                  double dp_c,
                                  struct PsDistribution **out);

/**
 * Releases a distribution. Null is ignored.
 *
 * # Safety
 * `dist` must come from [`ps_distribution_new`] and not be used afterwards.
 */
void ps_distribution_free(struct PsDistribution *dist);

/**
 * Number of p_c samples.
 *
 * # Safety
 * Pointers must be valid or null.
 */
enum PsStatus ps_distribution_len(const struct PsDistribution *dist, size_t *out);

/**
 * Copies up to `capacity` samples into `p_c` and `values`.
 *
 * # Safety
 * `p_c` and `values` must each have room for `capacity` elements.
 */
enum PsStatus ps_distribution_copy(const struct PsDistribution *dist,
                                   double *p_c,
                                   struct PsComplex *values,
                                   size_t capacity);

/**
 * Norm, mean, peak, width and imaginary-part ratio.
 *
 * # Safety
 * Pointers must be valid or null.
 */
enum PsStatus ps_distribution_moments(const struct PsDistribution *dist, struct PsMoments *out);

/**
 * Library version as a static NUL-terminated string.
 */
const char *ps_version(void);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* PATHSPECTRA_H */
