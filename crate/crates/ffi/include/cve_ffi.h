/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#ifndef CVE_FFI_H
#define CVE_FFI_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result codes; the nonzero values match the `cve` exit codes.
 */
typedef enum CveStatus {
  CVE_STATUS_OK = 0,
  /**
   * A result did not fit in the caller's buffer.
   */
  CVE_STATUS_BUFFER_TOO_SMALL = 1,
  CVE_STATUS_INVALID_ARGUMENT = 2,
  CVE_STATUS_DIVERGENT = 3,
  CVE_STATUS_INVARIANT_VIOLATION = 4,
  CVE_STATUS_DEGENERATE_REDUCTION = 5,
  CVE_STATUS_FORMULA_MISMATCH = 6,
  /**
   * A Rust panic was caught at the boundary.
   */
  CVE_STATUS_INTERNAL = 7,
} CveStatus;

/**
 * A beam splitter acting on two squeezed vacua.
 */
typedef struct CveCircuit CveCircuit;

/**
 * Reduced single-mode state of a two-mode Gaussian.
 */
typedef struct CveReducedState CveReducedState;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failed call on this thread, or null. The pointer
 * stays valid until the next call into this library on the same thread.
 */
const char *cve_last_error(void);

/**
 * Library version as a static NUL-terminated string.
 */
const char *cve_version(void);

/**
 * Creates a circuit handle for `B(θ, φ) S1(ζ1) S2(ζ2)|00⟩`.
 *
 * # Safety
 * `out` must be valid for a pointer write.
 */
enum CveStatus cve_circuit_new(double theta,
                               double phi,
                               double zeta1_re,
                               double zeta1_im,
                               double zeta2_re,
                               double zeta2_im,
                               struct CveCircuit **out);

/**
 * Releases a circuit handle; null is ignored.
 *
 * # Safety
 * `circuit` must be null or a handle from [`cve_circuit_new`] not yet freed.
 */
void cve_circuit_free(struct CveCircuit *circuit);

/**
 * Closed-form entanglement entropy in nats.
 *
 * # Safety
 * `circuit` must be a live handle and `out` valid for a write.
 */
enum CveStatus cve_circuit_entropy(const struct CveCircuit *circuit, double *out);

/**
 * Ratio `λ` of the geometric Schmidt spectrum; 0 for product states.
 *
 * # Safety
 * `circuit` must be a live handle and `out` valid for a write.
 */
enum CveStatus cve_circuit_lambda(const struct CveCircuit *circuit, double *out);

/**
 * Separability test on the reduced state.
 *
 * # Safety
 * `circuit` must be a live handle and `out` valid for a write.
 */
enum CveStatus cve_circuit_is_separable(const struct CveCircuit *circuit, bool *out);

/**
 * Brute-force entropy from the truncated Fock simulation, with the
 * cutoff it settled on.
 *
 * # Safety
 * `circuit` must be a live handle; `out_entropy` must be valid for a
 * write and `out_cutoff` null or valid for a write.
 */
enum CveStatus cve_circuit_oracle_entropy(const struct CveCircuit *circuit,
                                          double *out_entropy,
                                          size_t *out_cutoff);

/**
 * Traces out mode 2 of a normally ordered Gaussian state. Each matrix is
 * 8 doubles: row-major 2×2 complex entries as interleaved (re, im).
 *
 * # Safety
 * `m1`, `m2`, `m12` must each point to 8 readable doubles and `out` be
 * valid for a pointer write.
 */
enum CveStatus cve_gaussian_reduce(const double *m1,
                                   const double *m2,
                                   const double *m12,
                                   double a0,
                                   struct CveReducedState **out);

/**
 * Releases a reduced-state handle; null is ignored.
 *
 * # Safety
 * `state` must be null or a handle from [`cve_gaussian_reduce`] not yet freed.
 */
void cve_reduced_free(struct CveReducedState *state);

/**
 * Entropy of the reduced state in nats.
 *
 * # Safety
 * `state` must be a live handle and `out` valid for a write.
 */
enum CveStatus cve_reduced_entropy(const struct CveReducedState *state, double *out);

/**
 * Spectral ratio `λ`; 0 for a pure reduced state.
 *
 * # Safety
 * `state` must be a live handle and `out` valid for a write.
 */
enum CveStatus cve_reduced_lambda(const struct CveReducedState *state, double *out);

/**
 * Prefactor `A` of the reduced state; `NaN` when the input was a product.
 *
 * # Safety
 * `state` must be a live handle and `out` valid for a write.
 */
enum CveStatus cve_reduced_amplitude(const struct CveReducedState *state, double *out);

/**
 * Separability test on the reduced state.
 *
 * # Safety
 * `state` must be a live handle and `out` valid for a write.
 */
enum CveStatus cve_reduced_is_separable(const struct CveReducedState *state, bool *out);

/**
 * `cosh²r ln cosh²r − sinh²r ln sinh²r`, the two-mode squeezed vacuum
 * entropy in nats.
 *
 * # Safety
 * `out` must be valid for a write.
 */
enum CveStatus cve_tmsv_entropy(double r, double *out);

/**
 * Reduced spectrum of `B(θ)|n1, n2⟩`, indexed by the photon number of
 * mode 1. Writes `n1 + n2 + 1` values to `out` and the count to `out_len`;
 * returns `BufferTooSmall` (with `out_len` set) when `capacity` is short.
 *
 * # Safety
 * `out` must be valid for `capacity` writes and `out_len` for one.
 */
enum CveStatus cve_fock_spectrum(size_t n1,
                                 size_t n2,
                                 double theta,
                                 double *out,
                                 size_t capacity,
                                 size_t *out_len);

/**
 * Entropy of `B(θ)|n1, n2⟩` in nats.
 *
 * # Safety
 * `out` must be valid for a write.
 */
enum CveStatus cve_fock_entropy(size_t n1, size_t n2, double theta, double *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* CVE_FFI_H */
