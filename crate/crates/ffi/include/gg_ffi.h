#ifndef GG_FFI_H
#define GG_FFI_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result codes.
 */
typedef enum GgStatus {
  GG_STATUS_OK = 0,
  GG_STATUS_NULL_POINTER = 1,
  GG_STATUS_INVALID_INPUT = 2,
  GG_STATUS_PARSE = 3,
  GG_STATUS_DOMAIN = 4,
  GG_STATUS_INTEGRATION = 5,
  GG_STATUS_COLLISION = 6,
  GG_STATUS_SUPPORT = 7,
  GG_STATUS_NOT_HAMILTONIAN = 8,
  GG_STATUS_REJECTION = 9,
  GG_STATUS_UNSUPPORTED = 10,
  GG_STATUS_IO = 11,
  GG_STATUS_PANIC = 12,
} GgStatus;

/**
 * Opaque isotopy handle.
 */
typedef struct GgIsotopy GgIsotopy;

/**
 * Opaque quasi-morphism handle.
 */
typedef struct GgQuasiMorphism GgQuasiMorphism;

/**
 * A Monte Carlo estimate.
 */
typedef struct GgEstimate {
  /**
   * Sample mean times the configuration-space volume.
   */
  double value;
  double std_error;
  double mean;
  uint64_t samples;
  uint64_t rejected;
} GgEstimate;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failed call on this thread; empty after a success.
 * The pointer is valid until the next call on the same thread.
 */
const char *gg_last_error(void);

/**
 * Library version as a static string.
 */
const char *gg_version(void);

/**
 * Build an isotopy from its JSON description.
 *
 * # Safety
 * `json` must be a NUL-terminated string and `out` a valid pointer.
 */
enum GgStatus gg_isotopy_from_json(const char *json, struct GgIsotopy **out);

/**
 * Release an isotopy handle; null is ignored.
 *
 * # Safety
 * `iso` must come from [`gg_isotopy_from_json`] and not be used again.
 */
void gg_isotopy_free(struct GgIsotopy *iso);

/**
 * Build a quasi-morphism from a registry spec such as `lk:1,2`, `expsum`
 * or `brooks:a1 b1`; `genus` is the genus of the words it will see.
 *
 * # Safety
 * `spec` must be a NUL-terminated string and `out` a valid pointer.
 */
enum GgStatus gg_qm_from_spec(const char *spec, uint16_t genus, struct GgQuasiMorphism **out);

/**
 * # Safety
 * `qm` must come from [`gg_qm_from_spec`] and not be used again.
 */
void gg_qm_free(struct GgQuasiMorphism *qm);

/**
 * Monte Carlo average of `qm` over `n`-point configurations traced by
 * `iso`. `workers = 0` uses the default pool.
 *
 * # Safety
 * Handles must be live and `out` a valid pointer.
 */
enum GgStatus gg_phi_n(const struct GgIsotopy *iso,
                       const struct GgQuasiMorphism *qm,
                       uintptr_t n,
                       uintptr_t samples,
                       uint64_t seed,
                       uintptr_t workers,
                       struct GgEstimate *out);

/**
 * Calabi invariant of a compactly supported disc isotopy.
 *
 * # Safety
 * `iso` must be live; `value` and `std_error` valid pointers.
 */
enum GgStatus gg_calabi_disc(const struct GgIsotopy *iso,
                             uintptr_t samples,
                             uint64_t seed,
                             double *value,
                             double *std_error);

/**
 * Trace the configuration `xy = [x1, y1, x2, y2, ...]` of `n` points and
 * return its word as a new string, released with [`gg_string_free`].
 *
 * # Safety
 * `xy` must hold `2 n` doubles; `iso` live; `out` valid.
 */
enum GgStatus gg_trace_word(const struct GgIsotopy *iso, const double *xy, uintptr_t n, char **out);

/**
 * # Safety
 * `s` must come from this library and not be used again.
 */
void gg_string_free(char *s);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* GG_FFI_H */
