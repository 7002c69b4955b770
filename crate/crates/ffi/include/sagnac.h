#ifndef SAGNAC_H
#define SAGNAC_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result code of every fallible call.
 */
typedef enum SagnacStatus {
  SAGNAC_STATUS_OK = 0,
  SAGNAC_STATUS_NULL_POINTER = 1,
  SAGNAC_STATUS_INVALID_ARGUMENT = 2,
  SAGNAC_STATUS_DOMAIN = 3,
  SAGNAC_STATUS_BASIS = 4,
  SAGNAC_STATUS_TRUNCATION = 5,
  SAGNAC_STATUS_NOT_UNITARY = 6,
  SAGNAC_STATUS_UNSUPPORTED = 7,
  SAGNAC_STATUS_IO = 8,
  SAGNAC_STATUS_OUT_OF_RANGE = 9,
  SAGNAC_STATUS_PANIC = 10,
} SagnacStatus;

/**
 * A fringe dataset produced by a sweep.
 */
typedef struct SagnacDataset SagnacDataset;

/**
 * A Fock-space pure state.
 */
typedef struct SagnacState SagnacState;

/**
 * One row of a dataset.
 */
typedef struct SagnacPoint {
  double r;
  double theta;
  double phi;
  double value;
  double closed_form;
  double abs_error;
} SagnacPoint;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failure on this thread, or NULL if none. The pointer
 * stays valid until the next failing call on the same thread.
 */
const char *sagnac_last_error(void);

/**
 * Library version as a static NUL-terminated string.
 */
const char *sagnac_version(void);

/**
 * Rotation phase in radians. `fiber_length == 0` selects a single loop of
 * area `π radius²`.
 */
enum SagnacStatus sagnac_rotation_phase(double radius,
                                        double angular_velocity,
                                        double wavelength,
                                        double fiber_length,
                                        double *out_phi);

/**
 * Entropy of entanglement of the two-mode squeezed vacuum, in bits.
 */
enum SagnacStatus sagnac_entanglement_entropy(double r, double *out_bits);

/**
 * Number state `|counts[0], ..., counts[modes-1]>` in a basis of `modes`
 * modes truncated at `cutoff` total photons.
 */
enum SagnacStatus sagnac_state_fock(const uint32_t *counts,
                                    size_t modes,
                                    size_t cutoff,
                                    struct SagnacState **out_state);

/**
 * Truncated two-mode squeezed vacuum on modes 0 and 1 of `modes` modes. The
 * pair cutoff is the smallest whose discarded tail is within `tail_eps`;
 * pass `pair_cutoff >= 0` to fix it instead.
 */
enum SagnacStatus sagnac_state_squeezed(double r,
                                        double theta,
                                        double tail_eps,
                                        int64_t pair_cutoff,
                                        size_t modes,
                                        struct SagnacState **out_state);

void sagnac_state_free(struct SagnacState *state);

enum SagnacStatus sagnac_state_modes(const struct SagnacState *state, size_t *out_modes);

enum SagnacStatus sagnac_state_norm_sqr(const struct SagnacState *state, double *out_norm_sqr);

/**
 * `<n_mode>`.
 */
enum SagnacStatus sagnac_state_number(const struct SagnacState *state,
                                      size_t mode,
                                      double *out_mean);

/**
 * Amplitude of the occupation `counts` (length = number of modes).
 */
enum SagnacStatus sagnac_state_amplitude(const struct SagnacState *state,
                                         const uint32_t *counts,
                                         size_t modes,
                                         double *out_re,
                                         double *out_im);

/**
 * Propagates `state` through the Sagnac loop at phase `phi` (modes 0 and 1),
 * returning a new handle.
 */
enum SagnacStatus sagnac_state_evolve_sagnac(const struct SagnacState *state,
                                             double phi,
                                             struct SagnacState **out_state);

/**
 * Evaluates a detection scheme (by name, e.g. `"g2_normalized"`, `"p4_2x2"`)
 * on the input state at phase `phi`. Four-photon schemes use balanced
 * detector splitters.
 */
enum SagnacStatus sagnac_detect(const struct SagnacState *state,
                                const char *scheme,
                                double phi,
                                double *out_value);

/**
 * Runs a sweep described by a JSON object with the fields of the sweep
 * configuration (`scheme`, `r`, `theta`, `phi_min`, `phi_max`, `steps`,
 * `tail_eps`, `pair_cutoff`, `splitter_t2`, `normalize`, ...); missing
 * fields take their defaults.
 */
enum SagnacStatus sagnac_sweep_run(const char *config_json, struct SagnacDataset **out_dataset);

void sagnac_dataset_free(struct SagnacDataset *dataset);

enum SagnacStatus sagnac_dataset_len(const struct SagnacDataset *dataset, size_t *out_len);

enum SagnacStatus sagnac_dataset_point(const struct SagnacDataset *dataset,
                                       size_t index,
                                       struct SagnacPoint *out_point);

/**
 * Pair cutoff used by the sweep's squeezed source, or -1 without one.
 */
enum SagnacStatus sagnac_dataset_pair_cutoff(const struct SagnacDataset *dataset,
                                             int64_t *out_cutoff);

/**
 * Writes the dataset to `path` as `"csv"` or `"json"`.
 */
enum SagnacStatus sagnac_dataset_write(const struct SagnacDataset *dataset,
                                       const char *path,
                                       const char *format);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* SAGNAC_H */
