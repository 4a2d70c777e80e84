#ifndef HYPERCNOT_H
#define HYPERCNOT_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum HcStatus {
  HC_STATUS_OK = 0,
  HC_STATUS_NULL_POINTER = 1,
  HC_STATUS_INVALID_ARGUMENT = 2,
  HC_STATUS_NOT_NORMALIZED = 3,
  HC_STATUS_DIMENSION_MISMATCH = 4,
  HC_STATUS_UNKNOWN_LABEL = 5,
  HC_STATUS_ZERO_NORM = 6,
  HC_STATUS_MALFORMED_INPUT = 7,
  HC_STATUS_BUFFER_TOO_SMALL = 8,
  HC_STATUS_PANIC = 9,
} HcStatus;

/**
 * One spin branch of a gate run.
 */
typedef struct HcGateRun HcGateRun;

/**
 * Four-register two-photon state (a.pol, a.spatial, b.pol, b.spatial).
 */
typedef struct HcState HcState;

/**
 * Cavity parameters in units of κ (κ itself is fixed to 1).
 */
typedef struct HcCavityParams {
  double g;
  double kappa_s;
  double gamma;
  /**
   * ω − ω_c.
   */
  double probe_detuning;
} HcCavityParams;

typedef struct HcComplex {
  double re;
  double im;
} HcComplex;

typedef struct HcReflection {
  struct HcComplex r_cold;
  struct HcComplex r_hot;
} HcReflection;

typedef struct HcPerformance {
  double fidelity;
  double efficiency;
} HcPerformance;

typedef struct HcPhoton {
  struct HcComplex polarization[2];
  struct HcComplex spatial[2];
} HcPhoton;

typedef struct HcBellDecoding {
  /**
   * Detected [a.pol, a.spatial, b.pol, b.spatial].
   */
  uint32_t pattern[4];
  double confidence;
  bool deterministic;
  /**
   * Decoded Bell index 0..3 (Φ+, Φ−, Ψ+, Ψ−) per degree of freedom.
   */
  uint32_t polarization;
  uint32_t spatial;
} HcBellDecoding;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Library version as a static NUL-terminated string.
 */
const char *hc_version(void);

/**
 * Message of the last failed call on this thread, empty after a success.
 * The pointer stays valid until the next library call on the same thread.
 */
const char *hc_last_error(void);

/**
 * Standard operating point: g = 0, κ_s = 0, γ = 0.1, ω − ω_c = 0.5.
 */
struct HcCavityParams hc_cavity_params_default(void);

/**
 * Cold and hot cavity reflection coefficients.
 *
 * # Safety
 * `params` and `out` must be null or valid for reads and writes.
 */
enum HcStatus hc_reflection(const struct HcCavityParams *params, struct HcReflection *out);

/**
 * Closed-form fidelity and efficiency.
 *
 * # Safety
 * `params` and `out` must be null or valid.
 */
enum HcStatus hc_formula_performance(const struct HcCavityParams *params,
                                     struct HcPerformance *out);

/**
 * Builds `|a⟩ ⊗ |b⟩`; each factor must be normalized.
 *
 * # Safety
 * Pointers must be null or valid; `*out` receives a new handle.
 */
enum HcStatus hc_state_two_photon(const struct HcPhoton *control,
                                  const struct HcPhoton *target,
                                  struct HcState **out);

/**
 * Builds a two-photon state from 16 amplitudes, index `8·a.pol +
 * 4·a.spatial + 2·b.pol + b.spatial`.
 *
 * # Safety
 * `amplitudes` must point to `len` readable values.
 */
enum HcStatus hc_state_from_amplitudes(const struct HcComplex *amplitudes,
                                       size_t len,
                                       struct HcState **out);

/**
 * # Safety
 * `state` must be null or a handle from this library, not yet freed.
 */
void hc_state_free(struct HcState *state);

/**
 * Number of amplitudes, 0 for a null handle.
 *
 * # Safety
 * `state` must be null or a live handle.
 */
size_t hc_state_len(const struct HcState *state);

/**
 * Copies the amplitudes into `buffer` (capacity `len`).
 *
 * # Safety
 * `buffer` must be writable for `len` values.
 */
enum HcStatus hc_state_amplitudes(const struct HcState *state,
                                  struct HcComplex *buffer,
                                  size_t len);

/**
 * |⟨x|y⟩|² of the normalized states.
 *
 * # Safety
 * Pointers must be null or valid.
 */
enum HcStatus hc_state_fidelity(const struct HcState *x, const struct HcState *y, double *out);

/**
 * Runs the gate and keeps the branch with spin outcomes `(e1, e2)`, each 0
 * for ↑ or 1 for ↓.
 *
 * # Safety
 * Pointers must be null or valid; `*out` receives a new handle.
 */
enum HcStatus hc_hyper_cnot_branch(const struct HcState *input,
                                   const struct HcCavityParams *params,
                                   uint32_t e1,
                                   uint32_t e2,
                                   struct HcGateRun **out);

/**
 * Runs the gate with spin outcomes drawn from a seeded generator.
 *
 * # Safety
 * Pointers must be null or valid; `*out` receives a new handle.
 */
enum HcStatus hc_hyper_cnot_sampled(const struct HcState *input,
                                    const struct HcCavityParams *params,
                                    uint64_t seed,
                                    struct HcGateRun **out);

/**
 * # Safety
 * `run` must be null or a live handle.
 */
void hc_gate_run_free(struct HcGateRun *run);

/**
 * Normalized output state after feed-forward, as a new handle.
 *
 * # Safety
 * Pointers must be null or valid.
 */
enum HcStatus hc_gate_run_state(const struct HcGateRun *run, struct HcState **out);

/**
 * Spin outcomes (0 ↑, 1 ↓), branch probability given survival, and
 * survival probability. Any out-pointer may be null.
 *
 * # Safety
 * Non-null pointers must be valid; `outcomes` must hold two values.
 */
enum HcStatus hc_gate_run_info(const struct HcGateRun *run,
                               uint32_t *outcomes,
                               double *branch_probability,
                               double *survival_probability);

/**
 * Cluster state for spin branch (↑, ↑).
 *
 * # Safety
 * Pointers must be null or valid; `*out` receives a new handle.
 */
enum HcStatus hc_prepare_cluster(const struct HcCavityParams *params, struct HcState **out);

/**
 * Decodes the hyperentangled Bell state with polarization index
 * `polarization` and spatial index `spatial` (0..3: Φ+, Φ−, Ψ+, Ψ−).
 *
 * # Safety
 * Pointers must be null or valid.
 */
enum HcStatus hc_analyze_hyper_bell(uint32_t polarization,
                                    uint32_t spatial,
                                    const struct HcCavityParams *params,
                                    struct HcBellDecoding *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* HYPERCNOT_H */
