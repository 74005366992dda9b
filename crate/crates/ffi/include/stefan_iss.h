#ifndef STEFAN_ISS_H
#define STEFAN_ISS_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>

typedef enum StefanStatus {
  STEFAN_STATUS_OK = 0,
  STEFAN_STATUS_NULL_POINTER = 1,
  STEFAN_STATUS_INVALID_UTF8 = 2,
  STEFAN_STATUS_PARSE_ERROR = 3,
  STEFAN_STATUS_INVALID_SCENARIO = 4,
  STEFAN_STATUS_SOLVER_FAILURE = 5,
  STEFAN_STATUS_OUT_OF_RANGE = 6,
  STEFAN_STATUS_PANIC = 7,
} StefanStatus;

/**
 * Parsed, validated scenario.
 */
typedef struct StefanScenario StefanScenario;

/**
 * Completed run together with its analysis report.
 */
typedef struct StefanTrajectory StefanTrajectory;

/**
 * Scalar diagnostics of one snapshot.
 */
typedef struct StefanSnapshot {
  double t;
  double s;
  double q_c;
  double q_f;
  /**
   * T(0,t) - T_m, K.
   */
  double boundary_temperature;
  double energy;
  double lyapunov;
  double psi;
  /**
   * Number of liquid grid nodes.
   */
  uintptr_t liquid_nodes;
} StefanSnapshot;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the last failed call on this thread; empty if none. The
 * pointer stays valid until the next failing call on the same thread.
 */
const char *stefan_last_error_message(void);

/**
 * Parses and validates a scenario from a NUL-terminated JSON string.
 *
 * # Safety
 * `json` must be a valid C string; `out` must be writable.
 */
enum StefanStatus stefan_scenario_from_json(const char *json, struct StefanScenario **out);

/**
 * # Safety
 * `scenario` must come from [`stefan_scenario_from_json`] and not be used
 * afterwards. Null is ignored.
 */
void stefan_scenario_free(struct StefanScenario *scenario);

/**
 * Evaluates the assumption gate; `all_passed` receives the verdict.
 *
 * # Safety
 * Pointers must be valid.
 */
enum StefanStatus stefan_check_assumptions(const struct StefanScenario *scenario, bool *all_passed);

/**
 * Simulates and analyzes the scenario.
 *
 * # Safety
 * `scenario` must be a live handle; `out` must be writable.
 */
enum StefanStatus stefan_run(const struct StefanScenario *scenario, struct StefanTrajectory **out);

/**
 * # Safety
 * `traj` must be a live handle and `len` writable.
 */
enum StefanStatus stefan_trajectory_len(const struct StefanTrajectory *traj, uintptr_t *len);

/**
 * # Safety
 * `traj` must be a live handle and `out` writable.
 */
enum StefanStatus stefan_trajectory_snapshot(const struct StefanTrajectory *traj,
                                             uintptr_t index,
                                             struct StefanSnapshot *out);

/**
 * Whether the run is valid, passed its assumptions and reached `t_final`.
 *
 * # Safety
 * `traj` must be a live handle and `success` writable.
 */
enum StefanStatus stefan_trajectory_success(const struct StefanTrajectory *traj, bool *success);

/**
 * Run report as JSON; release it with [`stefan_string_free`].
 *
 * # Safety
 * `traj` must be a live handle and `out` writable.
 */
enum StefanStatus stefan_report_json(const struct StefanTrajectory *traj, char **out);

/**
 * # Safety
 * `s` must come from this library. Null is ignored.
 */
void stefan_string_free(char *s);

/**
 * # Safety
 * `traj` must come from [`stefan_run`] and not be used afterwards. Null is
 * ignored.
 */
void stefan_trajectory_free(struct StefanTrajectory *traj);

/**
 * Similarity constant λ of the Neumann solution for Stefan number `stefan`.
 *
 * # Safety
 * `lambda` must be writable.
 */
enum StefanStatus stefan_neumann_lambda(double stefan, double *lambda);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* STEFAN_ISS_H */
