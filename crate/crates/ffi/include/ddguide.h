#ifndef DDGUIDE_H
#define DDGUIDE_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdint.h>
#include <stdbool.h>

// Result code of every fallible call.
typedef enum DdgError {
  DDG_ERROR_OK = 0,
  DDG_ERROR_NULL_POINTER = 1,
  DDG_ERROR_INVALID_UTF8 = 2,
  // Malformed JSON or a document of the wrong shape.
  DDG_ERROR_PARSE = 3,
  // Well-formed input that does not describe a valid instance.
  DDG_ERROR_INVALID_INSTANCE = 4,
  DDG_ERROR_INVALID_SETTING = 5,
  DDG_ERROR_INVALID_ASSIGNMENT = 6,
  // The solution carries no assignment (infeasible, or stopped before one was found).
  DDG_ERROR_NO_SOLUTION = 7,
  DDG_ERROR_IO = 8,
  // A Rust panic was caught at the boundary.
  DDG_ERROR_PANIC = 9,
} DdgError;

typedef enum DdgSolveStatus {
  DDG_SOLVE_STATUS_OPTIMAL = 0,
  DDG_SOLVE_STATUS_INFEASIBLE = 1,
  DDG_SOLVE_STATUS_LIMIT_REACHED = 2,
} DdgSolveStatus;

// A resolved instance.
typedef struct DdgInstance DdgInstance;

// A solve result together with its JSON report.
typedef struct DdgSolution DdgSolution;

// Search limits; zero means unlimited.
typedef struct DdgLimits {
  uint64_t node_limit;
  uint64_t time_limit_ms;
} DdgLimits;

// Cost and the three objective counts of an assignment.
typedef struct DdgMetrics {
  uint64_t cost;
  uint64_t obj1;
  uint64_t obj2;
  uint64_t obj3;
} DdgMetrics;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message of the last failed call on this thread, or null. Valid until the
// next failing call on the same thread; do not free.
const char *ddg_last_error_message(void);

// Library version as a static NUL-terminated string.
const char *ddg_version(void);

// Parses an instance document. Relative population paths are resolved
// against `base_dir`, which may be null for the current directory.
//
// # Safety
// `json` and a non-null `base_dir` are NUL-terminated strings; `out` is writable.
enum DdgError ddg_instance_from_json(const char *json,
                                     const char *base_dir,
                                     struct DdgInstance **out);

// # Safety
// `inst` is null or a handle from [`ddg_instance_from_json`] not yet freed.
void ddg_instance_free(struct DdgInstance *inst);

// Number of examinee types in the instance's population.
//
// # Safety
// `inst` is a live instance handle; `out` is writable.
enum DdgError ddg_instance_type_count(const struct DdgInstance *inst, uint64_t *out);

// Solves `setting` (1, 2 or 3) with the native search. `limits` may be null.
// An infeasible or limited result is still `DDG_ERROR_OK`; read its status.
//
// # Safety
// `inst` is a live instance handle; `limits` is null or readable; `out` is writable.
enum DdgError ddg_solve(const struct DdgInstance *inst,
                        uint8_t setting_id,
                        const struct DdgLimits *limits,
                        struct DdgSolution **out);

// # Safety
// `sol` is null or a handle from [`ddg_solve`] not yet freed.
void ddg_solution_free(struct DdgSolution *sol);

// # Safety
// `sol` is a live solution handle; `out` is writable.
enum DdgError ddg_solution_status(const struct DdgSolution *sol, enum DdgSolveStatus *out);

// Metrics of the returned assignment; `DDG_ERROR_NO_SOLUTION` when there is none.
//
// # Safety
// `sol` is a live solution handle; `out` is writable.
enum DdgError ddg_solution_metrics(const struct DdgSolution *sol, struct DdgMetrics *out);

// Objective value as a double (the exact fraction is in the JSON report).
//
// # Safety
// `sol` is a live solution handle; `out` is writable.
enum DdgError ddg_solution_objective(const struct DdgSolution *sol, double *out);

// The solve report as JSON, the same document the CLI writes.
//
// # Safety
// `sol` is a live solution handle; `out` is writable. Free the string with [`ddg_string_free`].
enum DdgError ddg_solution_to_json(const struct DdgSolution *sol, char **out);

// Evaluates a vertex-name → label map, or a report with an `assignment` key.
//
// # Safety
// `inst` is a live instance handle; `json` is NUL-terminated; `out` is writable.
enum DdgError ddg_evaluate_json(const struct DdgInstance *inst,
                                const char *json,
                                struct DdgMetrics *out);

// The integer program of `setting` in LP format.
//
// # Safety
// `inst` is a live instance handle; `out` is writable. Free the string with [`ddg_string_free`].
enum DdgError ddg_export_lp(const struct DdgInstance *inst, uint8_t setting_id, char **out);

// # Safety
// `s` is null or a string returned by this library and not yet freed.
void ddg_string_free(char *s);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* DDGUIDE_H */
