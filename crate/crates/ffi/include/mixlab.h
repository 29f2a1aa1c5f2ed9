#ifndef MIXLAB_H
#define MIXLAB_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

#define MIXLAB_CONDITION_SS 0

#define MIXLAB_CONDITION_ST 1

#define MIXLAB_CONDITION_MALNORMAL 2

#define MIXLAB_CONDITION_NORMALIZER 3

/**
 * Result codes. `Ok` is zero.
 */
typedef enum MixlabStatus {
  MIXLAB_STATUS_OK = 0,
  MIXLAB_STATUS_NULL_POINTER = 1,
  MIXLAB_STATUS_INVALID_UTF8 = 2,
  MIXLAB_STATUS_UNKNOWN_INSTANCE = 3,
  MIXLAB_STATUS_INPUT_ERROR = 4,
  MIXLAB_STATUS_INTERNAL_CONSISTENCY = 5,
  MIXLAB_STATUS_SCHEMA = 6,
  MIXLAB_STATUS_PANIC = 7,
} MixlabStatus;

/**
 * A built-in instance. Opaque to C.
 */
typedef struct MixlabInstance MixlabInstance;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the last failing call on this thread, or null. Valid until
 * the next mixlab call on the same thread.
 */
const char *mixlab_last_error(void);

/**
 * Builds the built-in instance named `id`, e.g. "rotation4".
 *
 * # Safety
 * `id` must be null or a nul-terminated string; `out` must be null or
 * writable.
 */
enum MixlabStatus mixlab_instance_new(const char *id, struct MixlabInstance **out);

/**
 * # Safety
 * `inst` must be null or come from [`mixlab_instance_new`], freed once.
 */
void mixlab_instance_free(struct MixlabInstance *inst);

/**
 * Decides one of the `MIXLAB_CONDITION_*` conditions and writes the JSON
 * report to `out_json`. A `max_elements` of zero means the default cap.
 *
 * # Safety
 * `inst` must come from [`mixlab_instance_new`]; `out_json` must be
 * writable.
 */
enum MixlabStatus mixlab_check(const struct MixlabInstance *inst,
                               uint32_t condition,
                               uint32_t radius,
                               size_t max_elements,
                               char **out_json);

/**
 * Runs a CLI command line (without the program name) and writes its JSON
 * report to `out_json`.
 *
 * # Safety
 * `argv` must point to `argc` nul-terminated strings; `out_json` must be
 * writable.
 */
enum MixlabStatus mixlab_run(size_t argc, const char *const *argv, char **out_json);

/**
 * Replays the certificates in a JSON report.
 *
 * # Safety
 * `report_json` must be a nul-terminated string; `out` must be writable.
 */
enum MixlabStatus mixlab_verify(const char *report_json, bool *out);

/**
 * # Safety
 * `s` must be null or a string handed out by this library, freed once.
 */
void mixlab_string_free(char *s);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* MIXLAB_H */
