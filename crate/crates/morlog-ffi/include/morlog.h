/* C interface to the morlog exact-arithmetic library. */

#ifndef MORLOG_H
#define MORLOG_H

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

// Result of a C ABI call. `Ok` is zero; everything else is a failure and
// leaves a message in `morlog_last_error_message`.
typedef enum MorlogStatus {
  MORLOG_STATUS_OK = 0,
  // Input outside the mathematical domain of the operation.
  MORLOG_STATUS_DOMAIN = 1,
  // Result not representable at the requested precision.
  MORLOG_STATUS_PRECISION = 2,
  // A configured work bound was exceeded.
  MORLOG_STATUS_RESOURCE = 3,
  // An internal consistency check failed.
  MORLOG_STATUS_VERIFICATION = 4,
  // Malformed request: bad JSON, unknown command, missing parameter.
  MORLOG_STATUS_USAGE = 5,
  // Invariant violation inside the library, or a caught panic.
  MORLOG_STATUS_INTERNAL = 6,
  // A required pointer argument was null.
  MORLOG_STATUS_NULL_ARGUMENT = 7,
  // A string argument was not valid UTF-8.
  MORLOG_STATUS_INVALID_UTF8 = 8,
} MorlogStatus;

// Opaque handle to a finished computation report.
typedef struct MorlogReport MorlogReport;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// ABI revision of this header. Bump on any breaking change.
uint32_t morlog_abi_version(void);

// Run a computation described by a JSON request object.
//
// On `Ok` the handle written to `out` must be released with
// `morlog_report_free`. On any other status `*out` is set to null and the
// failure message is available from `morlog_last_error_message`. Note that
// a report whose checks fail is still a successful call; inspect
// `morlog_report_pass`.
//
// # Safety
//
// `request` must be a non-null pointer to a NUL-terminated string, valid
// for reads up to and including its terminator. `out` must be non-null and
// valid for a single pointer write.
enum MorlogStatus morlog_run_json(const char *request, struct MorlogReport **out);

// Run acceptance criteria: a single criterion by index, or all of them
// when `criterion` is zero.
//
// The returned report carries one check per criterion. Release the handle
// with `morlog_report_free`.
//
// # Safety
//
// `out` must be non-null and valid for a single pointer write.
enum MorlogStatus morlog_selftest(uint32_t criterion, struct MorlogReport **out);

// The report rendered as pretty-printed JSON, owned by the handle.
// Returns null if `report` is null.
//
// # Safety
//
// `report` must be null or a handle obtained from this library that has
// not been freed.
const char *morlog_report_json(const struct MorlogReport *report);

// The report rendered as plain text, owned by the handle. Returns null if
// `report` is null.
//
// # Safety
//
// `report` must be null or a handle obtained from this library that has
// not been freed.
const char *morlog_report_text(const struct MorlogReport *report);

// 1 when every check in the report passed, 0 when any failed, -1 if
// `report` is null.
//
// # Safety
//
// `report` must be null or a handle obtained from this library that has
// not been freed.
int32_t morlog_report_pass(const struct MorlogReport *report);

// Number of checks in the report; 0 if `report` is null.
//
// # Safety
//
// `report` must be null or a handle obtained from this library that has
// not been freed.
uintptr_t morlog_report_num_checks(const struct MorlogReport *report);

// Stable anchor name of check `index`, owned by the handle. Returns null
// if `report` is null or `index` is out of range.
//
// # Safety
//
// `report` must be null or a handle obtained from this library that has
// not been freed.
const char *morlog_report_check_anchor(const struct MorlogReport *report, uintptr_t index);

// 1 when check `index` passed, 0 when it failed, -1 if `report` is null
// or `index` is out of range.
//
// # Safety
//
// `report` must be null or a handle obtained from this library that has
// not been freed.
int32_t morlog_report_check_pass(const struct MorlogReport *report, uintptr_t index);

// Human-readable detail of check `index`, owned by the handle. Returns
// null if `report` is null or `index` is out of range.
//
// # Safety
//
// `report` must be null or a handle obtained from this library that has
// not been freed.
const char *morlog_report_check_detail(const struct MorlogReport *report, uintptr_t index);

// Release a report handle. Passing null is a no-op. After this call every
// pointer previously returned by the handle's accessors is dangling.
//
// # Safety
//
// `report` must be null or a handle obtained from this library, and must
// not be freed twice.
void morlog_report_free(struct MorlogReport *report);

// Static name of a status code, e.g. `"usage"`. Never null.
const char *morlog_status_name(enum MorlogStatus status);

// Message for the most recent failure on this thread, or an empty string
// after a success. The pointer stays valid until the next call into this
// library on the same thread.
const char *morlog_last_error_message(void);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* MORLOG_H */
