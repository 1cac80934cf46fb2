#ifndef FPCP_H
#define FPCP_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum FpcpStatus {
  FPCP_STATUS_OK = 0,
  FPCP_STATUS_NULL_ARGUMENT = 1,
  FPCP_STATUS_INVALID_UTF8 = 2,
  FPCP_STATUS_PARSE_ERROR = 3,
  FPCP_STATUS_BAD_FORMAT = 4,
  FPCP_STATUS_INVALID_OPTION = 5,
  FPCP_STATUS_PANIC = 6,
} FpcpStatus;

typedef enum FpcpVerdict {
  FPCP_VERDICT_SAT = 0,
  FPCP_VERDICT_UNSAT = 1,
  FPCP_VERDICT_UNKNOWN = 2,
} FpcpVerdict;

/**
 * Opaque constraint network.
 */
typedef struct FpcpNetwork FpcpNetwork;

/**
 * Search options; start from [`fpcp_solve_options_default`].
 */
typedef struct FpcpSolveOptions {
  bool maxulp;
  uint64_t node_limit;
  /**
   * Seconds; zero or negative means no limit.
   */
  double time_limit;
  bool upper_first;
  /**
   * Include every narrowing in the JSON report.
   */
  bool trace;
} FpcpSolveOptions;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Description of the last failure on this thread, or null. The pointer is
 * valid until the next call into the library on the same thread.
 */
const char *fpcp_last_error(void);

/**
 * Library version as a static string.
 */
const char *fpcp_version(void);

struct FpcpSolveOptions fpcp_solve_options_default(void);

/**
 * Parse a problem. `format` may be null; otherwise it overrides the
 * file's `format` line.
 *
 * # Safety
 * `text` and a non-null `format` must be NUL-terminated strings; `out`
 * must point to writable storage for one handle.
 */
enum FpcpStatus fpcp_network_parse(const char *text, const char *format, struct FpcpNetwork **out);

/**
 * # Safety
 * `net` must be null or a handle from [`fpcp_network_parse`] not yet freed.
 */
void fpcp_network_free(struct FpcpNetwork *net);

/**
 * Number of variables, constants included; 0 for a null handle.
 *
 * # Safety
 * `net` must be null or a live handle.
 */
size_t fpcp_network_var_count(const struct FpcpNetwork *net);

/**
 * Print the network in the problem syntax.
 *
 * # Safety
 * `net` must be a live handle and `out` writable.
 */
enum FpcpStatus fpcp_network_print(const struct FpcpNetwork *net, char **out);

/**
 * Search for a solution. `opts` may be null for the defaults. On success
 * `verdict` is set and, when `report` is non-null, it receives the JSON
 * report.
 *
 * # Safety
 * `net` must be a live handle; `verdict` writable; `opts` and `report`
 * null or valid.
 */
enum FpcpStatus fpcp_solve(const struct FpcpNetwork *net,
                           const struct FpcpSolveOptions *opts,
                           enum FpcpVerdict *verdict,
                           char **report);

/**
 * Propagate at the root only. `consistent` is set to false when a domain
 * empties; `report` (optional) receives the JSON domains and trace.
 *
 * # Safety
 * `net` must be a live handle; `consistent` writable; `report` null or
 * writable.
 */
enum FpcpStatus fpcp_check(const struct FpcpNetwork *net,
                           bool maxulp,
                           bool *consistent,
                           char **report);

/**
 * # Safety
 * `s` must be null or a string returned by this library, not yet freed.
 */
void fpcp_string_free(char *s);

#ifdef __cplusplus
} // extern "C"
#endif // __cplusplus

#endif /* FPCP_H */
