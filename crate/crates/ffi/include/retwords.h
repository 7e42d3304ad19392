#ifndef RETWORDS_H
#define RETWORDS_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

#define RMW_ABI_VERSION 1

/**
 * `method` argument of [`rmw_check_rm`].
 */
#define RMW_METHOD_FULL_SCAN 0

#define RMW_METHOD_BISPECIAL 1

typedef enum RmwStatus {
  RMW_STATUS_OK = 0,
  RMW_STATUS_INVALID_ARGUMENT = 1,
  RMW_STATUS_NOT_A_FACTOR = 2,
  /**
   * The finite prefix scanned could not certify the answer.
   */
  RMW_STATUS_CERTIFICATION = 3,
  RMW_STATUS_BUFFER_TOO_SMALL = 4,
  /**
   * An internal consistency check failed.
   */
  RMW_STATUS_INTERNAL = 5,
  RMW_STATUS_PANIC = 6,
} RmwStatus;

/**
 * Opaque handle to an infinite word.
 */
typedef struct RmwSource RmwSource;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

uint32_t rmw_abi_version(void);

/**
 * Copies the last error message of this thread, NUL-terminated and
 * truncated to `len` bytes. Returns the full message length.
 *
 * # Safety
 * `buf` must be null or point to `len` writable bytes.
 */
size_t rmw_last_error(char *buf, size_t len);

/**
 * One of `fibonacci`, `tribonacci`, `thue_morse`, `chacon_recoded`, `r4_example`.
 *
 * # Safety
 * `name` must be a NUL-terminated string; `out` must be writable.
 */
enum RmwStatus rmw_source_builtin(const char *name, struct RmwSource **out);

/**
 * Any source specification accepted by the command-line `--source` flag.
 *
 * # Safety
 * `spec` must be a NUL-terminated string; `out` must be writable.
 */
enum RmwStatus rmw_source_parse(const char *spec, struct RmwSource **out);

/**
 * Fixed point of a substitution given in the text format
 * (`alphabet:`, `x -> word` and `seed:` lines).
 *
 * # Safety
 * `text` must be a NUL-terminated string; `out` must be writable.
 */
enum RmwStatus rmw_source_from_substitution_text(const char *text, struct RmwSource **out);

/**
 * Characteristic Sturmian word of a directive sequence, cycled.
 *
 * # Safety
 * `directives` must point to `len` values; `out` must be writable.
 */
enum RmwStatus rmw_source_sturmian(const uint32_t *directives, size_t len, struct RmwSource **out);

/**
 * Fixed point of the β-substitution of `t[0..m]`.
 *
 * # Safety
 * `t` must point to `m` values; `out` must be writable.
 */
enum RmwStatus rmw_source_beta(const uint32_t *t, size_t m, struct RmwSource **out);

/**
 * # Safety
 * `src` must be null or a handle not freed before.
 */
void rmw_source_free(struct RmwSource *src);

/**
 * Writes the first `n` letters as UTF-8 plus a NUL. `*written` receives the
 * byte length without the NUL, also when the buffer is too small.
 *
 * # Safety
 * `buf` must point to `buf_len` writable bytes; `written` must be writable.
 */
enum RmwStatus rmw_source_prefix(const struct RmwSource *src,
                                 size_t n,
                                 char *buf,
                                 size_t buf_len,
                                 size_t *written);

/**
 * Number of distinct factors of length `n`.
 *
 * # Safety
 * `src` must be a live handle; `out` must be writable.
 */
enum RmwStatus rmw_complexity(const struct RmwSource *src, size_t n, size_t *out);

/**
 * Number of return words of `factor`, written with the source's symbols.
 *
 * # Safety
 * `src` must be a live handle, `factor` NUL-terminated, `out` writable.
 */
enum RmwStatus rmw_return_count(const struct RmwSource *src, const char *factor, size_t *out);

/**
 * Checks R_m up to `max_len`. `*holds` is 1 when every factor has exactly
 * `m` return words, else 0.
 *
 * # Safety
 * `src` must be a live handle; `holds` must be writable.
 */
enum RmwStatus rmw_check_rm(const struct RmwSource *src,
                            size_t m,
                            size_t max_len,
                            int method,
                            int *holds);

/**
 * # Safety
 * `t` must point to `m` values; `beta` and `residual` must be writable.
 */
enum RmwStatus rmw_beta_dominant_root(const uint32_t *t, size_t m, double *beta, double *residual);

/**
 * # Safety
 * `t` must point to `m` values; both outputs must be writable.
 */
enum RmwStatus rmw_beta_conditions(const uint32_t *t,
                                   size_t m,
                                   int *parry_simple,
                                   int *rm_conditions);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* RETWORDS_H */
