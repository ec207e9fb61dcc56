#ifndef WITSETS_H
#define WITSETS_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum WsStatus {
  WS_STATUS_OK = 0,
  WS_STATUS_NULL_POINTER = 1,
  WS_STATUS_INVALID_ARGUMENT = 2,
  WS_STATUS_PARSE = 3,
  WS_STATUS_TOO_LARGE = 4,
  WS_STATUS_INTERNAL = 5,
} WsStatus;

/**
 * Opaque code handle.
 */
typedef struct WsCode WsCode;

/**
 * Opaque set family handle.
 */
typedef struct WsFamily WsFamily;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Library version as a static NUL-terminated string.
 */
const char *ws_version(void);

/**
 * Message of the last failed call on this thread, or NULL. Valid until
 * the next failing call on the same thread.
 */
const char *ws_last_error(void);

/**
 * # Safety
 * `s` must come from this library and not have been freed.
 */
void ws_string_free(char *s);

/**
 * Parses a code file (header `n <length>`, one word per line).
 *
 * # Safety
 * `text` must be a NUL-terminated string; `out` must be writable.
 */
enum WsStatus ws_code_parse(const char *text, struct WsCode **out);

/**
 * Builds a code from `count` words; bit `i - 1` of a word is coordinate `i`.
 *
 * # Safety
 * `bits` must point to `count` readable values; `out` must be writable.
 */
enum WsStatus ws_code_from_bits(uint32_t n,
                                const uint64_t *bits,
                                uintptr_t count,
                                struct WsCode **out);

/**
 * # Safety
 * `code` must come from this library and not have been freed.
 */
void ws_code_free(struct WsCode *code);

/**
 * Number of codewords, 0 for NULL.
 *
 * # Safety
 * `code` must be NULL or a live handle.
 */
uintptr_t ws_code_size(const struct WsCode *code);

/**
 * Word length, 0 for NULL.
 *
 * # Safety
 * `code` must be NULL or a live handle.
 */
uint32_t ws_code_length(const struct WsCode *code);

/**
 * The `index`-th word in sorted order.
 *
 * # Safety
 * `code` must be a live handle; `out` must be writable.
 */
enum WsStatus ws_code_word(const struct WsCode *code, uintptr_t index, uint64_t *out);

/**
 * Code file text; release with `ws_string_free`.
 *
 * # Safety
 * `code` must be a live handle; `out` must be writable.
 */
enum WsStatus ws_code_render(const struct WsCode *code, char **out);

/**
 * All words of weight `k`.
 *
 * # Safety
 * `out` must be writable.
 */
enum WsStatus ws_sphere(uint32_t n, uint32_t k, struct WsCode **out);

/**
 * The two-part construction with a sphere of weight `w - t` words.
 *
 * # Safety
 * `out` must be writable.
 */
enum WsStatus ws_two_part_sphere(uint32_t n, uint32_t w, uint32_t t, struct WsCode **out);

struct WsFamily *ws_steiner_3_4_8(void);

struct WsFamily *ws_steiner_5_6_12(void);

/**
 * # Safety
 * `family` must come from this library and not have been freed.
 */
void ws_family_free(struct WsFamily *family);

/**
 * # Safety
 * `family` must be NULL or a live handle.
 */
uintptr_t ws_family_block_count(const struct WsFamily *family);

/**
 * The family code: every block together with the words just below it.
 *
 * # Safety
 * `family` must be a live handle; `out` must be writable.
 */
enum WsStatus ws_family_code(const struct WsFamily *family, struct WsCode **out);

/**
 * Whether every codeword has a witness of size `w`.
 *
 * # Safety
 * `code` must be a live handle; `holds` must be writable.
 */
enum WsStatus ws_verify(const struct WsCode *code, uint32_t w, bool *holds);

/**
 * A minimum witness of the `index`-th word (sorted order) as a bit mask.
 *
 * # Safety
 * `code` must be a live handle; `mask` must be writable.
 */
enum WsStatus ws_min_witness(const struct WsCode *code, uintptr_t index, uint64_t *mask);

/**
 * gamma(C, w) as a reduced fraction.
 *
 * # Safety
 * `code` must be a live handle; `numerator` and `denominator` must be writable.
 */
enum WsStatus ws_gamma(const struct WsCode *code,
                       uint32_t w,
                       uint64_t *numerator,
                       uint64_t *denominator);

/**
 * Bound report for f(n,w) as JSON; release with `ws_string_free`.
 *
 * # Safety
 * `out` must be writable.
 */
enum WsStatus ws_bounds_json(uint32_t n, uint32_t w, char **out);

/**
 * Solves f(n,w), or f(n,w,k) when `k >= 0`, as JSON. A positive
 * `time_limit_seconds` bounds the search, in which case the result may be
 * a lower bound.
 *
 * # Safety
 * `out` must be writable.
 */
enum WsStatus ws_solve_json(uint32_t n,
                            uint32_t w,
                            int32_t k,
                            double time_limit_seconds,
                            char **out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* WITSETS_H */
