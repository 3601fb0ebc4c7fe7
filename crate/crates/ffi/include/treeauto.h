#ifndef TREEAUTO_H
#define TREEAUTO_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum TaActivityClass {
  TA_ACTIVITY_CLASS_FINITARY = 0,
  TA_ACTIVITY_CLASS_BOUNDED = 1,
  TA_ACTIVITY_CLASS_POLYNOMIAL = 2,
  TA_ACTIVITY_CLASS_EXPONENTIAL = 3,
} TaActivityClass;

/**
 * Result of every fallible call.
 */
typedef enum TaStatus {
  TA_STATUS_OK = 0,
  TA_STATUS_NULL_POINTER = 1,
  TA_STATUS_INVALID_UTF8 = 2,
  TA_STATUS_PARSE = 3,
  TA_STATUS_ALPHABET_MISMATCH = 4,
  TA_STATUS_INVALID_ARGUMENT = 5,
  TA_STATUS_BUDGET_EXCEEDED = 6,
  TA_STATUS_UNKNOWN_NAME = 7,
  TA_STATUS_PANIC = 8,
} TaStatus;

/**
 * One automorphism in canonical form.
 */
typedef struct TaAutomorphism TaAutomorphism;

/**
 * A named generating set.
 */
typedef struct TaGroup TaGroup;

/**
 * Activity class; `depth` is set for finitary elements, `degree` for
 * polynomial ones.
 */
typedef struct TaActivity {
  enum TaActivityClass kind;
  size_t depth;
  size_t degree;
} TaActivity;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the last failed call on this thread, or NULL. Valid until
 * the next call into the library from the same thread.
 */
const char *ta_last_error(void);

/**
 * Library version as a static NUL-terminated string.
 */
const char *ta_version(void);

/**
 * # Safety
 * `s` must be NULL or a string returned by this library.
 */
void ta_string_free(char *s);

/**
 * Parses the automaton text format.
 *
 * # Safety
 * `text` must be a NUL-terminated string and `out` a valid pointer.
 */
enum TaStatus ta_group_from_text(const char *text, struct TaGroup **out);

/**
 * A built-in generating set by name.
 *
 * # Safety
 * `name` must be a NUL-terminated string and `out` a valid pointer.
 */
enum TaStatus ta_group_from_catalog(const char *name, struct TaGroup **out);

/**
 * # Safety
 * `g` must be NULL or a handle from this library, not yet freed.
 */
void ta_group_free(struct TaGroup *g);

/**
 * Number of generators; 0 for NULL.
 *
 * # Safety
 * `g` must be NULL or a live handle.
 */
size_t ta_group_len(const struct TaGroup *g);

/**
 * The machine text of the group.
 *
 * # Safety
 * `g` must be a live handle and `out` a valid pointer.
 */
enum TaStatus ta_group_to_text(const struct TaGroup *g, char **out);

/**
 * Evaluates a word such as `"a b^-1"` over the group's generators.
 *
 * # Safety
 * `g` must be a live handle, `word` a NUL-terminated string and `out` a
 * valid pointer.
 */
enum TaStatus ta_group_evaluate(const struct TaGroup *g,
                                const char *word,
                                struct TaAutomorphism **out);

/**
 * # Safety
 * `a` must be NULL or a handle from this library, not yet freed.
 */
void ta_automorphism_free(struct TaAutomorphism *a);

/**
 * Alphabet size; 0 for NULL.
 *
 * # Safety
 * `a` must be NULL or a live handle.
 */
size_t ta_arity(const struct TaAutomorphism *a);

/**
 * States of the canonical machine, identity state included; 0 for NULL.
 *
 * # Safety
 * `a` must be NULL or a live handle.
 */
size_t ta_num_states(const struct TaAutomorphism *a);

/**
 * `out = g h`, acting as `h` first.
 *
 * # Safety
 * `g`, `h` must be live handles and `out` a valid pointer.
 */
enum TaStatus ta_compose(const struct TaAutomorphism *g,
                         const struct TaAutomorphism *h,
                         struct TaAutomorphism **out);

/**
 * # Safety
 * `g` must be a live handle and `out` a valid pointer.
 */
enum TaStatus ta_invert(const struct TaAutomorphism *g, struct TaAutomorphism **out);

/**
 * The section at the vertex `v[0..len]`.
 *
 * # Safety
 * `g` must be a live handle, `v` must point to `len` bytes (or be NULL
 * when `len` is 0) and `out` a valid pointer.
 */
enum TaStatus ta_section(const struct TaAutomorphism *g,
                         const uint8_t *v,
                         size_t len,
                         struct TaAutomorphism **out);

/**
 * Writes the image of `v[0..len]` to `image[0..len]`.
 *
 * # Safety
 * `g` must be a live handle; `v` and `image` must each point to `len`
 * bytes (or be NULL when `len` is 0).
 */
enum TaStatus ta_apply(const struct TaAutomorphism *g,
                       const uint8_t *v,
                       size_t len,
                       uint8_t *image);

/**
 * # Safety
 * `g` must be a live handle and `out` a valid pointer.
 */
enum TaStatus ta_is_identity(const struct TaAutomorphism *g, bool *out);

/**
 * # Safety
 * `g`, `h` must be live handles and `out` a valid pointer.
 */
enum TaStatus ta_equal(const struct TaAutomorphism *g, const struct TaAutomorphism *h, bool *out);

/**
 * `θ(n)`, the number of level-`n` vertices with nontrivial section, as a
 * decimal string (it can exceed 64 bits).
 *
 * # Safety
 * `g` must be a live handle and `out` a valid pointer.
 */
enum TaStatus ta_theta(const struct TaAutomorphism *g, size_t n, char **out);

/**
 * # Safety
 * `g` must be a live handle and `out` a valid pointer.
 */
enum TaStatus ta_classify(const struct TaAutomorphism *g, struct TaActivity *out);

/**
 * Exact measure of the singular set as `"p/q"`.
 *
 * # Safety
 * `g` must be a live handle and `out` a valid pointer.
 */
enum TaStatus ta_singular_measure(const struct TaAutomorphism *g, char **out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* TREEAUTO_H */
