#ifndef FPCYC_H
#define FPCYC_H

/* Generated from the fpcyc-ffi crate; do not edit by hand. */

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

// Outcome of a call. Anything but `Ok` leaves a message for
// [`fpcyc_last_error_message`].
typedef enum FpcycStatus {
  FPCYC_STATUS_OK = 0,
  // A required pointer argument was null.
  FPCYC_STATUS_NULL_POINTER = 1,
  // A string argument was not valid UTF-8.
  FPCYC_STATUS_INVALID_UTF8 = 2,
  // A word, signature, or automorphism string failed to parse.
  FPCYC_STATUS_PARSE_ERROR = 3,
  // Structurally invalid input: bad index, bad orders, not an
  // automorphism, mismatched signatures, oversized word.
  FPCYC_STATUS_INVALID_INPUT = 4,
  // The operation's hypothesis does not hold for this input.
  FPCYC_STATUS_HYPOTHESIS_NOT_MET = 5,
  // The operation does not support this input shape.
  FPCYC_STATUS_UNSUPPORTED = 6,
} FpcycStatus;

typedef struct FpcycAut FpcycAut;

typedef struct FpcycSignature FpcycSignature;

typedef struct FpcycWord FpcycWord;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Copies the message of the most recent failure on this thread; null if
// every call so far succeeded. The caller frees the copy.
char *fpcyc_last_error_message(void);

// Releases a string returned by this library. Null is ignored.
//
// # Safety
// `s` must have come from this library and not been freed before.
void fpcyc_string_free(char *s);

// Builds the signature (n_1, ..., n_m) from `len` factor orders, each at
// least 2.
//
// # Safety
// `orders` must point to `len` readable u32 values; `out` must be a valid
// output slot.
enum FpcycStatus fpcyc_signature_new(const uint32_t *orders,
                                     uintptr_t len,
                                     struct FpcycSignature **out);

// Parses the rendering `2,2,3`.
//
// # Safety
// `text` must be a nul-terminated string; `out` a valid output slot.
enum FpcycStatus fpcyc_signature_parse(const char *text, struct FpcycSignature **out);

// # Safety
// `sig` must come from this library and not been freed before. Null is
// ignored.
void fpcyc_signature_free(struct FpcycSignature *sig);

// Parses a word over the signature: `e`, or `x<i>^<e>` syllables joined
// by `*`, exponent `^1` optional.
//
// # Safety
// `sig` must be a live signature handle, `text` a nul-terminated string,
// `out` a valid output slot.
enum FpcycStatus fpcyc_word_parse(const struct FpcycSignature *sig,
                                  const char *text,
                                  struct FpcycWord **out);

// # Safety
// `sig` must be a live signature handle, `out` a valid output slot.
enum FpcycStatus fpcyc_word_identity(const struct FpcycSignature *sig, struct FpcycWord **out);

// Writes the normal form of `left * right`.
//
// # Safety
// `left` and `right` must be live word handles, `out` a valid output slot.
enum FpcycStatus fpcyc_word_multiply(const struct FpcycWord *left,
                                     const struct FpcycWord *right,
                                     struct FpcycWord **out);

// # Safety
// `word` must be a live word handle, `out` a valid output slot.
enum FpcycStatus fpcyc_word_invert(const struct FpcycWord *word, struct FpcycWord **out);

// Writes the element's order: `*finite = true` and the order itself, or
// `*finite = false` and 0 for infinite order.
//
// # Safety
// `word` must be a live word handle; `finite` and `order` must be
// writable.
enum FpcycStatus fpcyc_word_order(const struct FpcycWord *word, bool *finite, uint64_t *order);

// # Safety
// `word` must be a live word handle, `out` writable.
enum FpcycStatus fpcyc_word_is_identity(const struct FpcycWord *word, bool *out);

// Decides conjugacy of two words over the same signature.
//
// # Safety
// `left` and `right` must be live word handles, `out` writable.
enum FpcycStatus fpcyc_word_is_conjugate(const struct FpcycWord *left,
                                         const struct FpcycWord *right,
                                         bool *out);

// Writes the normal form rendering, `e` or `x1^2*x2^1`.
//
// # Safety
// `word` must be a live word handle, `out` a valid output slot.
enum FpcycStatus fpcyc_word_to_string(const struct FpcycWord *word, char **out);

// # Safety
// `word` must come from this library and not been freed before. Null is
// ignored.
void fpcyc_word_free(struct FpcycWord *word);

// Parses an automorphism expression: `factor:2,1`, `perm:(1 2)`,
// `pc:i,j`, or `*`-compositions applied left to right.
//
// # Safety
// `sig` must be a live signature handle, `text` a nul-terminated string,
// `out` a valid output slot.
enum FpcycStatus fpcyc_aut_parse(const struct FpcycSignature *sig,
                                 const char *text,
                                 struct FpcycAut **out);

// # Safety
// `f` must be a live automorphism handle, `word` a live word handle,
// `out` a valid output slot.
enum FpcycStatus fpcyc_aut_apply(const struct FpcycAut *f,
                                 const struct FpcycWord *word,
                                 struct FpcycWord **out);

// Writes `f` after `g`, the map sending w to f(g(w)).
//
// # Safety
// `f` and `g` must be live automorphism handles, `out` a valid output
// slot.
enum FpcycStatus fpcyc_aut_compose(const struct FpcycAut *f,
                                   const struct FpcycAut *g,
                                   struct FpcycAut **out);

// # Safety
// `f` must be a live automorphism handle, `out` a valid output slot.
enum FpcycStatus fpcyc_aut_inverse(const struct FpcycAut *f, struct FpcycAut **out);

// Writes the image list `x1 -> ...; x2 -> ...`.
//
// # Safety
// `f` must be a live automorphism handle, `out` a valid output slot.
enum FpcycStatus fpcyc_aut_to_string(const struct FpcycAut *f, char **out);

// # Safety
// `f` must come from this library and not been freed before. Null is
// ignored.
void fpcyc_aut_free(struct FpcycAut *f);

// Writes the conjugacy census line, e.g. `c(2)=2 c(4)=2`.
//
// # Safety
// `sig` must be a live signature handle, `out` a valid output slot.
enum FpcycStatus fpcyc_census_summary(const struct FpcycSignature *sig, char **out);

// Writes the per-pair fixed-point certificate as JSON. Requires every
// order to occur at least four times.
//
// # Safety
// `sig` must be a live signature handle, `out` a valid output slot.
enum FpcycStatus fpcyc_fa_certificate_json(const struct FpcycSignature *sig, char **out);

// Runs the defining-relation sweep for the standard generating set,
// writes the report text, and sets `*all_pass`.
//
// # Safety
// `sig` must be a live signature handle; `all_pass` and `out` writable.
enum FpcycStatus fpcyc_verify_relations(const struct FpcycSignature *sig,
                                        bool *all_pass,
                                        char **out);

#ifdef __cplusplus
} // extern "C"
#endif // __cplusplus

#endif /* FPCYC_H */
