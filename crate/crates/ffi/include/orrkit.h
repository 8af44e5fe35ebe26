#ifndef ORRKIT_H
#define ORRKIT_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum OrrStatus {
  ORR_STATUS_OK = 0,
  ORR_STATUS_NULL_POINTER = 1,
  ORR_STATUS_INVALID_ARGUMENT = 2,
  ORR_STATUS_CATALOG_ERROR = 3,
  ORR_STATUS_MISMATCH = 4,
  ORR_STATUS_PRECISION_EXHAUSTED = 5,
  ORR_STATUS_COMPUTATION_ERROR = 6,
  ORR_STATUS_PANIC = 7,
} OrrStatus;

typedef struct OrrCatalog OrrCatalog;

/*
 Precision settings shared by the calls that take it.
 */
typedef struct OrrContext OrrContext;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/*
 New context with `target_digits` and the default guard digits; NULL if
 `target_digits` is 0.
 */
struct OrrContext *orr_context_new(uint32_t target_digits);

/*
 # Safety
 `ctx` must come from `orr_context_new` and not be used afterwards.
 */
void orr_context_free(struct OrrContext *ctx);

/*
 # Safety
 `out` must be a valid pointer.
 */
enum OrrStatus orr_catalog_builtin(struct OrrCatalog **out);

/*
 # Safety
 `path` must be a NUL-terminated string and `out` a valid pointer.
 */
enum OrrStatus orr_catalog_load(const char *path, struct OrrCatalog **out);

/*
 # Safety
 `cat` must come from a catalog constructor and not be used afterwards.
 */
void orr_catalog_free(struct OrrCatalog *cat);

/*
 Number of entries; 0 for NULL.

 # Safety
 `cat` must be NULL or a live catalog handle.
 */
size_t orr_catalog_len(const struct OrrCatalog *cat);

/*
 Verify one entry at the context's target. The JSON report is written to
 `json_out` whenever the computation ran, including on a mismatch.

 # Safety
 Handles must be live, `id` NUL-terminated, `json_out` valid.
 */
enum OrrStatus orr_verify(const struct OrrContext *ctx,
                          const struct OrrCatalog *cat,
                          const char *id,
                          char **json_out);

/*
 Prove one entry by translation or equivalence; report as for `orr_verify`.

 # Safety
 As `orr_verify`.
 */
enum OrrStatus orr_prove(const struct OrrContext *ctx,
                         const struct OrrCatalog *cat,
                         const char *id,
                         char **json_out);

/*
 K(r)E(1-r) + E(r)K(1-r) - K(r)K(1-r) - pi/2 at r = re + i im, where re
 and im are exact rationals such as "1/2". Writes |defect| as a decimal
 string.

 # Safety
 Strings NUL-terminated, `abs_out` valid.
 */
enum OrrStatus orr_legendre_defect(const struct OrrContext *ctx,
                                   const char *re,
                                   const char *im,
                                   char **abs_out);

/*
 L_{-7}(2) to the context's target digits, as a decimal string.

 # Safety
 `ctx` live, `out` valid.
 */
enum OrrStatus orr_dirichlet_l_minus7(const struct OrrContext *ctx, char **out);

/*
 Message for the last failed call on this thread, or NULL. Valid until the
 next call into the library from the same thread.
 */
const char *orr_last_error_message(void);

/*
 # Safety
 `s` must be NULL or a string returned by this library.
 */
void orr_string_free(char *s);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* ORRKIT_H */
