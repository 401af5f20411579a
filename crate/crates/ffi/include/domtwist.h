#ifndef DOMTWIST_H
#define DOMTWIST_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

#define DT_OK 0

#define DT_ERR_USAGE 2

#define DT_ERR_REGION 3

#define DT_ERR_TILING 4

#define DT_ERR_HOMOLOGY 5

#define DT_ERR_PIPE 6

#define DT_ERR_LINK 7

#define DT_ERR_TWIST 8

#define DT_ERR_IO 9

#define DT_ERR_NULL_POINTER 20

#define DT_ERR_INVALID_UTF8 21

#define DT_ERR_PANIC 22

/**
 * Closed flux curves of a tiling.
 */
typedef struct DtCurves DtCurves;

/**
 * A cubical region.
 */
typedef struct DtRegion DtRegion;

/**
 * A domino tiling of a region.
 */
typedef struct DtTiling DtTiling;

/**
 * The tilings of a region, in enumeration order.
 */
typedef struct DtTilingList DtTilingList;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failed call on this thread, or null. The pointer
 * stays valid until the next call into the library on this thread.
 */
const char *dt_last_error_message(void);

/**
 * Releases a string returned by the library.
 *
 * # Safety
 * `s` must be null or a string returned by this library, not yet freed.
 */
void dt_string_free(char *s);

/**
 * Loads the region of a builtin fixture such as `"box-3-3-2"`.
 *
 * # Safety
 * `name` must be a NUL-terminated string and `out` writable.
 */
int32_t dt_region_builtin(const char *name, struct DtRegion **out);

/**
 * Parses a region from its JSON form.
 *
 * # Safety
 * `json` must be a NUL-terminated string and `out` writable.
 */
int32_t dt_region_from_json(const char *json, struct DtRegion **out);

/**
 * Number of cells of the region.
 *
 * # Safety
 * `region` must be a live handle and `out` writable.
 */
int32_t dt_region_len(const struct DtRegion *region, size_t *out);

/**
 * # Safety
 * `region` must be null or a handle not yet freed.
 */
void dt_region_free(struct DtRegion *region);

/**
 * Loads a stored tiling of a builtin fixture, for example `("hex", "t1")`.
 *
 * # Safety
 * Both strings must be NUL-terminated and `out` writable.
 */
int32_t dt_tiling_builtin(const char *builtin, const char *name, struct DtTiling **out);

/**
 * Parses a tiling from its JSON form.
 *
 * # Safety
 * `json` must be a NUL-terminated string and `out` writable.
 */
int32_t dt_tiling_from_json(const char *json, struct DtTiling **out);

/**
 * JSON form of the tiling. Free the result with [`dt_string_free`].
 *
 * # Safety
 * `tiling` must be a live handle and `out` writable.
 */
int32_t dt_tiling_to_json(const struct DtTiling *tiling, char **out);

/**
 * Floor-by-floor text drawing. Free the result with [`dt_string_free`].
 *
 * # Safety
 * `tiling` must be a live handle and `out` writable.
 */
int32_t dt_tiling_render(const struct DtTiling *tiling, char **out);

/**
 * Writes 1 when the relative flux class of the tiling is zero, else 0.
 *
 * # Safety
 * `tiling` must be a live handle and `out` writable.
 */
int32_t dt_tiling_rflux_is_zero(const struct DtTiling *tiling, int32_t *out);

/**
 * # Safety
 * `tiling` must be null or a handle not yet freed.
 */
void dt_tiling_free(struct DtTiling *tiling);

/**
 * All tilings of the region.
 *
 * # Safety
 * `region` must be a live handle and `out` writable.
 */
int32_t dt_enumerate(const struct DtRegion *region, struct DtTilingList **out);

/**
 * Number of tilings in the list; 0 for a null list.
 *
 * # Safety
 * `list` must be null or a live handle.
 */
size_t dt_tiling_list_len(const struct DtTilingList *list);

/**
 * Copy of the tiling at `index`.
 *
 * # Safety
 * `list` must be a live handle and `out` writable.
 */
int32_t dt_tiling_list_get(const struct DtTilingList *list, size_t index, struct DtTiling **out);

/**
 * # Safety
 * `list` must be null or a handle not yet freed.
 */
void dt_tiling_list_free(struct DtTilingList *list);

/**
 * Builds the flux curves of a tiling.
 *
 * `shell_json` selects the isolating shell; null means the stored shell of
 * a builtin region or else an auto-routed one. `framing` is null for the
 * default or one of `"transported"`, `"twisted:N"`, `"constant:X,Y,Z"`.
 * `pipes` is 5 or 6 and the flux per pipe is `phi_num / phi_den`.
 *
 * # Safety
 * `tiling` must be a live handle, the strings null or NUL-terminated, and
 * `out` writable.
 */
int32_t dt_curves_build(const struct DtTiling *tiling,
                        const char *shell_json,
                        int64_t phi_num,
                        int64_t phi_den,
                        int32_t pipes,
                        const char *framing,
                        struct DtCurves **out);

/**
 * Number of curves.
 *
 * # Safety
 * `curves` must be null or a live handle.
 */
size_t dt_curves_len(const struct DtCurves *curves);

/**
 * Writes the whole linking matrix, row major, into `buf` of `cap`
 * entries. `len` receives the number of curves; nothing is written to
 * `buf` when `cap` is smaller than its square.
 *
 * # Safety
 * `curves` must be a live handle, `len` writable and `buf` valid for `cap`
 * writes.
 */
int32_t dt_curves_matrix(const struct DtCurves *curves, int64_t *buf, size_t cap, size_t *len);

/**
 * Exact helicity as a reduced fraction.
 *
 * # Safety
 * `curves` must be a live handle and both outputs writable.
 */
int32_t dt_curves_helicity(const struct DtCurves *curves, int64_t *num, int64_t *den);

/**
 * JSON form of the curves. Free the result with [`dt_string_free`].
 *
 * # Safety
 * `curves` must be a live handle and `out` writable.
 */
int32_t dt_curves_to_json(const struct DtCurves *curves, char **out);

/**
 * # Safety
 * `curves` must be null or a handle not yet freed.
 */
void dt_curves_free(struct DtCurves *curves);

/**
 * Twist of `tiling` relative to `base`, read off the helicity difference.
 * `base` must have zero relative flux and the same flux as `tiling`.
 * The shell argument is as for [`dt_curves_build`]; the default five-pipe
 * system with flux 1/6 and transported framing is used.
 *
 * # Safety
 * Both tilings must be live handles, `shell_json` null or NUL-terminated,
 * and `out` writable.
 */
int32_t dt_twist(const struct DtTiling *tiling,
                 const struct DtTiling *base,
                 const char *shell_json,
                 int64_t *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* DOMTWIST_H */
