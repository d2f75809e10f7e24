#ifndef DELTA_LENS_H
#define DELTA_LENS_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/*
 Result code of every call.
 */
typedef enum DlStatus {
  DL_STATUS_OK = 0,
  /*
   A required pointer argument was null.
   */
  DL_STATUS_NULL_POINTER = 1,
  /*
   Argument outside the supported domain.
   */
  DL_STATUS_DOMAIN = 2,
  /*
   The point is a pole (or a zero of a denominator factor).
   */
  DL_STATUS_POLE = 3,
  /*
   A scan, trace or contour could not be completed reliably.
   */
  DL_STATUS_NUMERICAL = 4,
  DL_STATUS_IO = 5,
  /*
   Catalog file with wrong version or corrupt records.
   */
  DL_STATUS_FORMAT = 6,
  /*
   Index past the end of a handle's data.
   */
  DL_STATUS_OUT_OF_RANGE = 7,
  /*
   Internal panic caught at the boundary.
   */
  DL_STATUS_PANIC = 8,
} DlStatus;

/*
 Zero catalog handle.
 */
typedef struct DlCatalog DlCatalog;

/*
 Rendered portrait handle.
 */
typedef struct DlGrid DlGrid;

/*
 Traced line handle.
 */
typedef struct DlPath DlPath;

typedef struct DlComplex {
  double re;
  double im;
} DlComplex;

/*
 Kind codes: 0 zero, 1 pole. Source codes: 0 zeta zero, 1 beta zero,
 2 zero of zeta(2s - 1/2).
 */
typedef struct DlCriticalPoint {
  double t;
  int32_t kind;
  int32_t source;
  uint32_t multiplicity;
  double refined_to;
} DlCriticalPoint;

typedef struct DlTracePoint {
  double sigma;
  double t;
  double phase;
  double modulus;
} DlTracePoint;

typedef struct DlWindingReport {
  double total_arg_change;
  int64_t zeros_minus_poles;
  double max_step_jump;
} DlWindingReport;

/*
 Portrait request. `mode`: 0 phase quadrants, 1 amplitude. `q`: 4 for
 Delta5, or 3, 7, 8.
 */
typedef struct DlPortraitSpec {
  double sigma_min;
  double sigma_max;
  double t_min;
  double t_max;
  uint32_t width;
  uint32_t height;
  int32_t mode;
  uint32_t q;
} DlPortraitSpec;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/*
 Library version as a static NUL-terminated string.
 */
const char *dl_version(void);

/*
 Name of the last error on this thread, or null after a successful call.
 Valid until the next call on the same thread.
 */
const char *dl_last_error_name(void);

/*
 Message of the last error on this thread, or null after a successful call.
 Valid until the next call on the same thread.
 */
const char *dl_last_error_message(void);

/*
 Riemann zeta.

 # Safety
 `out` must be null or valid for one write.
 */
enum DlStatus dl_zeta(struct DlComplex s, struct DlComplex *out);

/*
 Dirichlet beta, the L-function of the character mod 4.

 # Safety
 `out` must be null or valid for one write.
 */
enum DlStatus dl_beta(struct DlComplex s, struct DlComplex *out);

/*
 L-function of the real odd character of discriminant `-q`, q in {3, 4, 7, 8}.

 # Safety
 `out` must be null or valid for one write.
 */
enum DlStatus dl_dirichlet_l(uint32_t q, struct DlComplex s, struct DlComplex *out);

/*
 `zeta(s) beta(s) / zeta(2s - 1/2)`.

 # Safety
 `out` must be null or valid for one write.
 */
enum DlStatus dl_delta5(struct DlComplex s, struct DlComplex *out);

/*
 The discriminant `-q` analogue; `q = 4` gives [`dl_delta5`].

 # Safety
 `out` must be null or valid for one write.
 */
enum DlStatus dl_delta_q(uint32_t q, struct DlComplex s, struct DlComplex *out);

/*
 Gamma-factor ratio of the functional equation.

 # Safety
 `out` must be null or valid for one write.
 */
enum DlStatus dl_f5(struct DlComplex s, struct DlComplex *out);

/*
 Residue at a real pole, sigma in {1, -3/4, -7/4, ...}.

 # Safety
 `out` must be null or valid for one write.
 */
enum DlStatus dl_residue_at_pole(double sigma, double *out);

/*
 Derivative at a real zero, sigma in {3/4, -1, -2, ...}.

 # Safety
 `out` must be null or valid for one write.
 */
enum DlStatus dl_slope_at_zero(double sigma, double *out);

/*
 Scan for critical-line points. `source`: 0 zeta, 1 beta, 2 zeros and
 poles of Delta5.

 # Safety
 `out` must be null or valid for one write; the handle is freed with
 [`dl_catalog_free`].
 */
enum DlStatus dl_catalog_generate(int32_t source,
                                  double t_max,
                                  double scan_step,
                                  struct DlCatalog **out);

/*
 Read a catalog file.

 # Safety
 `path` must be a NUL-terminated string; `out` must be null or valid for
 one write.
 */
enum DlStatus dl_catalog_load(const char *path, struct DlCatalog **out);

/*
 Write a catalog file.

 # Safety
 `catalog` must be a live handle and `path` a NUL-terminated string.
 */
enum DlStatus dl_catalog_save(const struct DlCatalog *catalog, const char *path);

/*
 Number of entries; 0 for a null handle.

 # Safety
 `catalog` must be null or a live handle.
 */
size_t dl_catalog_len(const struct DlCatalog *catalog);

/*
 Entry `index`, in ascending t.

 # Safety
 `catalog` must be a live handle; `out` null or valid for one write.
 */
enum DlStatus dl_catalog_get(const struct DlCatalog *catalog,
                             size_t index,
                             struct DlCriticalPoint *out);

/*
 Release a catalog; null is ignored.

 # Safety
 `catalog` must be null or a handle not yet freed.
 */
void dl_catalog_free(struct DlCatalog *catalog);

/*
 Trace the n-th phase-zero line from `sigma_start` to the critical line.
 The catalog must hold the zeros and poles of Delta5 (source 2).

 # Safety
 `catalog` must be a live handle; `out` null or valid for one write. The
 path is freed with [`dl_path_free`].
 */
enum DlStatus dl_trace_phase_zero(const struct DlCatalog *catalog,
                                  uint32_t n,
                                  double sigma_start,
                                  double step,
                                  struct DlPath **out);

/*
 Trace the n-th unit-modulus line; as [`dl_trace_phase_zero`].

 # Safety
 As [`dl_trace_phase_zero`].
 */
enum DlStatus dl_trace_amplitude_one(const struct DlCatalog *catalog,
                                     uint32_t n,
                                     double sigma_start,
                                     double step,
                                     struct DlPath **out);

/*
 Number of traced points; 0 for a null handle.

 # Safety
 `path` must be null or a live handle.
 */
size_t dl_path_len(const struct DlPath *path);

/*
 Traced point `index`, in order of decreasing sigma.

 # Safety
 `path` must be a live handle; `out` null or valid for one write.
 */
enum DlStatus dl_path_point(const struct DlPath *path, size_t index, struct DlTracePoint *out);

/*
 Critical-line ordinate where the line ends, and the catalogued point it
 was matched to. `matched` is set to 0 when there is none; `point` may be
 null.

 # Safety
 `path` must be a live handle; `t` and `matched` valid for one write;
 `point` null or valid for one write.
 */
enum DlStatus dl_path_terminus(const struct DlPath *path,
                               double *t,
                               int32_t *matched,
                               struct DlCriticalPoint *point);

/*
 Release a path; null is ignored.

 # Safety
 `path` must be null or a handle not yet freed.
 */
void dl_path_free(struct DlPath *path);

/*
 Argument principle on the box between phase lines `n_low` and `n_high`.

 # Safety
 `catalog` must be a live handle holding Delta5 points; `out` null or
 valid for one write.
 */
enum DlStatus dl_argument_principle_box(const struct DlCatalog *catalog,
                                        uint32_t n_low,
                                        uint32_t n_high,
                                        double sigma_right,
                                        struct DlWindingReport *out);

/*
 Render a portrait.

 # Safety
 `out` must be null or valid for one write; the grid is freed with
 [`dl_grid_free`].
 */
enum DlStatus dl_render(struct DlPortraitSpec spec, struct DlGrid **out);

/*
 Width and height in pixels.

 # Safety
 `grid` must be a live handle; `width` and `height` valid for one write.
 */
enum DlStatus dl_grid_size(const struct DlGrid *grid, uint32_t *width, uint32_t *height);

/*
 Row-major RGB bytes, `3 * width * height` of them, owned by the grid.

 # Safety
 `grid` must be a live handle; `pixels` and `len` valid for one write.
 The bytes stay valid until the grid is freed.
 */
enum DlStatus dl_grid_pixels(const struct DlGrid *grid, const uint8_t **pixels, size_t *len);

/*
 Write the grid as binary PPM.

 # Safety
 `grid` must be a live handle and `path` a NUL-terminated string.
 */
enum DlStatus dl_grid_write_ppm(const struct DlGrid *grid, const char *path);

/*
 Points where all four quadrant colours meet, as (sigma, t) pairs written
 to `xy[0..2*capacity]`. `count` receives the number found, which may
 exceed `capacity`; only the first `capacity` are written.

 # Safety
 `grid` must be a live handle; `xy` null (with `capacity` 0) or valid for
 `2 * capacity` writes; `count` valid for one write.
 */
enum DlStatus dl_grid_meeting_points(const struct DlGrid *grid,
                                     double *xy,
                                     size_t capacity,
                                     size_t *count);

/*
 Release a grid; null is ignored.

 # Safety
 `grid` must be null or a handle not yet freed.
 */
void dl_grid_free(struct DlGrid *grid);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* DELTA_LENS_H */
