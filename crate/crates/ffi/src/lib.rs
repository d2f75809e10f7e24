//! C ABI for delta-lens.
//!
//! Every function returns a [`DlStatus`]; on failure the error name and
//! message are kept per thread and read back with [`dl_last_error_name`] and
//! [`dl_last_error_message`]. Handles are opaque and released with their
//! matching `_free` function.

use delta_lens::census::{load_catalog, save_catalog, CatalogSource, ZeroCatalog};
use delta_lens::contours::{
    argument_principle_box, trace_amplitude_one_line, trace_phase_zero_line, PhasePath, TraceConfig,
};
use delta_lens::critical::{residue_at_pole, slope_at_zero, CriticalPoint, PointSource, SingularKind};
use delta_lens::evalcore::{beta_l, dirichlet_l, zeta, Discriminant, EvalOptions};
use delta_lens::quotient::{delta5, delta_q, f5, QuotientKind};
use delta_lens::render::{locate_quadrant_meeting_points, render, write_ppm, PixelGrid, PortraitMode, PortraitSpec};
use delta_lens::{Complex64, Error};
use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::PathBuf;

/// Result code of every call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DlStatus {
    Ok = 0,
    /// A required pointer argument was null.
    NullPointer = 1,
    /// Argument outside the supported domain.
    Domain = 2,
    /// The point is a pole (or a zero of a denominator factor).
    Pole = 3,
    /// A scan, trace or contour could not be completed reliably.
    Numerical = 4,
    Io = 5,
    /// Catalog file with wrong version or corrupt records.
    Format = 6,
    /// Index past the end of a handle's data.
    OutOfRange = 7,
    /// Internal panic caught at the boundary.
    Panic = 8,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DlComplex {
    pub re: f64,
    pub im: f64,
}

/// Kind codes: 0 zero, 1 pole. Source codes: 0 zeta zero, 1 beta zero,
/// 2 zero of zeta(2s - 1/2).
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DlCriticalPoint {
    pub t: f64,
    pub kind: i32,
    pub source: i32,
    pub multiplicity: u32,
    pub refined_to: f64,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DlTracePoint {
    pub sigma: f64,
    pub t: f64,
    pub phase: f64,
    pub modulus: f64,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DlWindingReport {
    pub total_arg_change: f64,
    pub zeros_minus_poles: i64,
    pub max_step_jump: f64,
}

/// Portrait request. `mode`: 0 phase quadrants, 1 amplitude. `q`: 4 for
/// Delta5, or 3, 7, 8.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DlPortraitSpec {
    pub sigma_min: f64,
    pub sigma_max: f64,
    pub t_min: f64,
    pub t_max: f64,
    pub width: u32,
    pub height: u32,
    pub mode: i32,
    pub q: u32,
}

/// Zero catalog handle.
pub struct DlCatalog {
    inner: ZeroCatalog,
}

/// Traced line handle.
pub struct DlPath {
    inner: PhasePath,
}

/// Rendered portrait handle.
pub struct DlGrid {
    inner: PixelGrid,
    spec: PortraitSpec,
}

struct LastError {
    name: CString,
    message: CString,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<LastError>> = const { RefCell::new(None) };
}

fn status_of(e: &Error) -> DlStatus {
    match e {
        Error::PoleOfGamma(_)
        | Error::PoleOfZeta(_)
        | Error::PoleOfDelta5(_)
        | Error::GammaPoleOnPath(_)
        | Error::PoleOfDeltaQ { .. }
        | Error::BracketZero { .. }
        | Error::PoleOfCompletedZeta(_) => DlStatus::Pole,
        Error::StepTooCoarse { .. }
        | Error::UnexpectedCoincidence(_)
        | Error::TraceStalled { .. }
        | Error::SingularityTooClose { .. }
        | Error::NoCatalogMatch { .. }
        | Error::TerminusNotBetweenSingularities(_)
        | Error::RefinementExhausted(_)
        | Error::SingularOnContour(_) => DlStatus::Numerical,
        Error::IoFailure(_) => DlStatus::Io,
        Error::FormatVersionMismatch { .. } | Error::CorruptRecord { .. } => DlStatus::Format,
        _ => DlStatus::Domain,
    }
}

fn set_error(name: &str, message: String) {
    let clean = |s: String| CString::new(s.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|slot| {
        *slot.borrow_mut() = Some(LastError { name: clean(name.to_string()), message: clean(message) });
    });
}

fn fail(status: DlStatus, name: &str, message: impl Into<String>) -> DlStatus {
    set_error(name, message.into());
    status
}

/// Runs `body`, recording errors and catching panics.
fn guard(body: impl FnOnce() -> Result<(), DlStatus>) -> DlStatus {
    LAST_ERROR.with(|slot| *slot.borrow_mut() = None);
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(Ok(())) => DlStatus::Ok,
        Ok(Err(status)) => status,
        Err(_) => fail(DlStatus::Panic, "Panic", "internal panic"),
    }
}

fn lib<T>(r: delta_lens::Result<T>) -> Result<T, DlStatus> {
    r.map_err(|e| fail(status_of(&e), e.name(), e.to_string()))
}

fn null() -> DlStatus {
    fail(DlStatus::NullPointer, "NullPointer", "required pointer argument is null")
}

fn domain(message: impl Into<String>) -> DlStatus {
    fail(DlStatus::Domain, "DomainError", message)
}

/// # Safety
/// `p` must be null or valid for writes of `T`.
unsafe fn write_out<T>(p: *mut T, v: T) -> Result<(), DlStatus> {
    if p.is_null() {
        return Err(null());
    }
    p.write(v);
    Ok(())
}

/// # Safety
/// `p` must be null or point to a live `T`.
unsafe fn borrow<'a, T>(p: *const T) -> Result<&'a T, DlStatus> {
    p.as_ref().ok_or_else(null)
}

/// # Safety
/// `p` must be null or a NUL-terminated string.
unsafe fn path_arg(p: *const c_char) -> Result<PathBuf, DlStatus> {
    if p.is_null() {
        return Err(null());
    }
    let s = CStr::from_ptr(p).to_str().map_err(|_| domain("path is not valid UTF-8"))?;
    Ok(PathBuf::from(s))
}

fn to_c(z: Complex64) -> DlComplex {
    DlComplex { re: z.re, im: z.im }
}

fn point_to_c(p: &CriticalPoint) -> DlCriticalPoint {
    DlCriticalPoint {
        t: p.t,
        kind: match p.kind {
            SingularKind::Zero => 0,
            SingularKind::Pole => 1,
        },
        source: match p.source {
            PointSource::ZetaZero => 0,
            PointSource::BetaZero => 1,
            PointSource::HalfZetaZero => 2,
        },
        multiplicity: p.multiplicity,
        refined_to: p.refined_to,
    }
}

fn eval(s: DlComplex, out: *mut DlComplex, f: impl FnOnce(Complex64) -> delta_lens::Result<Complex64>) -> DlStatus {
    guard(|| {
        let v = lib(f(Complex64::new(s.re, s.im)))?;
        // SAFETY: the caller passes a writable DlComplex or null.
        unsafe { write_out(out, to_c(v)) }
    })
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn dl_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Name of the last error on this thread, or null after a successful call.
/// Valid until the next call on the same thread.
#[no_mangle]
pub extern "C" fn dl_last_error_name() -> *const c_char {
    LAST_ERROR.with(|slot| slot.borrow().as_ref().map_or(std::ptr::null(), |e| e.name.as_ptr()))
}

/// Message of the last error on this thread, or null after a successful call.
/// Valid until the next call on the same thread.
#[no_mangle]
pub extern "C" fn dl_last_error_message() -> *const c_char {
    LAST_ERROR.with(|slot| slot.borrow().as_ref().map_or(std::ptr::null(), |e| e.message.as_ptr()))
}

/// Riemann zeta.
///
/// # Safety
/// `out` must be null or valid for one write.
#[no_mangle]
pub unsafe extern "C" fn dl_zeta(s: DlComplex, out: *mut DlComplex) -> DlStatus {
    eval(s, out, |s| zeta(s, &EvalOptions::default()))
}

/// Dirichlet beta, the L-function of the character mod 4.
///
/// # Safety
/// `out` must be null or valid for one write.
#[no_mangle]
pub unsafe extern "C" fn dl_beta(s: DlComplex, out: *mut DlComplex) -> DlStatus {
    eval(s, out, |s| beta_l(s, &EvalOptions::default()))
}

/// L-function of the real odd character of discriminant `-q`, q in {3, 4, 7, 8}.
///
/// # Safety
/// `out` must be null or valid for one write.
#[no_mangle]
pub unsafe extern "C" fn dl_dirichlet_l(q: u32, s: DlComplex, out: *mut DlComplex) -> DlStatus {
    eval(s, out, |s| dirichlet_l(Discriminant::new(q)?, s, &EvalOptions::default()))
}

/// `zeta(s) beta(s) / zeta(2s - 1/2)`.
///
/// # Safety
/// `out` must be null or valid for one write.
#[no_mangle]
pub unsafe extern "C" fn dl_delta5(s: DlComplex, out: *mut DlComplex) -> DlStatus {
    eval(s, out, |s| delta5(s, &EvalOptions::default()))
}

/// The discriminant `-q` analogue; `q = 4` gives [`dl_delta5`].
///
/// # Safety
/// `out` must be null or valid for one write.
#[no_mangle]
pub unsafe extern "C" fn dl_delta_q(q: u32, s: DlComplex, out: *mut DlComplex) -> DlStatus {
    eval(s, out, |s| delta_q(QuotientKind::new(q)?, s, &EvalOptions::default()))
}

/// Gamma-factor ratio of the functional equation.
///
/// # Safety
/// `out` must be null or valid for one write.
#[no_mangle]
pub unsafe extern "C" fn dl_f5(s: DlComplex, out: *mut DlComplex) -> DlStatus {
    eval(s, out, f5)
}

/// Residue at a real pole, sigma in {1, -3/4, -7/4, ...}.
///
/// # Safety
/// `out` must be null or valid for one write.
#[no_mangle]
pub unsafe extern "C" fn dl_residue_at_pole(sigma: f64, out: *mut f64) -> DlStatus {
    guard(|| {
        let v = lib(residue_at_pole(sigma))?.coefficient;
        write_out(out, v)
    })
}

/// Derivative at a real zero, sigma in {3/4, -1, -2, ...}.
///
/// # Safety
/// `out` must be null or valid for one write.
#[no_mangle]
pub unsafe extern "C" fn dl_slope_at_zero(sigma: f64, out: *mut f64) -> DlStatus {
    guard(|| {
        let v = lib(slope_at_zero(sigma))?.coefficient;
        write_out(out, v)
    })
}

/// Scan for critical-line points. `source`: 0 zeta, 1 beta, 2 zeros and
/// poles of Delta5.
///
/// # Safety
/// `out` must be null or valid for one write; the handle is freed with
/// [`dl_catalog_free`].
#[no_mangle]
pub unsafe extern "C" fn dl_catalog_generate(
    source: i32,
    t_max: f64,
    scan_step: f64,
    out: *mut *mut DlCatalog,
) -> DlStatus {
    guard(|| {
        if out.is_null() {
            return Err(null());
        }
        let source = match source {
            0 => CatalogSource::Zeta,
            1 => CatalogSource::Beta,
            2 => CatalogSource::Delta5Merged,
            other => return Err(domain(format!("unknown catalog source {other}"))),
        };
        let inner = lib(ZeroCatalog::generate(source, t_max, scan_step))?;
        write_out(out, Box::into_raw(Box::new(DlCatalog { inner })))
    })
}

/// Read a catalog file.
///
/// # Safety
/// `path` must be a NUL-terminated string; `out` must be null or valid for
/// one write.
#[no_mangle]
pub unsafe extern "C" fn dl_catalog_load(path: *const c_char, out: *mut *mut DlCatalog) -> DlStatus {
    guard(|| {
        if out.is_null() {
            return Err(null());
        }
        let inner = lib(load_catalog(&path_arg(path)?))?;
        write_out(out, Box::into_raw(Box::new(DlCatalog { inner })))
    })
}

/// Write a catalog file.
///
/// # Safety
/// `catalog` must be a live handle and `path` a NUL-terminated string.
#[no_mangle]
pub unsafe extern "C" fn dl_catalog_save(catalog: *const DlCatalog, path: *const c_char) -> DlStatus {
    guard(|| lib(save_catalog(&borrow(catalog)?.inner, &path_arg(path)?)))
}

/// Number of entries; 0 for a null handle.
///
/// # Safety
/// `catalog` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn dl_catalog_len(catalog: *const DlCatalog) -> usize {
    catalog.as_ref().map_or(0, |c| c.inner.entries.len())
}

/// Entry `index`, in ascending t.
///
/// # Safety
/// `catalog` must be a live handle; `out` null or valid for one write.
#[no_mangle]
pub unsafe extern "C" fn dl_catalog_get(catalog: *const DlCatalog, index: usize, out: *mut DlCriticalPoint) -> DlStatus {
    guard(|| {
        let entries = &borrow(catalog)?.inner.entries;
        let p = entries.get(index).ok_or_else(|| {
            fail(DlStatus::OutOfRange, "OutOfRange", format!("index {index} past {} entries", entries.len()))
        })?;
        write_out(out, point_to_c(p))
    })
}

/// Release a catalog; null is ignored.
///
/// # Safety
/// `catalog` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn dl_catalog_free(catalog: *mut DlCatalog) {
    if !catalog.is_null() {
        drop(Box::from_raw(catalog));
    }
}

/// # Safety
/// See [`dl_trace_phase_zero`].
unsafe fn trace(
    catalog: *const DlCatalog,
    n: u32,
    sigma_start: f64,
    step: f64,
    out: *mut *mut DlPath,
    phase: bool,
) -> DlStatus {
    guard(|| {
        if out.is_null() {
            return Err(null());
        }
        let entries = &borrow(catalog)?.inner.entries;
        let cfg = TraceConfig { sigma_start, step };
        let inner = if phase {
            lib(trace_phase_zero_line(n, &cfg, entries))?
        } else {
            lib(trace_amplitude_one_line(n, &cfg, entries))?
        };
        write_out(out, Box::into_raw(Box::new(DlPath { inner })))
    })
}

/// Trace the n-th phase-zero line from `sigma_start` to the critical line.
/// The catalog must hold the zeros and poles of Delta5 (source 2).
///
/// # Safety
/// `catalog` must be a live handle; `out` null or valid for one write. The
/// path is freed with [`dl_path_free`].
#[no_mangle]
pub unsafe extern "C" fn dl_trace_phase_zero(
    catalog: *const DlCatalog,
    n: u32,
    sigma_start: f64,
    step: f64,
    out: *mut *mut DlPath,
) -> DlStatus {
    trace(catalog, n, sigma_start, step, out, true)
}

/// Trace the n-th unit-modulus line; as [`dl_trace_phase_zero`].
///
/// # Safety
/// As [`dl_trace_phase_zero`].
#[no_mangle]
pub unsafe extern "C" fn dl_trace_amplitude_one(
    catalog: *const DlCatalog,
    n: u32,
    sigma_start: f64,
    step: f64,
    out: *mut *mut DlPath,
) -> DlStatus {
    trace(catalog, n, sigma_start, step, out, false)
}

/// Number of traced points; 0 for a null handle.
///
/// # Safety
/// `path` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn dl_path_len(path: *const DlPath) -> usize {
    path.as_ref().map_or(0, |p| p.inner.points.len())
}

/// Traced point `index`, in order of decreasing sigma.
///
/// # Safety
/// `path` must be a live handle; `out` null or valid for one write.
#[no_mangle]
pub unsafe extern "C" fn dl_path_point(path: *const DlPath, index: usize, out: *mut DlTracePoint) -> DlStatus {
    guard(|| {
        let points = &borrow(path)?.inner.points;
        let p = points.get(index).ok_or_else(|| {
            fail(DlStatus::OutOfRange, "OutOfRange", format!("index {index} past {} points", points.len()))
        })?;
        write_out(out, DlTracePoint { sigma: p.sigma, t: p.t, phase: p.phase, modulus: p.modulus })
    })
}

/// Critical-line ordinate where the line ends, and the catalogued point it
/// was matched to. `matched` is set to 0 when there is none; `point` may be
/// null.
///
/// # Safety
/// `path` must be a live handle; `t` and `matched` valid for one write;
/// `point` null or valid for one write.
#[no_mangle]
pub unsafe extern "C" fn dl_path_terminus(
    path: *const DlPath,
    t: *mut f64,
    matched: *mut i32,
    point: *mut DlCriticalPoint,
) -> DlStatus {
    guard(|| {
        let p = &borrow(path)?.inner;
        write_out(t, p.terminus_t)?;
        write_out(matched, i32::from(p.terminus_point.is_some()))?;
        if let (Some(hit), false) = (p.terminus_point, point.is_null()) {
            point.write(point_to_c(&hit));
        }
        Ok(())
    })
}

/// Release a path; null is ignored.
///
/// # Safety
/// `path` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn dl_path_free(path: *mut DlPath) {
    if !path.is_null() {
        drop(Box::from_raw(path));
    }
}

/// Argument principle on the box between phase lines `n_low` and `n_high`.
///
/// # Safety
/// `catalog` must be a live handle holding Delta5 points; `out` null or
/// valid for one write.
#[no_mangle]
pub unsafe extern "C" fn dl_argument_principle_box(
    catalog: *const DlCatalog,
    n_low: u32,
    n_high: u32,
    sigma_right: f64,
    out: *mut DlWindingReport,
) -> DlStatus {
    guard(|| {
        let entries = &borrow(catalog)?.inner.entries;
        let r = lib(argument_principle_box(n_low, n_high, sigma_right, entries))?;
        write_out(
            out,
            DlWindingReport {
                total_arg_change: r.total_arg_change,
                zeros_minus_poles: r.zeros_minus_poles,
                max_step_jump: r.max_step_jump,
            },
        )
    })
}

/// Render a portrait.
///
/// # Safety
/// `out` must be null or valid for one write; the grid is freed with
/// [`dl_grid_free`].
#[no_mangle]
pub unsafe extern "C" fn dl_render(spec: DlPortraitSpec, out: *mut *mut DlGrid) -> DlStatus {
    guard(|| {
        if out.is_null() {
            return Err(null());
        }
        let mode = match spec.mode {
            0 => PortraitMode::PhaseQuadrant,
            1 => PortraitMode::Amplitude,
            other => return Err(domain(format!("unknown portrait mode {other}"))),
        };
        let spec = PortraitSpec {
            sigma_min: spec.sigma_min,
            sigma_max: spec.sigma_max,
            t_min: spec.t_min,
            t_max: spec.t_max,
            width: spec.width,
            height: spec.height,
            mode,
            function: lib(QuotientKind::new(spec.q))?,
        };
        let inner = lib(render(&spec))?;
        write_out(out, Box::into_raw(Box::new(DlGrid { inner, spec })))
    })
}

/// Width and height in pixels.
///
/// # Safety
/// `grid` must be a live handle; `width` and `height` valid for one write.
#[no_mangle]
pub unsafe extern "C" fn dl_grid_size(grid: *const DlGrid, width: *mut u32, height: *mut u32) -> DlStatus {
    guard(|| {
        let g = &borrow(grid)?.inner;
        write_out(width, g.width)?;
        write_out(height, g.height)
    })
}

/// Row-major RGB bytes, `3 * width * height` of them, owned by the grid.
///
/// # Safety
/// `grid` must be a live handle; `pixels` and `len` valid for one write.
/// The bytes stay valid until the grid is freed.
#[no_mangle]
pub unsafe extern "C" fn dl_grid_pixels(grid: *const DlGrid, pixels: *mut *const u8, len: *mut usize) -> DlStatus {
    guard(|| {
        let g = &borrow(grid)?.inner;
        write_out(pixels, g.pixels.as_ptr())?;
        write_out(len, g.pixels.len())
    })
}

/// Write the grid as binary PPM.
///
/// # Safety
/// `grid` must be a live handle and `path` a NUL-terminated string.
#[no_mangle]
pub unsafe extern "C" fn dl_grid_write_ppm(grid: *const DlGrid, path: *const c_char) -> DlStatus {
    guard(|| lib(write_ppm(&borrow(grid)?.inner, &path_arg(path)?)))
}

/// Points where all four quadrant colours meet, as (sigma, t) pairs written
/// to `xy[0..2*capacity]`. `count` receives the number found, which may
/// exceed `capacity`; only the first `capacity` are written.
///
/// # Safety
/// `grid` must be a live handle; `xy` null (with `capacity` 0) or valid for
/// `2 * capacity` writes; `count` valid for one write.
#[no_mangle]
pub unsafe extern "C" fn dl_grid_meeting_points(
    grid: *const DlGrid,
    xy: *mut f64,
    capacity: usize,
    count: *mut usize,
) -> DlStatus {
    guard(|| {
        let g = borrow(grid)?;
        let points = locate_quadrant_meeting_points(&g.inner, &g.spec);
        if capacity > 0 && xy.is_null() {
            return Err(null());
        }
        for (k, p) in points.iter().take(capacity).enumerate() {
            xy.add(2 * k).write(p.0);
            xy.add(2 * k + 1).write(p.1);
        }
        write_out(count, points.len())
    })
}

/// Release a grid; null is ignored.
///
/// # Safety
/// `grid` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn dl_grid_free(grid: *mut DlGrid) {
    if !grid.is_null() {
        drop(Box::from_raw(grid));
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn status_groups() {
        assert_eq!(status_of(&Error::PoleOfDelta5(Complex64::new(1.0, 0.0))), DlStatus::Pole);
        assert_eq!(status_of(&Error::StepTooCoarse { lo: 0.0, hi: 1.0 }), DlStatus::Numerical);
        assert_eq!(status_of(&Error::CorruptRecord { line: 2, reason: String::new() }), DlStatus::Format);
        assert_eq!(status_of(&Error::DomainError(String::new())), DlStatus::Domain);
    }

    #[test]
    fn panics_become_status() {
        let status = guard(|| panic!("boom"));
        assert_eq!(status, DlStatus::Panic);
        let name = unsafe { CStr::from_ptr(dl_last_error_name()) };
        assert_eq!(name.to_str().unwrap(), "Panic");
    }

    #[test]
    fn success_clears_last_error() {
        let _ = guard(|| Err(domain("x")));
        assert!(!dl_last_error_name().is_null());
        assert_eq!(guard(|| Ok(())), DlStatus::Ok);
        assert!(dl_last_error_name().is_null());
    }
}
