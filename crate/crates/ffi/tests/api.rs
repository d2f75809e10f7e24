use delta_lens_ffi::*;
use std::ffi::{CStr, CString};
use std::ptr;

fn last_name() -> String {
    let p = dl_last_error_name();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_str().unwrap().to_string()
}

fn c(re: f64, im: f64) -> DlComplex {
    DlComplex { re, im }
}

#[test]
fn scalar_functions() {
    let mut out = c(0.0, 0.0);
    unsafe {
        assert_eq!(dl_zeta(c(2.0, 0.0), &mut out), DlStatus::Ok);
        assert!((out.re - std::f64::consts::PI.powi(2) / 6.0).abs() < 1e-14);
        assert_eq!(dl_beta(c(2.0, 0.0), &mut out), DlStatus::Ok);
        assert!((out.re - 0.915_965_594_177_219).abs() < 1e-14);
        assert_eq!(dl_dirichlet_l(3, c(1.0, 0.0), &mut out), DlStatus::Ok);
        assert!((out.re - std::f64::consts::PI / 27f64.sqrt()).abs() < 1e-13);
        let mut a = c(0.0, 0.0);
        assert_eq!(dl_delta5(c(2.0, 3.0), &mut out), DlStatus::Ok);
        assert_eq!(dl_delta_q(4, c(2.0, 3.0), &mut a), DlStatus::Ok);
        assert_eq!(out, a);
        assert_eq!(dl_f5(c(0.3, 1.0), &mut out), DlStatus::Ok);
        let mut x = 0.0;
        assert_eq!(dl_residue_at_pole(1.0, &mut x), DlStatus::Ok);
        assert!(x > 0.0);
        assert_eq!(dl_slope_at_zero(0.75, &mut x), DlStatus::Ok);
    }
    assert!(dl_last_error_name().is_null());
}

#[test]
fn errors_are_reported() {
    let mut out = c(0.0, 0.0);
    unsafe {
        assert_eq!(dl_zeta(c(1.0, 0.0), &mut out), DlStatus::Pole);
        assert_eq!(last_name(), "PoleOfZeta");
        assert!(!CStr::from_ptr(dl_last_error_message()).to_bytes().is_empty());
        assert_eq!(dl_dirichlet_l(5, c(2.0, 0.0), &mut out), DlStatus::Domain);
        assert_eq!(dl_zeta(c(2.0, 0.0), ptr::null_mut()), DlStatus::NullPointer);
        assert_eq!(last_name(), "NullPointer");
        let mut x = 0.0;
        assert_eq!(dl_residue_at_pole(0.5, &mut x), DlStatus::Domain);
        assert_eq!(dl_catalog_len(ptr::null()), 0);
        dl_catalog_free(ptr::null_mut());
        let mut cat = ptr::null_mut();
        assert_eq!(dl_catalog_generate(9, 10.0, 0.01, &mut cat), DlStatus::Domain);
        assert!(cat.is_null());
        let missing = CString::new("/nonexistent/dir/catalog.txt").unwrap();
        assert_eq!(dl_catalog_load(missing.as_ptr(), &mut cat), DlStatus::Io);
    }
}

#[test]
fn catalog_trace_and_box() {
    unsafe {
        let mut cat = ptr::null_mut();
        assert_eq!(dl_catalog_generate(2, 20.0, 0.01, &mut cat), DlStatus::Ok);
        let n = dl_catalog_len(cat);
        assert!(n > 5);
        let mut first = std::mem::zeroed::<DlCriticalPoint>();
        assert_eq!(dl_catalog_get(cat, 0, &mut first), DlStatus::Ok);
        assert!((first.t - 6.0209).abs() < 1e-4);
        assert_eq!(first.kind, 0);
        assert_eq!(dl_catalog_get(cat, n, &mut first), DlStatus::OutOfRange);

        let dir = tempfile::tempdir().unwrap();
        let file = CString::new(dir.path().join("c.txt").to_str().unwrap()).unwrap();
        assert_eq!(dl_catalog_save(cat, file.as_ptr()), DlStatus::Ok);
        let mut back = ptr::null_mut();
        assert_eq!(dl_catalog_load(file.as_ptr(), &mut back), DlStatus::Ok);
        assert_eq!(dl_catalog_len(back), n);
        dl_catalog_free(back);

        let mut path = ptr::null_mut();
        assert_eq!(dl_trace_phase_zero(cat, 1, 12.0, 0.02, &mut path), DlStatus::Ok);
        assert!(dl_path_len(path) > 10);
        let (mut t, mut matched) = (0.0, 0);
        let mut hit = std::mem::zeroed::<DlCriticalPoint>();
        assert_eq!(dl_path_terminus(path, &mut t, &mut matched, &mut hit), DlStatus::Ok);
        assert_eq!(matched, 1);
        assert!((hit.t - 6.0209).abs() < 1e-4);
        let mut p = std::mem::zeroed::<DlTracePoint>();
        assert_eq!(dl_path_point(path, 0, &mut p), DlStatus::Ok);
        assert!((p.sigma - 12.0).abs() < 1e-12);
        dl_path_free(path);

        assert_eq!(dl_trace_amplitude_one(cat, 1, 12.0, 0.02, &mut path), DlStatus::Ok);
        assert_eq!(dl_path_terminus(path, &mut t, &mut matched, ptr::null_mut()), DlStatus::Ok);
        assert!(t > 6.0209 && t < 7.0674);
        dl_path_free(path);

        let mut w = std::mem::zeroed::<DlWindingReport>();
        assert_eq!(dl_argument_principle_box(cat, 1, 2, 12.0, &mut w), DlStatus::Ok);
        assert_eq!(w.zeros_minus_poles, 0);
        dl_catalog_free(cat);
    }
}

#[test]
fn grid_round_trip() {
    let spec = DlPortraitSpec {
        sigma_min: -1.0,
        sigma_max: 2.0,
        t_min: 0.0,
        t_max: 10.0,
        width: 60,
        height: 200,
        mode: 0,
        q: 4,
    };
    unsafe {
        let mut grid = ptr::null_mut();
        assert_eq!(dl_render(spec, &mut grid), DlStatus::Ok);
        let (mut w, mut h) = (0, 0);
        assert_eq!(dl_grid_size(grid, &mut w, &mut h), DlStatus::Ok);
        assert_eq!((w, h), (60, 200));
        let (mut px, mut len) = (ptr::null(), 0);
        assert_eq!(dl_grid_pixels(grid, &mut px, &mut len), DlStatus::Ok);
        assert_eq!(len, 3 * 60 * 200);
        let mut count = 0;
        assert_eq!(dl_grid_meeting_points(grid, ptr::null_mut(), 0, &mut count), DlStatus::Ok);
        let mut xy = vec![0.0; 2 * count];
        assert_eq!(dl_grid_meeting_points(grid, xy.as_mut_ptr(), count, &mut count), DlStatus::Ok);
        assert!(xy.chunks(2).any(|p| (p[0] - 0.5).abs() < 0.1 && (p[1] - 6.0209).abs() < 0.2), "{xy:?}");

        let dir = tempfile::tempdir().unwrap();
        let file = dir.path().join("p.ppm");
        let cfile = CString::new(file.to_str().unwrap()).unwrap();
        assert_eq!(dl_grid_write_ppm(grid, cfile.as_ptr()), DlStatus::Ok);
        let bytes = std::fs::read(&file).unwrap();
        assert!(bytes.starts_with(b"P6\n60 200\n255\n"));
        assert!(bytes.ends_with(std::slice::from_raw_parts(px, len)));
        dl_grid_free(grid);

        let bad = DlPortraitSpec { mode: 5, ..spec };
        assert_eq!(dl_render(bad, &mut grid), DlStatus::Domain);
        let bad = DlPortraitSpec { q: 5, ..spec };
        assert_eq!(dl_render(bad, &mut grid), DlStatus::Domain);
    }
}

#[test]
fn version_matches_crate() {
    let v = unsafe { CStr::from_ptr(dl_version()) };
    assert_eq!(v.to_str().unwrap(), env!("CARGO_PKG_VERSION"));
}

#[test]
fn header_declares_the_api() {
    let header = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/include/delta_lens.h")).unwrap();
    assert!(header.starts_with("#ifndef DELTA_LENS_H"));
    for name in [
        "DL_STATUS_OK = 0",
        "DL_STATUS_PANIC = 8",
        "typedef struct DlCatalog DlCatalog;",
        "typedef struct DlGrid DlGrid;",
        "typedef struct DlPath DlPath;",
        "dl_zeta(",
        "dl_delta_q(",
        "dl_catalog_generate(",
        "dl_trace_phase_zero(",
        "dl_argument_principle_box(",
        "dl_render(",
        "dl_grid_meeting_points(",
        "dl_last_error_message(",
    ] {
        assert!(header.contains(name), "missing {name}");
    }
}
