use delta_lens::contours::{
    amplitude_circle, argument_principle_box, box_contour, circle_points, correction_factor,
    trace_amplitude_one_line, trace_phase_zero_line, winding_count, LineKind, TraceConfig, EPS_BOX, EPS_TRACE,
};
use delta_lens::critical::{singular_points_delta5, CriticalPoint};
use delta_lens::quotient::fold_mod_pi;
use delta_lens::Error;
use rand::{Rng, SeedableRng};
use std::f64::consts::TAU;
use std::sync::OnceLock;

fn catalog() -> &'static [CriticalPoint] {
    static CAT: OnceLock<Vec<CriticalPoint>> = OnceLock::new();
    CAT.get_or_init(|| singular_points_delta5(0.0, 60.0, 0.01).unwrap())
}

#[test]
fn phase_lines_end_on_catalogued_points() {
    let cfg = TraceConfig::default();
    for n in 1..=12 {
        let path = trace_phase_zero_line(n, &cfg, catalog()).unwrap();
        assert_eq!(path.line_kind, LineKind::PhaseZero);
        let hit = path.terminus_point.unwrap();
        assert!((hit.t - path.terminus_t).abs() <= 0.05, "n={n}");
        for pair in path.points.windows(2) {
            assert!(pair[1].sigma < pair[0].sigma);
        }
        assert!(path.points.last().unwrap().sigma <= 0.5 + EPS_TRACE + 1e-12);
        for p in &path.points {
            assert!(fold_mod_pi(p.phase).abs() <= 1e-6, "n={n} at ({}, {})", p.sigma, p.t);
        }
    }
}

#[test]
fn first_phase_line_reaches_first_zero() {
    let path = trace_phase_zero_line(1, &TraceConfig::default(), catalog()).unwrap();
    assert!((path.terminus_t - 6.020_948_9).abs() < 0.05);
    assert!((path.points[0].t - 4.532_360_141_827_194).abs() < 1e-3);
}

#[test]
fn amplitude_lines_end_between_catalogued_points() {
    let cfg = TraceConfig::default();
    for n in 1..=12 {
        let path = trace_amplitude_one_line(n, &cfg, catalog()).unwrap();
        assert_eq!(path.points.last().unwrap().sigma, 0.5);
        for p in &path.points {
            assert!((p.modulus - 1.0).abs() <= 1e-6, "n={n}");
        }
        let t = path.terminus_t;
        assert!(catalog().windows(2).any(|w| w[0].t < t && t < w[1].t));
    }
    let first = trace_amplitude_one_line(1, &cfg, catalog()).unwrap();
    assert!(first.terminus_t > 6.02 && first.terminus_t < 7.07, "{}", first.terminus_t);
}

#[test]
fn termini_alternate_with_balanced_gaps() {
    let cfg = TraceConfig::default();
    let termini: Vec<f64> = (1..=11)
        .map(|n| trace_phase_zero_line(n, &cfg, catalog()).unwrap().terminus_point.unwrap().t)
        .collect();
    for w in termini.windows(2) {
        let inside = catalog().iter().filter(|p| w[0] < p.t && p.t < w[1]);
        let (zeros, poles) = inside.fold((0, 0), |(z, p), c| match c.kind {
            delta_lens::critical::SingularKind::Zero => (z + 1, p),
            delta_lens::critical::SingularKind::Pole => (z, p + 1),
        });
        assert_eq!(zeros, poles, "between {} and {}", w[0], w[1]);
    }
}

#[test]
fn boxes_have_zero_net_count() {
    for n in 1..=10 {
        let r = argument_principle_box(n, n + 1, 12.0, catalog()).unwrap();
        assert_eq!(r.zeros_minus_poles, 0, "n={n}");
        assert!((r.total_arg_change / TAU).abs() <= 1e-3);
        assert!(r.max_step_jump < std::f64::consts::FRAC_PI_2 + 1e-12);
    }
    let wide = argument_principle_box(1, 4, 12.0, catalog()).unwrap();
    assert_eq!(wide.zeros_minus_poles, 0);
    assert!(matches!(argument_principle_box(2, 2, 12.0, catalog()), Err(Error::DomainError(_))));
}

#[test]
fn box_contour_shape() {
    let contour = box_contour(1, 2, 12.0, catalog()).unwrap();
    assert_eq!(contour.first(), contour.last());
    let min_sigma = contour.iter().map(|p| p.0).fold(f64::INFINITY, f64::min);
    assert!((min_sigma - (0.5 + EPS_BOX)).abs() < 1e-12);
}

/// Distance from `p` to the boundary of the rectangle with lower-left corner
/// `(s0, t0)` and extent `w` by `h`.
fn boundary_distance(p: (f64, f64), s0: f64, t0: f64, w: f64, h: f64) -> f64 {
    let (x, y) = (p.0 - s0, p.1 - t0);
    let inside = (0.0..=w).contains(&x) && (0.0..=h).contains(&y);
    if inside {
        x.min(w - x).min(y).min(h - y)
    } else {
        let dx = if x < 0.0 { -x } else { (x - w).max(0.0) };
        let dy = if y < 0.0 { -y } else { (y - h).max(0.0) };
        dx.hypot(dy)
    }
}

#[test]
fn small_rectangles_wind_integrally() {
    let mut rng = rand::rngs::StdRng::seed_from_u64(99);
    let mut done = 0;
    while done < 20 {
        let s0 = rng.gen_range(-1.0..2.0);
        let t0 = rng.gen_range(0.5..50.0);
        let (w, h) = (rng.gen_range(0.05..0.4), rng.gen_range(0.05..0.4));
        let rect = [(s0, t0), (s0 + w, t0), (s0 + w, t0 + h), (s0, t0 + h), (s0, t0)];
        let close = catalog().iter().any(|p| boundary_distance((0.5, p.t), s0, t0, w, h) < 1e-3);
        if close {
            continue;
        }
        let r = winding_count(&rect, 100_000).unwrap();
        let turns = r.total_arg_change / TAU;
        assert!((turns - r.zeros_minus_poles as f64).abs() <= 1e-3, "{rect:?}: {turns}");
        let inside = catalog().iter().filter(|p| s0 < 0.5 && 0.5 < s0 + w && t0 < p.t && p.t < t0 + h);
        let expected: i64 = inside.map(|p| if p.kind == delta_lens::critical::SingularKind::Zero { 1 } else { -1 }).sum();
        assert_eq!(r.zeros_minus_poles, expected, "{rect:?}");
        done += 1;
    }
}

#[test]
fn amplitude_circles_sampled() {
    for a in [0.8, 0.9, 0.95, 1.05, 1.25] {
        let circle = amplitude_circle(a).unwrap();
        let worst = circle_points(&circle, 32)
            .into_iter()
            .map(|z| (correction_factor(z).norm() - a).abs())
            .fold(0.0, f64::max);
        assert!(worst <= 1e-9, "A={a}: {worst}");
    }
}
