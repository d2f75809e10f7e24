use delta_lens::critical::{
    completed_beta, completed_zeta, find_zeros, residue_at_pole, singular_points_delta5, slope_at_zero,
    CriticalPoint, PointSource, SingularKind, ZeroSource,
};
use delta_lens::evalcore::{beta_l, zeta, EvalOptions};
use delta_lens::quotient::{delta5, functional_equation_residual};
use delta_lens::Complex64;
use rand::{Rng, SeedableRng};
use std::f64::consts::PI;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn opts() -> EvalOptions {
    EvalOptions::default()
}

/// Ordinates of sign changes of Re of the completed function, midpoint of
/// each bracket at the given step.
fn sign_scan_oracle(f: impl Fn(f64) -> f64, t_max: f64, step: f64) -> Vec<f64> {
    let n = (t_max / step).round() as usize;
    let mut out = Vec::new();
    let mut prev = f(0.0);
    for k in 1..=n {
        let t = k as f64 * step;
        let cur = f(t);
        if prev * cur < 0.0 {
            out.push(t - 0.5 * step);
        }
        prev = cur;
    }
    out
}

fn zeta_oracle(t_max: f64) -> Vec<f64> {
    sign_scan_oracle(|t| completed_zeta(c(0.5, t), &opts()).unwrap().re, t_max, 1e-3)
}

fn beta_oracle(t_max: f64) -> Vec<f64> {
    sign_scan_oracle(|t| completed_beta(c(0.5, t), &opts()).unwrap().re, t_max, 1e-3)
}

#[test]
fn zeros_match_sign_scan_oracle_below_sixty() {
    let zs = find_zeros(ZeroSource::Zeta, 0.0, 60.0, 0.01).unwrap();
    let oracle = zeta_oracle(60.0);
    assert_eq!(zs.len(), 13);
    assert_eq!(zs.len(), oracle.len());
    for (p, o) in zs.iter().zip(&oracle) {
        assert!((p.t - o).abs() <= 5e-4 + 1e-12, "{} vs {o}", p.t);
        assert_eq!(p.multiplicity, 1);
        assert!(p.refined_to <= 1e-6);
    }
    let bs = find_zeros(ZeroSource::Beta, 0.0, 60.0, 0.01).unwrap();
    let oracle = beta_oracle(60.0);
    assert_eq!(bs.len(), oracle.len());
    for (p, o) in bs.iter().zip(&oracle) {
        assert!((p.t - o).abs() <= 5e-4 + 1e-12, "{} vs {o}", p.t);
    }
}

#[test]
fn first_ordinates_frozen() {
    // frozen from the sign-scan oracle refined by bisection
    let zs = find_zeros(ZeroSource::Zeta, 0.0, 26.0, 0.01).unwrap();
    let want = [14.134_725_141_734_694, 21.022_039_638_771_555, 25.010_857_580_145_689];
    assert_eq!(zs.len(), want.len());
    for (p, w) in zs.iter().zip(want) {
        assert!((p.t - w).abs() < 1e-8, "{} vs {w}", p.t);
    }
    let bs = find_zeros(ZeroSource::Beta, 0.0, 13.5, 0.01).unwrap();
    let want = [6.020_948_904_697_597, 10.243_770_304_166_56, 12.988_098_012_312_43];
    assert_eq!(bs.len(), want.len());
    for (p, w) in bs.iter().zip(want) {
        assert!((p.t - w).abs() < 1e-8, "{} vs {w}", p.t);
    }
}

#[test]
fn completed_functions_real_on_critical_line() {
    for k in 2..=200 {
        let t = 0.5 * k as f64;
        let z = completed_zeta(c(0.5, t), &opts()).unwrap();
        assert!(z.im.abs() / (z.norm() + 1e-300) <= 1e-9, "zeta t={t}: {z}");
        let b = completed_beta(c(0.5, t), &opts()).unwrap();
        assert!(b.im.abs() / (b.norm() + 1e-300) <= 1e-9, "beta t={t}: {b}");
    }
}

fn catalog_60() -> Vec<CriticalPoint> {
    singular_points_delta5(0.0, 60.0, 0.01).unwrap()
}

#[test]
fn catalog_local_excursions() {
    let cat = catalog_60();
    let mut relaxed = Vec::new();
    for p in &cat {
        // a point of the opposite kind close by shrinks the local coefficient
        // (the pole at 30.41589 sits 0.009 below the zeta zero 30.42488)
        let crowded = cat.iter().any(|q| q.kind != p.kind && (q.t - p.t).abs() < 0.02);
        if crowded {
            relaxed.push(p.t);
        }
        for d in [c(1e-3, 0.0), c(-1e-3, 0.0), c(0.0, 1e-3), c(0.0, -1e-3)] {
            let m = delta5(c(0.5, p.t) + d, &opts()).unwrap().norm();
            match (p.kind, crowded) {
                (SingularKind::Pole, false) => assert!(m > 10.0, "pole {}: {m}", p.t),
                (SingularKind::Zero, false) => assert!(m < 0.1, "zero {}: {m}", p.t),
                (SingularKind::Pole, true) => assert!(m > 1.0, "pole {}: {m}", p.t),
                (SingularKind::Zero, true) => assert!(m < 1.0, "zero {}: {m}", p.t),
            }
        }
    }
    // three close zero-pole pairs below t = 60: near 29.66, 30.42, 58.11
    assert_eq!(relaxed.len(), 6, "{relaxed:?}");
}

#[test]
fn catalog_structure() {
    let cat = catalog_60();
    for p in &cat {
        assert_eq!(p.kind == SingularKind::Pole, p.source == PointSource::HalfZetaZero);
    }
    for pair in cat.windows(2) {
        assert!(pair[1].t - pair[0].t > 1e-9);
    }
    let count = |s: PointSource| cat.iter().filter(|p| p.source == s).count();
    assert_eq!(count(PointSource::ZetaZero), 13);
    assert_eq!(count(PointSource::HalfZetaZero), zeta_oracle(120.0).len());
    assert_eq!(count(PointSource::BetaZero), beta_oracle(60.0).len());
}

#[test]
fn functional_equation_on_grid() {
    let cat = catalog_60();
    let mut rng = rand::rngs::StdRng::seed_from_u64(2024);
    let mut tested = 0;
    while tested < 200 {
        let s = c(rng.gen_range(-2.0..3.0), rng.gen_range(2.0..60.0));
        let near_catalog = cat.iter().any(|p| (s - c(0.5, p.t)).norm() < 0.05);
        // F5 poles sit on the real axis, far below t = 2
        if near_catalog {
            continue;
        }
        let r = functional_equation_residual(s, &opts()).unwrap();
        assert!(r <= 1e-8, "{s}: {r}");
        tested += 1;
    }
}

#[test]
fn residues_against_high_precision_values() {
    // 30-digit reference values; (pi/4)/zeta(3/2) in closed form at sigma = 1
    let closed = (PI / 4.0) / zeta(c(1.5, 0.0), &opts()).unwrap().re;
    assert!((residue_at_pole(1.0).unwrap().coefficient - closed).abs() < 1e-13);
    let frozen = [
        (1.0, 0.300_645_164_7),
        (-0.75, 0.312_763_1),
        (-1.75, 0.255_504_1),
        (-2.75, 0.237_820_8),
        (-3.75, 0.230_135_6),
        (-4.75, 0.226_565_9),
    ];
    for (sigma, want) in frozen {
        let got = residue_at_pole(sigma).unwrap().coefficient;
        assert!((got - want).abs() < 1e-6, "sigma={sigma}: {got} vs {want}");
    }
}

#[test]
fn residue_matches_closed_form_derivative() {
    // zeta'(-2n) = (-1)^n (2n)! zeta(2n+1) / (2 (2 pi)^{2n})
    for n in 1..=5u32 {
        let sigma = 0.25 - f64::from(n);
        let fact: f64 = (1..=2 * n).map(f64::from).product();
        let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
        let z_odd = zeta(c(f64::from(2 * n + 1), 0.0), &opts()).unwrap().re;
        let dz = sign * fact * z_odd / (2.0 * (2.0 * PI).powi(2 * n as i32));
        let num = zeta(c(sigma, 0.0), &opts()).unwrap() * beta_l(c(sigma, 0.0), &opts()).unwrap();
        let want = num.re / (2.0 * dz);
        let got = residue_at_pole(sigma).unwrap().coefficient;
        assert!((got - want).abs() < 1e-8 * want.abs(), "n={n}: {got} vs {want}");
    }
}

#[test]
fn slopes_against_high_precision_values() {
    let frozen = [
        (0.75, -5.038_779_7),
        (-1.0, -5.705_517_2),
        (-2.0, -4.924_274_7),
        (-3.0, -4.644_728_6),
        (-4.0, -4.519_787_1),
    ];
    for (sigma, want) in frozen {
        let got = slope_at_zero(sigma).unwrap().coefficient;
        assert!((got - want).abs() < 1e-6, "sigma={sigma}: {got} vs {want}");
    }
    // the slope is the derivative of Delta5 itself
    for sigma in [-1.0, -2.0, -3.0] {
        let h = 1e-5;
        let d = (delta5(c(sigma + h, 0.0), &opts()).unwrap() - delta5(c(sigma - h, 0.0), &opts()).unwrap()) / (2.0 * h);
        assert!((d.re - slope_at_zero(sigma).unwrap().coefficient).abs() < 1e-6);
    }
}
