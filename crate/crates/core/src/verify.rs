//! Acceptance checks, shared by `delta-lens verify-all` and the test suite.
//!
//! Each check computes its reference independently where one is needed
//! (closed forms, sign-change scans) and reports a single pass/fail line.

use crate::census::{
    census_identity_check, distribution_report, n_beta_main, n_zeta_main, pairs_between_phase_lines, CatalogSource,
    ZeroCatalog,
};
use crate::contours::{
    amplitude_circle, argument_principle_box, circle_points, correction_factor, trace_amplitude_one_line,
    trace_phase_zero_line, PhasePath, TraceConfig,
};
use crate::critical::{
    completed_beta, completed_zeta, residue_at_pole, singular_points_delta5, slope_at_zero, CriticalPoint,
    SingularKind,
};
use crate::evalcore::{beta_l, dirichlet_l, hurwitz_zeta, zeta, Discriminant, EvalOptions};
use crate::quotient::{bracket_factor, delta5, delta_q, fold_mod_pi, functional_equation_residual, QuotientKind};
use crate::render::{encode_ppm, locate_quadrant_meeting_points, render, PortraitMode, PortraitSpec};
use crate::{Complex64, Error, Result};
use std::f64::consts::{FRAC_PI_4, FRAC_PI_8, LN_2, PI};
use std::fmt;
use std::sync::OnceLock;
use std::time::Instant;

/// Criterion numbers and names, in suite order.
pub const CRITERIA: [(u32, &str); 13] = [
    (1, "residues"),
    (2, "slopes"),
    (3, "functional-equation"),
    (4, "critical-phase"),
    (5, "singular-sequence"),
    (6, "phase-termini"),
    (7, "box-balance"),
    (8, "census-identity"),
    (9, "zero-counts"),
    (10, "amplitude-circles"),
    (11, "delta-q-anchors"),
    (12, "render"),
    (13, "special-values"),
];

const CATALAN: f64 = 0.915_965_594_177_219_015;

/// Result of one criterion.
#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub id: u32,
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
    pub seconds: f64,
}

impl fmt::Display for Outcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let tag = if self.passed { "PASS" } else { "FAIL" };
        write!(f, "[{tag}] {:>2} {:<20} {} ({:.2} s)", self.id, self.name, self.detail, self.seconds)
    }
}

/// Resolve `--only` selectors (numbers or names) to criterion numbers.
pub fn select(only: &[String]) -> Result<Vec<u32>> {
    if only.is_empty() {
        return Ok(CRITERIA.iter().map(|c| c.0).collect());
    }
    let mut ids = Vec::new();
    for key in only {
        let hit = CRITERIA.iter().find(|(id, name)| *name == key.as_str() || id.to_string() == *key);
        match hit {
            Some(&(id, _)) if !ids.contains(&id) => ids.push(id),
            Some(_) => {}
            None => return Err(Error::DomainError(format!("unknown criterion '{key}'"))),
        }
    }
    ids.sort_unstable();
    Ok(ids)
}

/// Runs criteria with shared, lazily built catalogs and traces.
pub struct Verifier {
    opts: EvalOptions,
    singular: OnceLock<Result<Vec<CriticalPoint>>>,
    zeta: OnceLock<Result<ZeroCatalog>>,
    beta: OnceLock<Result<ZeroCatalog>>,
    merged: OnceLock<Result<ZeroCatalog>>,
    phase_lines: OnceLock<Result<Vec<PhasePath>>>,
}

/// Outcome of a check body: pass flag and a one-line summary.
type Check = Result<(bool, String)>;

fn cached<T: Clone>(cell: &OnceLock<Result<T>>, build: impl FnOnce() -> Result<T>) -> Result<&T> {
    cell.get_or_init(build).as_ref().map_err(Clone::clone)
}

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

impl Verifier {
    pub fn new(opts: EvalOptions) -> Self {
        Verifier {
            opts,
            singular: OnceLock::new(),
            zeta: OnceLock::new(),
            beta: OnceLock::new(),
            merged: OnceLock::new(),
            phase_lines: OnceLock::new(),
        }
    }

    /// Run one criterion by number.
    pub fn run(&self, id: u32) -> Outcome {
        let name = CRITERIA.iter().find(|c| c.0 == id).map_or("unknown", |c| c.1);
        let start = Instant::now();
        let result = match id {
            1 => self.residues(),
            2 => self.slopes(),
            3 => self.functional_equation(),
            4 => self.critical_phase(),
            5 => self.singular_sequence(),
            6 => self.phase_termini(),
            7 => self.box_balance(),
            8 => self.census_identity(),
            9 => self.zero_counts(),
            10 => self.amplitude_circles(),
            11 => self.delta_q_anchors(),
            12 => self.render_regression(),
            13 => self.special_values(),
            _ => Err(Error::DomainError(format!("unknown criterion {id}"))),
        };
        let (passed, detail) = result.unwrap_or_else(|e| (false, format!("{}: {e}", e.name())));
        Outcome { id, name, passed, detail, seconds: start.elapsed().as_secs_f64() }
    }

    /// Run the given criteria in order.
    pub fn run_all(&self, ids: &[u32]) -> Vec<Outcome> {
        ids.iter().map(|&id| self.run(id)).collect()
    }

    fn singular(&self) -> Result<&[CriticalPoint]> {
        cached(&self.singular, || singular_points_delta5(0.0, 60.0, 0.01)).map(Vec::as_slice)
    }

    fn zeta_catalog(&self) -> Result<&ZeroCatalog> {
        cached(&self.zeta, || ZeroCatalog::generate(CatalogSource::Zeta, 120.0, 0.01))
    }

    fn beta_catalog(&self) -> Result<&ZeroCatalog> {
        cached(&self.beta, || ZeroCatalog::generate(CatalogSource::Beta, 100.0, 0.01))
    }

    fn merged_catalog(&self) -> Result<&ZeroCatalog> {
        cached(&self.merged, || ZeroCatalog::generate(CatalogSource::Delta5Merged, 60.0, 0.01))
    }

    fn phase_lines(&self) -> Result<&[PhasePath]> {
        let catalog = self.singular()?;
        cached(&self.phase_lines, || {
            (1..=12).map(|n| trace_phase_zero_line(n, &TraceConfig::default(), catalog)).collect()
        })
        .map(Vec::as_slice)
    }

    fn residues(&self) -> Check {
        let table = [
            (1.0, 0.300645, 1e-5),
            (-0.75, 0.312673, 1e-4),
            (-1.75, 0.25505, 1e-4),
            (-2.75, 0.237821, 1e-4),
            (-3.75, 0.230136, 1e-4),
            (-4.75, 0.22657, 1e-4),
        ];
        let mut bad = Vec::new();
        for (sigma, want, tol) in table {
            let got = residue_at_pole(sigma)?.coefficient;
            if (got - want).abs() > tol {
                bad.push(format!("sigma={sigma}: {got:.7} vs {want}"));
            }
        }
        let closed = FRAC_PI_4 / zeta(c(1.5, 0.0), &self.opts)?.re;
        let at_one = residue_at_pole(1.0)?.coefficient;
        if (at_one - closed).abs() > 1e-9 {
            bad.push(format!("sigma=1 vs (pi/4)/zeta(3/2): {:.2e}", (at_one - closed).abs()));
        }
        Ok(summary(bad, "6 residues and closed form at sigma=1"))
    }

    fn slopes(&self) -> Check {
        let table = [(0.75, -5.0378), (-1.0, -5.7055), (-2.0, -4.9245), (-3.0, -4.645), (-4.0, -4.51975)];
        let mut bad = Vec::new();
        for (sigma, want) in table {
            let got = slope_at_zero(sigma)?.coefficient;
            if (got - want).abs() > 1e-3 {
                bad.push(format!("sigma={sigma}: {got:.7} vs {want}"));
            }
        }
        let s = c(0.75, 0.0);
        let closed = 2.0 * zeta(s, &self.opts)?.re * beta_l(s, &self.opts)?.re;
        let got = slope_at_zero(0.75)?.coefficient;
        if (got - closed).abs() > 1e-8 {
            bad.push(format!("sigma=3/4 vs 2 zeta L: {:.2e}", (got - closed).abs()));
        }
        Ok(summary(bad, "5 slopes and closed form at sigma=3/4"))
    }

    fn functional_equation(&self) -> Check {
        let catalog = self.singular()?;
        let (mut tested, mut worst) = (0, 0.0f64);
        for i in 0..20 {
            for j in 0..10 {
                let s = c(-2.0 + 5.0 * (i as f64 + 0.5) / 20.0, 2.0 + 58.0 * (j as f64 + 0.5) / 10.0);
                if catalog.iter().any(|p| (s - c(0.5, p.t)).norm() < 0.05) {
                    continue;
                }
                worst = worst.max(functional_equation_residual(s, &self.opts)?);
                tested += 1;
            }
        }
        Ok((worst <= 1e-8, format!("{tested} points, worst residual {worst:.2e}")))
    }

    fn critical_phase(&self) -> Check {
        let mut worst = 0.0f64;
        for t in [5.0, 10.0, 20.0, 40.0, 80.0] {
            let got = fold_mod_pi(delta5(c(0.5, t), &self.opts)?.arg());
            let want = -FRAC_PI_8 - 1.0 / (32.0 * t);
            worst = worst.max((got - want).abs());
        }
        Ok((worst <= 2e-2, format!("worst phase error {worst:.2e}")))
    }

    fn singular_sequence(&self) -> Check {
        let catalog = self.singular()?;
        let mut oracle: Vec<(f64, SingularKind)> = Vec::new();
        for t in sign_scan(|t| completed_beta(c(0.5, t), &self.opts).map(|v| v.re), 14.0)? {
            oracle.push((t, SingularKind::Zero));
        }
        for t in sign_scan(|t| completed_zeta(c(0.5, t), &self.opts).map(|v| v.re), 28.0)? {
            oracle.push((t, SingularKind::Zero));
            oracle.push((t / 2.0, SingularKind::Pole));
        }
        oracle.retain(|p| p.0 < 14.0);
        oracle.sort_by(|a, b| a.0.total_cmp(&b.0));
        let expected = [
            SingularKind::Zero,
            SingularKind::Pole,
            SingularKind::Zero,
            SingularKind::Pole,
            SingularKind::Pole,
            SingularKind::Zero,
        ];
        if catalog.len() < 6 || oracle.len() < 6 {
            return Ok((false, format!("only {} catalogued, {} from oracle", catalog.len(), oracle.len())));
        }
        let mut bad = Vec::new();
        for k in 0..6 {
            let (p, o) = (&catalog[k], oracle[k]);
            if p.kind != expected[k] || o.1 != expected[k] || (p.t - o.0).abs() > 1e-6 {
                bad.push(format!("#{}: {:.7} {:?} vs oracle {:.7} {:?}", k + 1, p.t, p.kind, o.0, o.1));
            }
        }
        let listed: Vec<String> = catalog[..6].iter().map(|p| format!("{:.4}", p.t)).collect();
        Ok(summary(bad, &format!("Z,P,Z,P,P,Z at {}", listed.join(", "))))
    }

    fn phase_termini(&self) -> Check {
        let catalog = self.singular()?;
        let mut bad = Vec::new();
        for (n, path) in (1..).zip(self.phase_lines()?) {
            let ok = path.terminus_point.is_some_and(|p| (p.t - path.terminus_t).abs() <= 0.05);
            if !ok {
                bad.push(format!("phase line {n} ends at {:.4}", path.terminus_t));
            }
        }
        for n in 1..=12 {
            let t = trace_amplitude_one_line(n, &TraceConfig::default(), catalog)?.terminus_t;
            if !catalog.windows(2).any(|w| w[0].t < t && t < w[1].t) {
                bad.push(format!("amplitude line {n} ends at {t:.4}"));
            }
        }
        Ok(summary(bad, "12 phase lines on catalogued points, 12 amplitude lines between them"))
    }

    fn box_balance(&self) -> Check {
        let catalog = self.singular()?;
        let merged = self.merged_catalog()?;
        let traces = &self.phase_lines()?[..11];
        let mut bad = Vec::new();
        for n in 1..=10 {
            let r = argument_principle_box(n, n + 1, 12.0, catalog)?;
            if r.zeros_minus_poles != 0 {
                bad.push(format!("box {n}: {}", r.zeros_minus_poles));
            }
            let (z, p) = pairs_between_phase_lines(n, merged, traces)?;
            if z != p {
                bad.push(format!("lines {n}-{}: {z} zeros, {p} poles", n + 1));
            }
        }
        Ok(summary(bad, "10 boxes net zero, zeros and poles paired"))
    }

    fn census_identity(&self) -> Check {
        let (zeta, beta) = (self.zeta_catalog()?, self.beta_catalog()?);
        let mut bad = Vec::new();
        let golden = (5f64.sqrt() - 1.0) / 2.0;
        let worst = (1..=100)
            .map(|k| 1.0 + 199.0 * (k as f64 * golden).fract())
            .map(|t| (n_zeta_main(2.0 * t) - n_zeta_main(t) - n_beta_main(t)).abs())
            .fold(0.0, f64::max);
        if worst > 1e-10 {
            bad.push(format!("main-term identity off by {worst:.2e}"));
        }
        for t in [20.0, 30.0, 40.0, 50.0] {
            let (a, b) = census_identity_check(t, zeta, beta)?;
            if a.counted.abs_diff(b.counted) > 1 {
                bad.push(format!("T={t}: {} vs {}", a.counted, b.counted));
            }
        }
        let pole_termini: Vec<f64> = self
            .phase_lines()?
            .iter()
            .filter_map(|p| p.terminus_point)
            .filter(|p| p.kind == SingularKind::Pole)
            .map(|p| p.t)
            .take(2)
            .collect();
        for &t in &pole_termini {
            let (a, b) = census_identity_check(t, zeta, beta)?;
            if a.counted != b.counted {
                bad.push(format!("terminus {t:.4}: {} vs {}", a.counted, b.counted));
            }
        }
        if pole_termini.len() < 2 {
            bad.push("fewer than two pole termini".into());
        }
        Ok(summary(bad, "main terms, |difference| <= 1, exact at two termini"))
    }

    fn zero_counts(&self) -> Check {
        let (zeta, beta) = (self.zeta_catalog()?, self.beta_catalog()?);
        let mut bad = Vec::new();
        let mut worst = 0.0f64;
        for t in [20.0, 40.0, 60.0, 80.0, 100.0] {
            for (label, cat) in [("zeta", zeta), ("beta", beta)] {
                let r = distribution_report(cat, t)?;
                worst = worst.max(r.residual.abs());
                if r.residual.abs() > 2.0 {
                    bad.push(format!("{label} t={t}: {} vs {:.3}", r.counted, r.main_term));
                }
            }
        }
        Ok(summary(bad, &format!("worst |counted - main| {worst:.3}")))
    }

    fn amplitude_circles(&self) -> Check {
        let mut worst = 0.0f64;
        for a in [0.8, 0.9, 0.95, 1.05, 1.25] {
            let circle = amplitude_circle(a)?;
            for z in circle_points(&circle, 64) {
                worst = worst.max((correction_factor(z).norm() - a).abs());
            }
        }
        Ok((worst <= 1e-9, format!("worst modulus deviation {worst:.2e}")))
    }

    fn delta_q_anchors(&self) -> Check {
        let mut bad = Vec::new();
        let (mut worst, mut quotient_worst) = (0.0f64, 0.0f64);
        for (q, step) in [(3, PI / (4.0f64 / 3.0).ln()), (8, PI / LN_2)] {
            let kind = QuotientKind::new(q)?;
            let bracket = |t: f64| {
                bracket_factor(kind, c(14.0, t))
                    .map(|b| fold_mod_pi(b.arg()))
                    .ok_or(Error::UnsupportedDiscriminant(q))
            };
            let quotient = |t: f64| delta_q(kind, c(14.0, t), &self.opts).map(|v| fold_mod_pi(v.arg()));
            for m in 1..=5 {
                let want = m as f64 * step;
                match bisect(&bracket, want - 0.1, want + 0.1)? {
                    Some(t) if (t - want).abs() <= 1e-3 => worst = worst.max((t - want).abs()),
                    Some(t) => bad.push(format!("q={q} m={m}: {t:.6} vs {want:.6}")),
                    None => bad.push(format!("q={q} m={m}: no phase zero near {want:.4}")),
                }
                if let Some(t) = bisect(&quotient, want - 0.1, want + 0.1)? {
                    quotient_worst = quotient_worst.max((t - want).abs());
                }
            }
        }
        let ok = format!("10 ordinates, worst offset {worst:.2e} (full quotient {quotient_worst:.2e})");
        Ok(summary(bad, &ok))
    }

    fn render_regression(&self) -> Check {
        let catalog = self.singular()?;
        let spec = PortraitSpec {
            sigma_min: -1.0,
            sigma_max: 2.0,
            t_min: 0.0,
            t_max: 60.0,
            width: 600,
            height: 1200,
            mode: PortraitMode::PhaseQuadrant,
            function: QuotientKind::DELTA5,
        };
        let single = rayon::ThreadPoolBuilder::new()
            .num_threads(1)
            .build()
            .map_err(|e| Error::DomainError(e.to_string()))?
            .install(|| render(&spec))?;
        let pooled = render(&spec)?;
        let (mut a, mut b) = (Vec::new(), Vec::new());
        encode_ppm(&single, &mut a)?;
        encode_ppm(&pooled, &mut b)?;
        let mut bad = Vec::new();
        if a != b {
            bad.push("output depends on worker count".to_string());
        }
        let found = locate_quadrant_meeting_points(&pooled, &spec);
        let (pw, ph) = (spec.pixel_width(), spec.pixel_height());
        for p in catalog.iter().take(6) {
            let hit = found.iter().any(|f| (f.0 - 0.5).abs() <= 2.0 * pw && (f.1 - p.t).abs() <= 2.0 * ph);
            if !hit {
                bad.push(format!("no meeting point near t={:.4}", p.t));
            }
        }
        Ok(summary(bad, &format!("{} bytes stable, {} meeting points", a.len(), found.len())))
    }

    fn special_values(&self) -> Check {
        let o = &self.opts;
        let re = |v: Result<Complex64>| v.map(|z| z.re);
        let l3 = Discriminant::new(3)?;
        let cases = [
            ("zeta(2)", re(zeta(c(2.0, 0.0), o))?, PI * PI / 6.0, 1e-10),
            ("zeta(0)", re(zeta(c(0.0, 0.0), o))?, -0.5, 1e-10),
            ("zeta(-2)", re(zeta(c(-2.0, 0.0), o))?, 0.0, 1e-10),
            ("beta(1)", re(beta_l(c(1.0, 0.0), o))?, FRAC_PI_4, 1e-10),
            ("beta(0)", re(beta_l(c(0.0, 0.0), o))?, 0.5, 1e-10),
            ("beta(2)", re(beta_l(c(2.0, 0.0), o))?, CATALAN, 1e-10),
            ("L-3(1)", re(dirichlet_l(l3, c(1.0, 0.0), o))?, PI / (3.0 * 3f64.sqrt()), 1e-10),
            ("hurwitz(2,1/2)", re(hurwitz_zeta(c(2.0, 0.0), 0.5, o))?, PI * PI / 2.0, 1e-9),
        ];
        let mut bad = Vec::new();
        let mut worst = 0.0f64;
        for (label, got, want, tol) in cases {
            worst = worst.max((got - want).abs());
            if (got - want).abs() > tol {
                bad.push(format!("{label}: {got:.15} vs {want:.15}"));
            }
        }
        Ok(summary(bad, &format!("8 values, worst error {worst:.2e}")))
    }
}

fn summary(bad: Vec<String>, ok: &str) -> (bool, String) {
    if bad.is_empty() {
        (true, ok.to_string())
    } else {
        (false, bad.join("; "))
    }
}

/// Sign changes of `f` on (0, t_max] at step 1e-3, bisected to 1e-12.
fn sign_scan(f: impl Fn(f64) -> Result<f64>, t_max: f64) -> Result<Vec<f64>> {
    let h = 1e-3;
    let steps = (t_max / h).round() as usize;
    let mut roots = Vec::new();
    let mut prev = f(h)?;
    for k in 2..=steps {
        let t = k as f64 * h;
        let v = f(t)?;
        if prev * v < 0.0 {
            if let Some(r) = bisect(&f, t - h, t)? {
                roots.push(r);
            }
        }
        prev = v;
    }
    Ok(roots)
}

fn bisect(f: &impl Fn(f64) -> Result<f64>, mut lo: f64, mut hi: f64) -> Result<Option<f64>> {
    let mut f_lo = f(lo)?;
    if f_lo * f(hi)? > 0.0 {
        return Ok(None);
    }
    while hi - lo > 1e-12 {
        let mid = 0.5 * (lo + hi);
        let f_mid = f(mid)?;
        if f_lo * f_mid <= 0.0 {
            hi = mid;
        } else {
            lo = mid;
            f_lo = f_mid;
        }
    }
    Ok(Some(0.5 * (lo + hi)))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn selection_by_name_and_number() {
        assert_eq!(select(&[]).unwrap().len(), 13);
        assert_eq!(select(&["residues".into(), "13".into(), "1".into()]).unwrap(), vec![1, 13]);
        assert!(matches!(select(&["nope".into()]), Err(Error::DomainError(_))));
    }

    #[test]
    fn fast_criteria_pass() {
        let v = Verifier::new(EvalOptions::default());
        for id in [2, 4, 10, 13] {
            let o = v.run(id);
            assert!(o.passed, "{o}");
        }
    }

    #[test]
    fn degraded_options_fail_special_values() {
        let v = Verifier::new(EvalOptions::new(8, 12, 3).unwrap());
        let o = v.run(13);
        assert!(!o.passed, "{o}");
        assert!(o.to_string().starts_with("[FAIL] 13 special-values"));
    }

    #[test]
    fn bisection_on_line() {
        let r = bisect(&|t| Ok(t - 0.3), 0.0, 1.0).unwrap().unwrap();
        assert!((r - 0.3).abs() < 1e-11);
        assert_eq!(bisect(&|t| Ok(t + 1.0), 0.0, 1.0).unwrap(), None);
    }
}
