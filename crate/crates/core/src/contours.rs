//! Lines of zero phase and unit modulus of `Delta5`, traced from large `sigma`
//! down to the critical line, argument-principle winding counts, and the
//! constant-amplitude circles of the reflected correction factor.

use crate::critical::{CriticalPoint, SingularKind};
use crate::error::{Error, Result};
use crate::evalcore::EvalOptions;
use crate::quotient::delta5;
use num_complex::Complex64;
use serde::Serialize;
use std::f64::consts::{FRAC_PI_2, LN_2, PI, TAU};
use std::io::Write;

pub const DEFAULT_SIGMA_START: f64 = 12.0;
pub const DEFAULT_STEP: f64 = 0.02;
/// Phase-zero traces stop this far right of the critical line and are
/// extrapolated the rest of the way.
pub const EPS_TRACE: f64 = 0.004;
/// Clearance of the box edge parallel to the critical line.
pub const EPS_BOX: f64 = 0.02;
pub const MATCH_RADIUS: f64 = 0.05;

const MIN_STEP: f64 = 1e-4;
const NEWTON_ITERS: usize = 8;
const NEWTON_TOL: f64 = 1e-10;
const DIFF_H: f64 = 1e-6;
const MODULUS_FLOOR: f64 = 1e-8;
const MODULUS_CEIL: f64 = 1e8;
const VERTICAL_SPACING: f64 = 0.01;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LineKind {
    PhaseZero,
    AmplitudeOne,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TracePoint {
    pub sigma: f64,
    pub t: f64,
    pub phase: f64,
    pub modulus: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PhasePath {
    pub anchor_index: u32,
    pub line_kind: LineKind,
    pub points: Vec<TracePoint>,
    pub terminus_t: f64,
    pub terminus_point: Option<CriticalPoint>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct WindingReport {
    pub total_arg_change: f64,
    pub zeros_minus_poles: i64,
    pub max_step_jump: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AmplitudeCircle {
    pub a: f64,
    pub center_sigma: f64,
    pub radius: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TraceConfig {
    pub sigma_start: f64,
    pub step: f64,
}

impl Default for TraceConfig {
    fn default() -> Self {
        TraceConfig { sigma_start: DEFAULT_SIGMA_START, step: DEFAULT_STEP }
    }
}

/// Starting ordinate of line `n` at large `sigma`.
pub fn seed_t(kind: LineKind, n: u32) -> f64 {
    match kind {
        LineKind::PhaseZero => f64::from(n) * PI / LN_2,
        LineKind::AmplitudeOne => (f64::from(n) + 0.5) * PI / LN_2,
    }
}

struct Probe {
    value: Complex64,
    /// `Delta5' / Delta5`
    log_deriv: Complex64,
}

fn probe(sigma: f64, t: f64, opts: &EvalOptions) -> Result<Probe> {
    let s = Complex64::new(sigma, t);
    let near = |e: Error| match e {
        Error::PoleOfDelta5(_) => Error::SingularityTooClose { sigma, t, modulus: f64::INFINITY },
        other => other,
    };
    let value = delta5(s, opts).map_err(near)?;
    let modulus = value.norm();
    if !(MODULUS_FLOOR..=MODULUS_CEIL).contains(&modulus) {
        return Err(Error::SingularityTooClose { sigma, t, modulus });
    }
    let plus = delta5(s + DIFF_H, opts).map_err(near)?;
    let minus = delta5(s - DIFF_H, opts).map_err(near)?;
    Ok(Probe { value, log_deriv: (plus - minus) / (2.0 * DIFF_H * value) })
}

/// Level function and its `t` and `sigma` derivatives.
fn level(kind: LineKind, p: &Probe) -> (f64, f64, f64) {
    let g = p.log_deriv;
    match kind {
        LineKind::PhaseZero => (p.value.arg(), g.re, g.im),
        LineKind::AmplitudeOne => (p.value.norm().ln(), -g.im, g.re),
    }
}

/// Newton in `t` at fixed `sigma` onto the level set; `None` when it fails to
/// converge or wanders further than `reach`.
fn correct(kind: LineKind, sigma: f64, t0: f64, reach: f64, opts: &EvalOptions) -> Result<Option<(f64, Probe)>> {
    let mut t = t0;
    for _ in 0..NEWTON_ITERS {
        let p = match probe(sigma, t, opts) {
            Ok(p) => p,
            Err(Error::SingularityTooClose { .. }) if (t - t0).abs() > 0.0 => return Ok(None),
            Err(e) => return Err(e),
        };
        let (f, dt, _) = level(kind, &p);
        if f.abs() <= NEWTON_TOL {
            return Ok(Some((t, p)));
        }
        if dt == 0.0 || !dt.is_finite() {
            return Ok(None);
        }
        t -= f / dt;
        if (t - t0).abs() > reach {
            return Ok(None);
        }
    }
    Ok(None)
}

fn point(sigma: f64, t: f64, p: &Probe) -> TracePoint {
    TracePoint { sigma, t, phase: p.value.arg(), modulus: p.value.norm() }
}

fn march(kind: LineKind, n: u32, cfg: &TraceConfig, sigma_end: f64) -> Result<Vec<TracePoint>> {
    if n == 0 {
        return Err(Error::DomainError("line index must be positive".into()));
    }
    if !(cfg.sigma_start >= 8.0) || !(cfg.step > 0.0) {
        return Err(Error::DomainError(format!(
            "trace needs sigma_start >= 8 and a positive step, got {} and {}",
            cfg.sigma_start, cfg.step
        )));
    }
    let opts = EvalOptions::default();
    let t_seed = seed_t(kind, n);
    let (mut t, mut p) = correct(kind, cfg.sigma_start, t_seed, 0.5, &opts)?
        .ok_or(Error::TraceStalled { sigma: cfg.sigma_start, t: t_seed })?;
    let mut sigma = cfg.sigma_start;
    let mut points = vec![point(sigma, t, &p)];
    let mut h = cfg.step;
    while sigma > sigma_end {
        let h_try = h.min(sigma - sigma_end);
        let next_sigma = if h_try < sigma - sigma_end { sigma - h_try } else { sigma_end };
        let (_, dt, ds) = level(kind, &p);
        let slope = -ds / dt;
        let predicted = t - h_try * slope;
        let reach = 2.0 * h_try * (1.0 + slope.abs()) + 1e-3;
        match correct(kind, next_sigma, predicted, reach, &opts)? {
            Some((t_new, p_new)) => {
                sigma = next_sigma;
                t = t_new;
                p = p_new;
                points.push(point(sigma, t, &p));
                h = (h * 2.0).min(cfg.step);
            }
            None => {
                h *= 0.5;
                if h < MIN_STEP {
                    return Err(Error::TraceStalled { sigma, t });
                }
            }
        }
    }
    Ok(points)
}

/// Phase-zero line `n`, seeded at `(sigma_start, n pi / ln 2)`; its terminus on
/// the critical line is matched to a catalogued zero or pole within 0.05.
pub fn trace_phase_zero_line(n: u32, cfg: &TraceConfig, catalog: &[CriticalPoint]) -> Result<PhasePath> {
    let points = march(LineKind::PhaseZero, n, cfg, 0.5 + EPS_TRACE)?;
    let terminus_t = extrapolate_to_half(&points);
    let nearest = catalog
        .iter()
        .min_by(|a, b| (a.t - terminus_t).abs().total_cmp(&(b.t - terminus_t).abs()))
        .filter(|p| (p.t - terminus_t).abs() <= MATCH_RADIUS)
        .copied();
    let Some(hit) = nearest else {
        return Err(Error::NoCatalogMatch { t: terminus_t, radius: MATCH_RADIUS });
    };
    Ok(PhasePath { anchor_index: n, line_kind: LineKind::PhaseZero, points, terminus_t, terminus_point: Some(hit) })
}

fn extrapolate_to_half(points: &[TracePoint]) -> f64 {
    match points {
        [.., a, b] => b.t + (0.5 - b.sigma) * (b.t - a.t) / (b.sigma - a.sigma),
        [b] => b.t,
        [] => f64::NAN,
    }
}

/// Unit-modulus line `n`, seeded at `(sigma_start, (n + 1/2) pi / ln 2)` and
/// followed onto the critical line, where it must fall strictly between two
/// consecutive catalogued points.
pub fn trace_amplitude_one_line(n: u32, cfg: &TraceConfig, catalog: &[CriticalPoint]) -> Result<PhasePath> {
    let points = march(LineKind::AmplitudeOne, n, cfg, 0.5)?;
    let terminus_t = points.last().map_or(f64::NAN, |p| p.t);
    let beyond = catalog.last().is_none_or(|p| p.t <= terminus_t);
    if beyond {
        return Err(Error::NoCatalogMatch { t: terminus_t, radius: MATCH_RADIUS });
    }
    let between = catalog.windows(2).any(|w| w[0].t < terminus_t && terminus_t < w[1].t)
        || catalog.first().is_some_and(|p| terminus_t < p.t);
    if !between || catalog.iter().any(|p| p.t == terminus_t) {
        return Err(Error::TerminusNotBetweenSingularities(terminus_t));
    }
    Ok(PhasePath { anchor_index: n, line_kind: LineKind::AmplitudeOne, points, terminus_t, terminus_point: None })
}

fn wrap(x: f64) -> f64 {
    let r = x.rem_euclid(TAU);
    if r > PI {
        r - TAU
    } else {
        r
    }
}

/// Total change of `arg Delta5` around a closed polyline, bisecting edges whose
/// phase increment exceeds `pi/2` (at most `refine_limit` bisections overall).
pub fn winding_count(polyline: &[(f64, f64)], refine_limit: usize) -> Result<WindingReport> {
    let (Some(first), Some(last)) = (polyline.first(), polyline.last()) else {
        return Err(Error::DomainError("empty contour".into()));
    };
    if polyline.len() < 4 || (first.0 - last.0).hypot(first.1 - last.1) > 1e-12 {
        return Err(Error::DomainError("contour must be closed with at least three edges".into()));
    }
    let opts = EvalOptions::default();
    let eval = |z: Complex64| -> Result<Complex64> {
        match delta5(z, &opts) {
            Ok(v) if v.norm() > 1e-12 && v.norm() < 1e12 => Ok(v),
            Ok(_) | Err(Error::PoleOfDelta5(_)) => Err(Error::SingularOnContour(z)),
            Err(e) => Err(e),
        }
    };
    let mut budget = refine_limit;
    let mut total = 0.0;
    let mut max_jump: f64 = 0.0;
    for edge in polyline.windows(2) {
        let a = Complex64::new(edge[0].0, edge[0].1);
        let b = Complex64::new(edge[1].0, edge[1].1);
        let mut stack = vec![(a, eval(a)?, b, eval(b)?)];
        while let Some((za, fa, zb, fb)) = stack.pop() {
            let inc = wrap(fb.arg() - fa.arg());
            if inc.abs() <= FRAC_PI_2 {
                total += inc;
                max_jump = max_jump.max(inc.abs());
                continue;
            }
            if budget == 0 {
                return Err(Error::RefinementExhausted(refine_limit));
            }
            budget -= 1;
            let zm = 0.5 * (za + zb);
            let fm = eval(zm)?;
            // second half first out of the stack order: push it below the first
            stack.push((zm, fm, zb, fb));
            stack.push((za, fa, zm, fm));
        }
    }
    Ok(WindingReport { total_arg_change: total, zeros_minus_poles: (total / TAU).round() as i64, max_step_jump: max_jump })
}

/// Closed box bounded by phase-zero lines `n_low` and `n_high`, the vertical
/// `sigma = sigma_right` and the vertical `sigma = 1/2 + EPS_BOX`.
pub fn box_contour(n_low: u32, n_high: u32, sigma_right: f64, catalog: &[CriticalPoint]) -> Result<Vec<(f64, f64)>> {
    if n_low >= n_high {
        return Err(Error::DomainError(format!("box needs n_low < n_high, got {n_low} and {n_high}")));
    }
    if !(sigma_right >= 8.0) {
        return Err(Error::DomainError(format!("box needs sigma_right >= 8, got {sigma_right}")));
    }
    let cfg = TraceConfig { sigma_start: sigma_right, ..TraceConfig::default() };
    let low = trace_phase_zero_line(n_low, &cfg, catalog)?;
    let high = trace_phase_zero_line(n_high, &cfg, catalog)?;
    let cut = 0.5 + EPS_BOX;
    let clip = |path: &PhasePath| -> Vec<(f64, f64)> {
        let mut out: Vec<(f64, f64)> = path.points.iter().take_while(|p| p.sigma >= cut).map(|p| (p.sigma, p.t)).collect();
        if let (Some(&(s0, t0)), Some(next)) = (out.last(), path.points.get(out.len())) {
            if s0 > cut {
                let t_cut = t0 + (cut - s0) * (next.t - t0) / (next.sigma - s0);
                out.push((cut, t_cut));
            }
        }
        out
    };
    let lower = clip(&low);
    let upper = clip(&high);
    let (Some(&(_, t_lo)), Some(&(_, t_hi))) = (lower.last(), upper.last()) else {
        return Err(Error::TraceStalled { sigma: sigma_right, t: seed_t(LineKind::PhaseZero, n_low) });
    };
    let mut contour = lower.clone();
    let segments = ((t_hi - t_lo).abs() / VERTICAL_SPACING).ceil().max(1.0) as usize;
    for k in 1..segments {
        contour.push((cut, t_lo + (t_hi - t_lo) * k as f64 / segments as f64));
    }
    contour.extend(upper.iter().rev());
    let (_, t_top) = upper[0];
    let (_, t_bottom) = lower[0];
    let right = ((t_top - t_bottom).abs() / VERTICAL_SPACING).ceil().max(1.0) as usize;
    for k in 1..right {
        contour.push((sigma_right, t_top + (t_bottom - t_top) * k as f64 / right as f64));
    }
    contour.push(lower[0]);
    Ok(contour)
}

/// Winding report of the [`box_contour`] between phase lines `n_low` and `n_high`.
pub fn argument_principle_box(n_low: u32, n_high: u32, sigma_right: f64, catalog: &[CriticalPoint]) -> Result<WindingReport> {
    let contour = box_contour(n_low, n_high, sigma_right, catalog)?;
    winding_count(&contour, 100_000)
}

/// Circle `|1 - 1/(16 conj(s))| = A`: centre `1/(16(1 - A^2))`, radius
/// `A/(16|1 - A^2|)`.
pub fn amplitude_circle(a: f64) -> Result<AmplitudeCircle> {
    if !(a > 0.0) || !a.is_finite() {
        return Err(Error::DomainError(format!("amplitude must be positive, got {a}")));
    }
    let gap = 1.0 - a * a;
    if gap.abs() <= 1e-12 {
        return Err(Error::DegenerateCircle);
    }
    Ok(AmplitudeCircle { a, center_sigma: 1.0 / (16.0 * gap), radius: a / (16.0 * gap.abs()) })
}

/// The reflected correction factor `1 - s / (16 |s|^2)`.
pub fn correction_factor(s: Complex64) -> Complex64 {
    1.0 - s / (16.0 * s.norm_sqr())
}

/// Points on the circle at equal angles.
pub fn circle_points(circle: &AmplitudeCircle, count: usize) -> Vec<Complex64> {
    (0..count)
        .map(|k| {
            let theta = TAU * k as f64 / count as f64;
            Complex64::new(circle.center_sigma, 0.0) + Complex64::from_polar(circle.radius, theta)
        })
        .collect()
}

/// Write the path as CSV `sigma,t,phase,modulus`, 12 significant digits.
pub fn write_trace_csv<W: Write>(path: &PhasePath, mut out: W) -> Result<()> {
    writeln!(out, "sigma,t,phase,modulus")?;
    for p in &path.points {
        writeln!(out, "{:.11e},{:.11e},{:.11e},{:.11e}", p.sigma, p.t, p.phase, p.modulus)?;
    }
    Ok(())
}

/// Catalogued kind of the terminus of a phase-zero path, if matched.
pub fn terminus_kind(path: &PhasePath) -> Option<SingularKind> {
    path.terminus_point.map(|p| p.kind)
}
