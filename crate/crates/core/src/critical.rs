//! Zeros and poles of `Delta5` on the critical line, located as sign changes
//! of real completed functions, and the residues and linear coefficients at
//! the real-axis singular points.

use crate::error::{Error, Result};
use crate::evalcore::{beta_l, checked, log_gamma, zeta, ComplexValue, EvalOptions};
use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::f64::consts::{FRAC_PI_4, PI};

/// Largest ordinate accepted by [`find_zeros`].
pub const MAX_T: f64 = 200.0;
/// Coarsest accepted scan step.
pub const MAX_SCAN_STEP: f64 = 0.05;
pub const DEFAULT_SCAN_STEP: f64 = 0.01;

const BISECT_TO: f64 = 1e-9;
const DIFF_H: f64 = 1e-6;
const MULTIPLICITY_GUARD: f64 = 1e-8;
const COINCIDENCE_TOL: f64 = 1e-9;
const SUBSAMPLES: usize = 8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SingularKind {
    Zero,
    Pole,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PointSource {
    ZetaZero,
    BetaZero,
    HalfZetaZero,
}

/// Which completed function [`find_zeros`] scans.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ZeroSource {
    Zeta,
    Beta,
}

impl ZeroSource {
    pub fn point_source(self) -> PointSource {
        match self {
            ZeroSource::Zeta => PointSource::ZetaZero,
            ZeroSource::Beta => PointSource::BetaZero,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CriticalPoint {
    pub t: f64,
    pub kind: SingularKind,
    pub source: PointSource,
    pub multiplicity: u32,
    pub refined_to: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RealAxisFeature {
    pub sigma: f64,
    pub kind: SingularKind,
    /// Residue at a pole, linear coefficient at a zero.
    pub coefficient: f64,
}

/// `Lambda(s) = pi^{-s/2} Gamma(s/2) zeta(s)`.
pub fn completed_zeta(s: ComplexValue, opts: &EvalOptions) -> Result<ComplexValue> {
    let s = checked(s)?;
    if s.norm() <= 1e-12 || (s - 1.0).norm() <= 1e-12 {
        return Err(Error::PoleOfCompletedZeta(s));
    }
    let factor = (log_gamma(0.5 * s).map_err(|_| Error::PoleOfCompletedZeta(s))? - 0.5 * s * PI.ln()).exp();
    Ok(factor * zeta(s, opts)?)
}

/// `(pi/4)^{-(s+1)/2} Gamma((s+1)/2) L_{-4}(s)`, entire.
pub fn completed_beta(s: ComplexValue, opts: &EvalOptions) -> Result<ComplexValue> {
    let s = checked(s)?;
    let half = 0.5 * (s + 1.0);
    let value = beta_l(s, opts)?;
    // the gamma poles at s = -1, -3, ... meet the trivial zeros of L_{-4}
    match log_gamma(half) {
        Ok(lg) => Ok((lg - half * FRAC_PI_4.ln()).exp() * value),
        Err(_) => {
            let m = (-half.re).round();
            let sign = if m as i64 % 2 == 0 { 1.0 } else { -1.0 };
            // residue of Gamma at -m is (-1)^m / m!, derivative of L by central difference
            let d = (beta_l(s + DIFF_H, opts)? - beta_l(s - DIFF_H, opts)?) / (2.0 * DIFF_H);
            let fact: f64 = (1..=m as u64).map(|k| k as f64).product();
            Ok(2.0 * sign / fact * (-half * FRAC_PI_4.ln()).exp() * d)
        }
    }
}

/// Real function on `sigma = 1/2` with the sign of the completed function and
/// modulus `|zeta(1/2 + it)|` (or `|L_{-4}(1/2 + it)|`).
pub fn critical_line_value(source: ZeroSource, t: f64, opts: &EvalOptions) -> Result<f64> {
    let s = Complex64::new(0.5, t);
    let (theta, value) = match source {
        ZeroSource::Zeta => (log_gamma(0.5 * s)?.im - 0.5 * t * PI.ln(), zeta(s, opts)?),
        ZeroSource::Beta => (log_gamma(0.5 * (s + 1.0))?.im - 0.5 * t * FRAC_PI_4.ln(), beta_l(s, opts)?),
    };
    Ok((Complex64::from_polar(1.0, theta) * value).re)
}

fn validate_range(t_min: f64, t_max: f64, scan_step: f64, limit: f64) -> Result<()> {
    if !(t_min >= 0.0 && t_min < t_max && t_max <= limit) {
        return Err(Error::DomainError(format!(
            "scan range [{t_min}, {t_max}] must satisfy 0 <= t_min < t_max <= {limit}"
        )));
    }
    if !(scan_step > 0.0 && scan_step <= MAX_SCAN_STEP) {
        return Err(Error::DomainError(format!("scan step {scan_step} outside (0, {MAX_SCAN_STEP}]")));
    }
    Ok(())
}

/// Zeros of the completed zeta or beta function on the critical line in
/// `[t_min, t_max]`, bracketed at `scan_step` and bisected to `1e-9`.
pub fn find_zeros(source: ZeroSource, t_min: f64, t_max: f64, scan_step: f64) -> Result<Vec<CriticalPoint>> {
    validate_range(t_min, t_max, scan_step, MAX_T)?;
    scan(source, t_min, t_max, scan_step, &EvalOptions::default())
}

fn scan(source: ZeroSource, t_min: f64, t_max: f64, step: f64, opts: &EvalOptions) -> Result<Vec<CriticalPoint>> {
    let f = |t: f64| critical_line_value(source, t, opts);
    let count = ((t_max - t_min) / step).ceil() as usize;
    let grid: Vec<f64> = (0..=count).map(|k| (t_min + k as f64 * step).min(t_max)).collect();
    let values = grid.par_iter().map(|&t| f(t)).collect::<Result<Vec<f64>>>()?;

    let brackets: Vec<(f64, f64, f64, f64)> = (0..count)
        .filter_map(|k| {
            let (a, b) = (grid[k], grid[k + 1]);
            let (fa, fb) = (values[k], values[k + 1]);
            // an exact zero on the grid belongs to the bracket on its left
            let left_hit = fa == 0.0 && k > 0;
            (fa * fb < 0.0 || (fb == 0.0 && !left_hit && b > a)).then_some((a, b, fa, fb))
        })
        .collect();

    let mut points = brackets
        .par_iter()
        .map(|&(a, b, fa, fb)| refine(&f, a, b, fa, fb))
        .collect::<Result<Vec<(f64, f64)>>>()?;
    points.sort_by(|x, y| x.0.total_cmp(&y.0));

    let kind_source = source.point_source();
    points
        .into_iter()
        .map(|(t, half_width)| {
            let slope = (f(t + DIFF_H)? - f(t - DIFF_H)?) / (2.0 * DIFF_H);
            if slope.abs() <= MULTIPLICITY_GUARD {
                return Err(Error::StepTooCoarse { lo: t - half_width, hi: t + half_width });
            }
            Ok(CriticalPoint { t, kind: SingularKind::Zero, source: kind_source, multiplicity: 1, refined_to: half_width })
        })
        .collect()
}

fn refine(f: &impl Fn(f64) -> Result<f64>, a: f64, b: f64, fa: f64, fb: f64) -> Result<(f64, f64)> {
    if fb == 0.0 {
        return Ok((b, 0.0));
    }
    // an odd number of crossings shows as one sign change; look for three
    let mut changes = 0;
    let mut prev = fa;
    for j in 1..=SUBSAMPLES {
        let cur = if j == SUBSAMPLES { fb } else { f(a + (b - a) * j as f64 / SUBSAMPLES as f64)? };
        if prev * cur < 0.0 {
            changes += 1;
        }
        prev = cur;
    }
    if changes > 1 {
        return Err(Error::StepTooCoarse { lo: a, hi: b });
    }
    let (mut lo, mut hi, mut flo) = (a, b, fa);
    while hi - lo > 2.0 * BISECT_TO {
        let mid = 0.5 * (lo + hi);
        let fm = f(mid)?;
        if fm == 0.0 {
            return Ok((mid, 0.0));
        }
        if flo * fm < 0.0 {
            hi = mid;
        } else {
            lo = mid;
            flo = fm;
        }
    }
    Ok((0.5 * (lo + hi), 0.5 * (hi - lo)))
}

/// Zeros (from zeta and `L_{-4}`) and poles (half the zeta ordinates) of
/// `Delta5` on the critical line in `[t_min, t_max]`, sorted by `t`.
pub fn singular_points_delta5(t_min: f64, t_max: f64, scan_step: f64) -> Result<Vec<CriticalPoint>> {
    validate_range(t_min, t_max, scan_step, MAX_T)?;
    let opts = EvalOptions::default();
    let mut points = scan(ZeroSource::Zeta, t_min, t_max, scan_step, &opts)?;
    points.extend(scan(ZeroSource::Beta, t_min, t_max, scan_step, &opts)?);
    let poles = scan(ZeroSource::Zeta, 2.0 * t_min, 2.0 * t_max, 2.0 * scan_step.min(MAX_SCAN_STEP / 2.0), &opts)?;
    points.extend(poles.into_iter().map(|p| CriticalPoint {
        t: 0.5 * p.t,
        kind: SingularKind::Pole,
        source: PointSource::HalfZetaZero,
        multiplicity: 1,
        refined_to: 0.5 * p.refined_to,
    }));
    points.sort_by(|x, y| x.t.total_cmp(&y.t));
    for pair in points.windows(2) {
        if pair[0].kind != pair[1].kind && (pair[1].t - pair[0].t).abs() <= COINCIDENCE_TOL {
            return Err(Error::UnexpectedCoincidence(pair[0].t));
        }
    }
    Ok(points)
}

fn real(v: Complex64) -> f64 {
    v.re
}

fn real_pole_index(sigma: f64) -> Option<i64> {
    if (sigma - 1.0).abs() <= 1e-9 {
        return Some(0);
    }
    let m = (0.25 - sigma).round();
    (m >= 1.0 && (sigma - (0.25 - m)).abs() <= 1e-9).then_some(m as i64)
}

/// Residue of `Delta5` at a real pole: `sigma = 1` or `sigma = 1/4 - m`.
pub fn residue_at_pole(sigma: f64) -> Result<RealAxisFeature> {
    let opts = EvalOptions::default();
    let c = |x: f64| Complex64::new(x, 0.0);
    let coefficient = match real_pole_index(sigma) {
        None => return Err(Error::NotAPole(sigma)),
        Some(0) => real(beta_l(c(1.0), &opts)? / zeta(c(1.5), &opts)?),
        Some(m) => {
            let at = 0.25 - m as f64;
            let x = 2.0 * at - 0.5;
            let dz = (zeta(c(x + DIFF_H), &opts)? - zeta(c(x - DIFF_H), &opts)?) / (2.0 * DIFF_H);
            real(zeta(c(at), &opts)? * beta_l(c(at), &opts)? / (2.0 * dz))
        }
    };
    Ok(RealAxisFeature { sigma, kind: SingularKind::Pole, coefficient })
}

/// Linear coefficient of `Delta5` at a real zero: `sigma = 3/4` or a negative
/// integer.
pub fn slope_at_zero(sigma: f64) -> Result<RealAxisFeature> {
    let opts = EvalOptions::default();
    let c = |x: f64| Complex64::new(x, 0.0);
    let coefficient = if (sigma - 0.75).abs() <= 1e-9 {
        // zeta(2s - 1/2) has residue 1/2 at s = 3/4
        real(2.0 * zeta(c(0.75), &opts)? * beta_l(c(0.75), &opts)?)
    } else if sigma <= -0.5 && (sigma - sigma.round()).abs() <= 1e-9 {
        let at = sigma.round();
        let product = |x: f64| -> Result<Complex64> { Ok(zeta(c(x), &opts)? * beta_l(c(x), &opts)?) };
        let d = (product(at + DIFF_H)? - product(at - DIFF_H)?) / (2.0 * DIFF_H);
        real(d / zeta(c(2.0 * at - 0.5), &opts)?)
    } else {
        return Err(Error::NotAZero(sigma));
    };
    Ok(RealAxisFeature { sigma, kind: SingularKind::Zero, coefficient })
}
