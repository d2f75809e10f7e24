//! The quotient `Delta5(s) = zeta(s) L_{-4}(s) / zeta(2s - 1/2)`, its gamma
//! factor `F5(s)` with `Delta5(s) = F5(s) Delta5(1 - s)`, the asymptotic
//! forms used to seed and sanity-check the line tracer, and the
//! generalizations `Delta_{-q}` for q = 3, 7, 8.

use crate::error::{Error, Result};
use crate::evalcore::{beta_l, checked, dirichlet_l, log_gamma, zeta, ComplexValue, Discriminant, EvalOptions};
use num_complex::Complex64;
use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, FRAC_PI_8, LN_2, PI};

const POLE_TOL: f64 = 1e-10;
const ZERO_TOL: f64 = 1e-12;
const DENOM_FLOOR: f64 = 1e-10;
const BRACKET_TOL: f64 = 1e-12;

/// Which quotient: `q = 4` is `Delta5`, `q = 3` puts the bracket factor in
/// the numerator, `q = 7, 8` put it in the denominator.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct QuotientKind(Discriminant);

impl QuotientKind {
    pub const DELTA5: QuotientKind = QuotientKind(Discriminant::FOUR);

    pub fn new(q: u32) -> Result<Self> {
        Discriminant::new(q).map(QuotientKind)
    }

    pub fn discriminant(self) -> Discriminant {
        self.0
    }

    pub fn q(self) -> u32 {
        self.0.q()
    }
}

/// A phase known only modulo `pi`, kept in `(-pi/2, pi/2]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AsymptoticPhase {
    pub t: f64,
    pub phase_mod_pi: f64,
}

/// Representative of `phase` modulo `pi` in `(-pi/2, pi/2]`.
pub fn fold_mod_pi(phase: f64) -> f64 {
    let r = phase.rem_euclid(PI);
    if r > FRAC_PI_2 {
        r - PI
    } else {
        r
    }
}

fn near_real_pole(s: Complex64) -> bool {
    if (s - 1.0).norm() <= POLE_TOL {
        return true;
    }
    // zeros of zeta(2s - 1/2) at 2s - 1/2 = -2m
    if s.re < 0.0 && s.im.abs() <= POLE_TOL {
        let m = (0.25 - s.re).round();
        return m >= 1.0 && (s.re - (0.25 - m)).abs() <= POLE_TOL;
    }
    false
}

/// `zeta(2s - 1/2)`; `None` at the pole `s = 3/4`.
fn half_zeta(s: Complex64, opts: &EvalOptions) -> Result<Option<Complex64>> {
    if (s - 0.75).norm() <= ZERO_TOL {
        return Ok(None);
    }
    zeta(2.0 * s - 0.5, opts).map(Some)
}

/// `Delta5(s) = zeta(s) L_{-4}(s) / zeta(2s - 1/2)`.
///
/// Returns exactly zero within `1e-12` of the zero at `s = 3/4` and a
/// [`Error::PoleOfDelta5`] within `1e-10` of a pole (or wherever the
/// denominator falls below `1e-10` in modulus).
pub fn delta5(s: ComplexValue, opts: &EvalOptions) -> Result<ComplexValue> {
    let s = checked(s)?;
    if near_real_pole(s) {
        return Err(Error::PoleOfDelta5(s));
    }
    let Some(den) = half_zeta(s, opts)? else {
        return Ok(Complex64::new(0.0, 0.0));
    };
    if den.norm() < DENOM_FLOOR {
        return Err(Error::PoleOfDelta5(s));
    }
    let num = zeta(s, opts)? * beta_l(s, opts)?;
    let v = num / den;
    if v.re.is_finite() && v.im.is_finite() {
        Ok(v)
    } else {
        Err(Error::PoleOfDelta5(s))
    }
}

/// `F5(s) = Gamma(1-s) Gamma(s-1/4) / (Gamma(s) Gamma(3/4-s))`, via log-gamma
/// differences.
pub fn f5(s: ComplexValue) -> Result<ComplexValue> {
    let s = checked(s)?;
    let lg = |z: Complex64| log_gamma(z).map_err(|_| Error::GammaPoleOnPath(s));
    let log = lg(1.0 - s)? + lg(s - 0.25)? - lg(s)? - lg(0.75 - s)?;
    Ok(log.exp())
}

/// `e^{-i pi/4} (1 + 1/(16 s) + 17/(512 s^2))` for `t > 1`; the leading
/// factor is `e^{+i pi/4}` for `t < -1`.
pub fn f5_asymptotic(s: ComplexValue) -> Result<ComplexValue> {
    let s = checked(s)?;
    if s.im.abs() <= 1.0 {
        return Err(Error::DomainError(format!("F5 asymptotic form needs |t| > 1, got t = {}", s.im)));
    }
    let angle = if s.im > 0.0 { -FRAC_PI_4 } else { FRAC_PI_4 };
    let inv = s.inv();
    Ok(Complex64::from_polar(1.0, angle) * (1.0 + inv / 16.0 + 17.0 / 512.0 * inv * inv))
}

/// `|Delta5(s) - F5(s) Delta5(1-s)| / (1 + |Delta5(s)|)`.
pub fn functional_equation_residual(s: ComplexValue, opts: &EvalOptions) -> Result<f64> {
    let lhs = delta5(s, opts)?;
    let rhs = f5(s)? * delta5(1.0 - s, opts)?;
    Ok((lhs - rhs).norm() / (1.0 + lhs.norm()))
}

/// `-pi/8 - 1/(32 t)` folded into `(-pi/2, pi/2]`.
pub fn critical_phase_approx(t: f64) -> Result<AsymptoticPhase> {
    if !(t > 1.0) || !t.is_finite() {
        return Err(Error::DomainError(format!("critical-line phase approximation needs t > 1, got {t}")));
    }
    Ok(AsymptoticPhase { t, phase_mod_pi: fold_mod_pi(-FRAC_PI_8 - 1.0 / (32.0 * t)) })
}

/// Leading large-`sigma` behaviour from the first two Dirichlet terms:
/// `(-sin(t ln 2) / 2^sigma, 1 + cos(t ln 2) / 2^sigma)`.
pub fn large_sigma_phase_modulus(sigma: f64, t: f64) -> Result<(f64, f64)> {
    if !(sigma >= 6.0) || !t.is_finite() {
        return Err(Error::DomainError(format!("large-sigma form needs sigma >= 6, got {sigma}")));
    }
    let scale = (-sigma * LN_2).exp();
    let (sin, cos) = (t * LN_2).sin_cos();
    Ok((-sin * scale, 1.0 + cos * scale))
}

/// Product approximation to `Delta5(1 - sigma + i t)` for `sigma >= 3`, `t > 1`.
pub fn reflected_approx(sigma: f64, t: f64) -> Result<ComplexValue> {
    if !(sigma >= 3.0) || !(t > 1.0) || !sigma.is_finite() || !t.is_finite() {
        return Err(Error::DomainError(format!(
            "reflected approximation needs sigma >= 3 and t > 1, got ({sigma}, {t})"
        )));
    }
    let scale = (-sigma * LN_2).exp();
    let (sin, cos) = (t * LN_2).sin_cos();
    let head = Complex64::new(1.0 + scale * cos, scale * sin);
    let tail = 1.0 - Complex64::new(sigma, t) / (16.0 * (sigma * sigma + t * t));
    Ok(head * Complex64::from_polar(1.0, -FRAC_PI_4) * tail)
}

/// The bracket `1 - (r)^{s - 1/2}` with `r = 3/4` for `q = 3` and `r = 4/q`
/// for `q > 4`. Tends to 1 as `sigma -> infinity`.
pub fn bracket_factor(kind: QuotientKind, s: ComplexValue) -> Option<ComplexValue> {
    let ratio = match kind.q() {
        3 => 0.75,
        4 => return None,
        q => 4.0 / f64::from(q),
    };
    Some(1.0 - ((s - 0.5) * ratio.ln()).exp())
}

/// `Delta_{-q}(s)`; `q = 4` is [`delta5`].
pub fn delta_q(kind: QuotientKind, s: ComplexValue, opts: &EvalOptions) -> Result<ComplexValue> {
    let s = checked(s)?;
    let q = kind.q();
    let Some(bracket) = bracket_factor(kind, s) else {
        return delta5(s, opts);
    };
    if bracket.norm() <= BRACKET_TOL {
        return Err(if q == 3 { Error::BracketZero { q, s } } else { Error::PoleOfDeltaQ { q, s } });
    }
    let pole = Error::PoleOfDeltaQ { q, s };
    if near_real_pole(s) {
        return Err(pole);
    }
    let Some(den) = half_zeta(s, opts)? else {
        return Ok(Complex64::new(0.0, 0.0));
    };
    if den.norm() < DENOM_FLOOR {
        return Err(pole);
    }
    let num = zeta(s, opts)? * dirichlet_l(kind.discriminant(), s, opts)?;
    let v = if q == 3 { bracket * num / den } else { num / (bracket * den) };
    if v.re.is_finite() && v.im.is_finite() {
        Ok(v)
    } else {
        Err(pole)
    }
}

/// The square-lattice sum `C(0,1;s) = sum' (m^2 + n^2)^{-s} = 4 zeta(s) L_{-4}(s)`.
pub fn lattice_sum_c(s: ComplexValue, opts: &EvalOptions) -> Result<ComplexValue> {
    let s = checked(s)?;
    Ok(4.0 * zeta(s, opts)? * beta_l(s, opts)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn o() -> EvalOptions {
        EvalOptions::default()
    }

    #[test]
    fn fold_interval() {
        assert_eq!(fold_mod_pi(FRAC_PI_2), FRAC_PI_2);
        assert!((fold_mod_pi(-FRAC_PI_2) - FRAC_PI_2).abs() < 1e-15);
        assert!((fold_mod_pi(3.0) - (3.0 - PI)).abs() < 1e-15);
        assert!((fold_mod_pi(-0.4 + 5.0 * PI) + 0.4).abs() < 1e-13);
    }

    #[test]
    fn zero_at_three_quarters() {
        assert_eq!(delta5(c(0.75, 0.0), &o()).unwrap(), c(0.0, 0.0));
        let near = delta5(c(0.75 + 1e-6, 0.0), &o()).unwrap();
        assert!(near.norm() < 1e-5);
    }

    #[test]
    fn poles_reported() {
        assert!(matches!(delta5(c(1.0, 0.0), &o()), Err(Error::PoleOfDelta5(_))));
        assert!(matches!(delta5(c(-0.75, 0.0), &o()), Err(Error::PoleOfDelta5(_))));
        assert!(matches!(delta5(c(-2.75, 5e-11), &o()), Err(Error::PoleOfDelta5(_))));
        // first critical-line pole: zeta zero 14.134725141734694 halved
        assert!(matches!(delta5(c(0.5, 7.067_362_570_867_347), &o()), Err(Error::PoleOfDelta5(_))));
        assert!(delta5(c(-0.75, 1e-3), &o()).is_ok());
    }

    #[test]
    fn dirichlet_head_at_large_sigma() {
        let v = delta5(c(20.0, 0.0), &o()).unwrap();
        let head = 1.0 + 2f64.powi(-20);
        assert!((v.re - head).abs() <= 5e-7 * head);
    }

    #[test]
    fn composition_at_two() {
        let v = delta5(c(2.0, 0.0), &o()).unwrap();
        let want = zeta(c(2.0, 0.0), &o()).unwrap() * beta_l(c(2.0, 0.0), &o()).unwrap()
            / zeta(c(3.5, 0.0), &o()).unwrap();
        assert!((v - want).norm() < 1e-12);
    }

    #[test]
    fn f5_values() {
        assert!((f5(c(0.5, 0.0)).unwrap() - 1.0).norm() < 1e-14);
        let s = c(0.3, 7.0);
        assert!((f5(s).unwrap() * f5(1.0 - s).unwrap() - 1.0).norm() < 1e-10);
        let s = c(0.5, 30.0);
        let exact = f5(s).unwrap();
        let approx = f5_asymptotic(s).unwrap();
        assert!((exact - approx).norm() <= 1e-4 * exact.norm());
        assert!(matches!(f5(c(2.0, 0.0)), Err(Error::GammaPoleOnPath(_))));
        assert!(matches!(f5(c(0.25, 0.0)), Err(Error::GammaPoleOnPath(_))));
    }

    #[test]
    fn f5_asymptotic_branches() {
        let up = f5_asymptotic(c(0.5, 10.0)).unwrap();
        let down = f5_asymptotic(c(0.5, -10.0)).unwrap();
        assert!((up.conj() - down).norm() < 1e-15);
        let exact = f5(c(0.5, 10.0)).unwrap();
        assert!((exact - up).norm() <= 1e-3 * exact.norm());
        for t in [10.0, 20.0, 40.0] {
            let m = f5_asymptotic(c(0.5, t)).unwrap().norm();
            assert!((m - 1.0).abs() < 1.0 / (t * t));
        }
        assert!(f5_asymptotic(c(0.5, 1.0)).is_err());
    }

    #[test]
    fn functional_equation_examples() {
        assert!(functional_equation_residual(c(0.7, 5.0), &o()).unwrap() <= 1e-9);
        assert!(functional_equation_residual(c(0.5, 9.3), &o()).unwrap() <= 1e-9);
        assert!(functional_equation_residual(c(-1.2, 17.0), &o()).unwrap() <= 1e-8);
    }

    #[test]
    fn critical_phase_examples() {
        let p = critical_phase_approx(4.0).unwrap();
        assert!((p.phase_mod_pi - (-FRAC_PI_8 - 1.0 / 128.0)).abs() < 1e-15);
        assert!((p.phase_mod_pi + 0.400_511_6).abs() < 1e-7);
        let far = critical_phase_approx(1e4).unwrap();
        assert!((far.phase_mod_pi + FRAC_PI_8).abs() < 1e-5);
        assert!(critical_phase_approx(1.0).is_err());
        let direct = fold_mod_pi(delta5(c(0.5, 20.0), &o()).unwrap().arg());
        assert!((direct - critical_phase_approx(20.0).unwrap().phase_mod_pi).abs() < 2e-2);
    }

    #[test]
    fn large_sigma_examples() {
        let (ph, m) = large_sigma_phase_modulus(12.0, PI / LN_2).unwrap();
        assert!(ph.abs() < 1e-15);
        assert!((m - (1.0 - 2f64.powi(-12))).abs() < 1e-15);
        let (_, m) = large_sigma_phase_modulus(12.0, 1.5 * PI / LN_2).unwrap();
        assert!((m - 1.0).abs() < 1e-15);
        let (ph, _) = large_sigma_phase_modulus(10.0, 7.0).unwrap();
        let direct = delta5(c(10.0, 7.0), &o()).unwrap().arg();
        assert!((ph - direct).abs() <= 3.0 * 4f64.powi(-10));
        assert!(large_sigma_phase_modulus(5.9, 1.0).is_err());
    }

    #[test]
    fn reflected_examples() {
        let approx = reflected_approx(5.0, 10.0).unwrap();
        let direct = delta5(c(-4.0, 10.0), &o()).unwrap();
        assert!((approx - direct).norm() <= 2e-2 * direct.norm());
        let v = reflected_approx(8.0, 20.0).unwrap();
        assert!(v.re > 0.0 && v.im < 0.0);
        let m = reflected_approx(3.0, 1.5).unwrap().norm();
        assert!((m - delta5(c(-2.0, 1.5), &o()).unwrap().norm()).abs() < 5e-2);
        assert!(reflected_approx(2.9, 5.0).is_err());
        assert!(reflected_approx(4.0, 1.0).is_err());
    }

    #[test]
    fn delta_q_reduces_and_degenerates() {
        let four = QuotientKind::new(4).unwrap();
        let s = c(2.0, 3.0);
        assert!((delta_q(four, s, &o()).unwrap() - delta5(s, &o()).unwrap()).norm() < 1e-13);
        let three = QuotientKind::new(3).unwrap();
        let eight = QuotientKind::new(8).unwrap();
        assert!(matches!(delta_q(three, c(0.5, 0.0), &o()), Err(Error::BracketZero { q: 3, .. })));
        assert!(matches!(delta_q(eight, c(0.5, 0.0), &o()), Err(Error::PoleOfDeltaQ { q: 8, .. })));
        // q = 8 bracket also vanishes at t = 2 pi / ln 2 on the critical line
        let t = 2.0 * PI / LN_2;
        assert!(matches!(delta_q(eight, c(0.5, t), &o()), Err(Error::PoleOfDeltaQ { .. })));
        assert!(QuotientKind::new(5).is_err());
    }

    #[test]
    fn delta_q_tends_to_one() {
        for q in [3, 7, 8] {
            let k = QuotientKind::new(q).unwrap();
            let v = delta_q(k, c(40.0, 3.0), &o()).unwrap();
            assert!((v - 1.0).norm() < 1e-4, "q={q}: {v}");
        }
    }

    #[test]
    fn lattice_sum_values() {
        let v = lattice_sum_c(c(2.0, 0.0), &o()).unwrap();
        assert!((v.re - 6.026_812_039_691_94).abs() < 1e-12);
        let s = c(2.0, 5.0);
        let a = lattice_sum_c(s, &o()).unwrap();
        let b = lattice_sum_c(s.conj(), &o()).unwrap();
        assert!((a.conj() - b).norm() < 1e-12 * (1.0 + a.norm()));
        assert!(matches!(lattice_sum_c(c(1.0, 0.0), &o()), Err(Error::PoleOfZeta(_))));
    }
}
