use super::alternating::{alternating_sum, alternating_terms, MAX_ALTERNATING_TERMS};
use super::gamma::{ln_sin_scaled, log_gamma};
use super::zeta::em_sum;
use super::{checked, finite_result, ComplexValue, EvalOptions};
use crate::error::{Error, Result};
use num_complex::Complex64;
use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};

/// Discriminant `-q` of a real odd primitive character, `q` in {3, 4, 7, 8}.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Discriminant(u32);

impl Discriminant {
    pub const THREE: Discriminant = Discriminant(3);
    pub const FOUR: Discriminant = Discriminant(4);
    pub const SEVEN: Discriminant = Discriminant(7);
    pub const EIGHT: Discriminant = Discriminant(8);

    pub fn new(q: u32) -> Result<Self> {
        match q {
            3 | 4 | 7 | 8 => Ok(Discriminant(q)),
            _ => Err(Error::UnsupportedDiscriminant(q)),
        }
    }

    pub fn q(self) -> u32 {
        self.0
    }
}

// chi_{-q}(a) for a = 0..q-1
const CHI_3: [i8; 3] = [0, 1, -1];
const CHI_4: [i8; 4] = [0, 1, 0, -1];
const CHI_7: [i8; 7] = [0, 1, 1, -1, 1, -1, -1];
const CHI_8: [i8; 8] = [0, 1, 0, 1, 0, -1, 0, -1];

/// Kronecker symbol `(-q / a)`.
pub fn character(q: Discriminant, a: u64) -> i8 {
    let table: &[i8] = match q.0 {
        3 => &CHI_3,
        4 => &CHI_4,
        7 => &CHI_7,
        _ => &CHI_8,
    };
    table[(a % u64::from(q.0)) as usize]
}

/// `L_{-q}(s) = q^{-s} sum_{a=1}^{q} chi(a) zeta(s, a/q)`.
pub fn dirichlet_l(q: Discriminant, s: ComplexValue, opts: &EvalOptions) -> Result<ComplexValue> {
    let s = checked(s)?;
    let qf = f64::from(q.0);
    let shifts: Vec<(f64, f64)> = (1..=q.0)
        .map(|a| (f64::from(a) / qf, f64::from(character(q, u64::from(a)))))
        .filter(|&(_, w)| w != 0.0)
        .collect();
    let sum = em_sum(s, &shifts, opts);
    finite_result((-s * qf.ln()).exp() * sum)
}

/// Dirichlet beta function `L_{-4}(s) = sum_{n>=0} (-1)^n (2n+1)^{-s}`.
///
/// Accelerated alternating series for `Re s > 0`; for `Re s <= 0` the
/// reflection of the completed function
/// `(pi/4)^{-(s+1)/2} Gamma((s+1)/2) L(s)` is used, written with
/// `Gamma(1 - s/2) Gamma((1-s)/2) cos(pi s / 2)` so that the trivial zeros at
/// negative odd integers come out without gamma poles.
pub fn beta_l(s: ComplexValue, opts: &EvalOptions) -> Result<ComplexValue> {
    let s = checked(s)?;
    if s.re > 0.0 {
        let n = alternating_terms(s.im, opts.target_digits, opts.series_terms);
        if n > MAX_ALTERNATING_TERMS {
            return dirichlet_l(Discriminant::FOUR, s, opts);
        }
        let v = alternating_sum(n, |k| {
            let ln_b = ((2 * k + 1) as f64).ln();
            Complex64::from_polar((-s.re * ln_b).exp(), -s.im * ln_b)
        });
        return finite_result(v);
    }
    let reflected = beta_l(1.0 - s, opts)?;
    let log_scale = (s - 0.5) * FRAC_PI_4.ln() + log_gamma(1.0 - 0.5 * s)? + log_gamma(0.5 * (1.0 - s))?
        - PI.ln();
    finite_result(ln_sin_scaled(0.5 * PI * s + FRAC_PI_2, log_scale) * reflected)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn character_tables_are_odd_and_balanced() {
        for q in [3, 4, 7, 8] {
            let d = Discriminant::new(q).unwrap();
            let total: i32 = (0..u64::from(q)).map(|a| i32::from(character(d, a))).sum();
            assert_eq!(total, 0);
            for a in 1..u64::from(q) {
                assert_eq!(character(d, a), -character(d, u64::from(q) - a), "q={q} a={a}");
            }
        }
    }

    #[test]
    fn characters_are_multiplicative() {
        for q in [3, 4, 7, 8] {
            let d = Discriminant::new(q).unwrap();
            for a in 1..40u64 {
                for b in 1..40u64 {
                    assert_eq!(character(d, a * b), character(d, a) * character(d, b));
                }
            }
        }
    }

    #[test]
    fn unsupported_discriminant() {
        assert!(matches!(Discriminant::new(5), Err(Error::UnsupportedDiscriminant(5))));
    }

    #[test]
    fn beta_special_values() {
        let o = EvalOptions::default();
        assert!((beta_l(c(1.0, 0.0), &o).unwrap().re - FRAC_PI_4).abs() < 1e-15);
        assert!((beta_l(c(0.0, 0.0), &o).unwrap().re - 0.5).abs() < 1e-14);
        for k in [1.0, 3.0, 5.0] {
            assert!(beta_l(c(-k, 0.0), &o).unwrap().norm() < 1e-12);
        }
    }

    #[test]
    fn l3_finite_at_one() {
        let o = EvalOptions::default();
        let v = dirichlet_l(Discriminant::THREE, c(1.0, 0.0), &o).unwrap();
        assert!((v.re - PI / (3.0 * 3f64.sqrt())).abs() < 1e-13);
        assert!(v.im.abs() < 1e-15);
    }
}
