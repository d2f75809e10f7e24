use super::alternating::{alternating_sum, alternating_terms, MAX_ALTERNATING_TERMS};
use super::gamma::{ln_sin_scaled, log_gamma};
use super::{checked, finite_result, ComplexValue, EvalOptions};
use crate::error::{Error, Result};
use num_complex::Complex64;
use std::f64::consts::{LN_2, PI};

const POLE_TOL: f64 = 1e-12;
const LN_PI: f64 = 1.1447298858494002;

// B_{2j} / (2j)!, j = 1..12
const EM_COEFF: [f64; 12] = [
    0.08333333333333333,
    -0.001388888888888889,
    3.306878306878307e-05,
    -8.267195767195768e-07,
    2.08767569878681e-08,
    -5.284190138687493e-10,
    1.3382536530684679e-11,
    -3.3896802963225827e-13,
    8.586062056277845e-15,
    -2.174868698558062e-16,
    5.5090028283602295e-18,
    -1.3954464685812522e-19,
];

/// Riemann zeta function.
///
/// `Re s > 0` uses the accelerated eta series `eta(s) / (1 - 2^{1-s})`;
/// `Re s <= 0` reflects through the functional equation. Near the zeros of
/// `1 - 2^{1-s}`, near the origin, and at heights the alternating weights
/// cannot reach, the Euler-Maclaurin route is used instead.
pub fn zeta(s: ComplexValue, opts: &EvalOptions) -> Result<ComplexValue> {
    let s = checked(s)?;
    if (s - 1.0).norm() <= POLE_TOL {
        return Err(Error::PoleOfZeta(s));
    }
    if s.norm() < 0.5 {
        return finite_result(em_sum(s, &[(1.0, 1.0)], opts));
    }
    if s.re > 0.0 {
        let denom = 1.0 - ((1.0 - s) * LN_2).exp();
        let n = alternating_terms(s.im, opts.target_digits, opts.series_terms);
        if denom.norm() < 0.1 || n > MAX_ALTERNATING_TERMS {
            return finite_result(em_sum(s, &[(1.0, 1.0)], opts));
        }
        let eta = alternating_sum(n, |k| power_term(s, ((k + 1) as f64).ln()));
        return finite_result(eta / denom);
    }
    // zeta(s) = 2^s pi^{s-1} sin(pi s / 2) Gamma(1-s) zeta(1-s)
    let reflected = zeta(1.0 - s, opts)?;
    let log_scale = s * LN_2 + (s - 1.0) * LN_PI + log_gamma(1.0 - s)?;
    finite_result(ln_sin_scaled(0.5 * PI * s, log_scale) * reflected)
}

/// Hurwitz zeta `sum_{n>=0} (n + a)^{-s}` for `a` in `(0, 1]`.
pub fn hurwitz_zeta(s: ComplexValue, a: f64, opts: &EvalOptions) -> Result<ComplexValue> {
    let s = checked(s)?;
    if !(a > 0.0 && a <= 1.0) {
        return Err(Error::DomainError(format!("Hurwitz parameter a = {a} outside (0, 1]")));
    }
    if (s - 1.0).norm() <= POLE_TOL {
        return Err(Error::PoleOfZeta(s));
    }
    finite_result(em_sum(s, &[(a, 1.0)], opts))
}

#[inline]
fn power_term(s: Complex64, ln_base: f64) -> Complex64 {
    // base^{-s}
    Complex64::from_polar((-s.re * ln_base).exp(), -s.im * ln_base)
}

/// `(e^z - 1) / z`
fn exprel(z: Complex64) -> Complex64 {
    if z.norm() < 1e-5 {
        return 1.0 + z * (0.5 + z / 6.0);
    }
    let half_sin = (0.5 * z.im).sin();
    let expm1 = Complex64::new(
        z.re.exp_m1() * z.im.cos() - 2.0 * half_sin * half_sin,
        z.re.exp() * z.im.sin(),
    );
    expm1 / z
}

/// Direct-sum cutoff for which the first omitted Bernoulli correction drops
/// below the requested precision.
fn em_cutoff(s: Complex64, opts: &EvalOptions) -> usize {
    let m = opts.em_order.max(1);
    let abs_s = s.norm();
    let poch: f64 = (0..=2 * m).map(|k| (abs_s + k as f64 + 1.0).ln()).sum();
    let log_target = LN_2 + poch - (2 * m + 2) as f64 * (2.0 * PI).ln()
        + f64::from(opts.target_digits + 1) * std::f64::consts::LN_10;
    let n = (log_target / (2 * m + 1) as f64).exp().ceil();
    (n as usize).max(opts.series_terms)
}

/// Euler-Maclaurin evaluation of `sum_i w_i zeta(s, a_i)`.
///
/// When the weights sum to zero (a character sum) the `s = 1` poles of the
/// individual tails cancel and are evaluated in closed form.
pub(crate) fn em_sum(s: Complex64, shifts: &[(f64, f64)], opts: &EvalOptions) -> Complex64 {
    let n = em_cutoff(s, opts);
    let weight_total: f64 = shifts.iter().map(|&(_, w)| w).sum();
    let cancelling = weight_total.abs() < 1e-12;
    let mut total = Complex64::new(0.0, 0.0);
    for &(a, w) in shifts {
        if w == 0.0 {
            continue;
        }
        let mut part = Complex64::new(0.0, 0.0);
        for k in 0..n {
            part += power_term(s, (k as f64 + a).ln());
        }
        let x = n as f64 + a;
        let ln_x = x.ln();
        let x_pow = power_term(s, ln_x);
        part += if cancelling {
            // (x^{1-s} - 1) / (s - 1), the constant drops out of the character sum
            -ln_x * exprel((1.0 - s) * ln_x)
        } else {
            x_pow * x / (s - 1.0)
        };
        part += 0.5 * x_pow;
        let mut rising = s;
        let mut x_factor = x_pow / x;
        let inv_x2 = 1.0 / (x * x);
        for (j, c) in EM_COEFF.iter().take(opts.em_order).enumerate() {
            part += *c * rising * x_factor;
            let jf = (j + 1) as f64;
            rising *= (s + 2.0 * jf - 1.0) * (s + 2.0 * jf);
            x_factor *= inv_x2;
        }
        total += w * part;
    }
    total
}
