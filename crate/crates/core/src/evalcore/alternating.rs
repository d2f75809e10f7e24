use num_complex::Complex64;

/// Largest term count for which the normalized Chebyshev weights stay in the
/// normal f64 range.
pub(crate) const MAX_ALTERNATING_TERMS: usize = 380;

/// Number of accelerated terms needed for `digits` correct digits at height `t`.
///
/// The Cohen-Villegas-Zagier error decays like `(3 + sqrt 8)^-n` but is
/// inflated by roughly `exp(pi |t| / 2)` for complex exponents.
pub fn alternating_terms(t: f64, digits: u32, min: usize) -> usize {
    let t = t.abs();
    let rate = (3.0 + 8f64.sqrt()).ln();
    let need = (f64::from(digits) * std::f64::consts::LN_10 + 1.6 * t + 2.0 * (2.0 + t).ln() + 5.0) / rate;
    (need.ceil() as usize).max(min)
}

/// Accelerated value of `sum_{k>=0} (-1)^k a_k` using `n` terms.
pub fn alternating_sum<F>(n: usize, mut term: F) -> Complex64
where
    F: FnMut(usize) -> Complex64,
{
    let nf = n as f64;
    let d = (3.0 + 8f64.sqrt()).powf(nf);
    let d = 0.5 * (d + 1.0 / d);
    // weights are carried divided by d
    let mut b = -1.0 / d;
    let mut c = -1.0;
    let mut acc = Complex64::new(0.0, 0.0);
    for k in 0..n {
        let kf = k as f64;
        c = b - c;
        acc += term(k) * c;
        b = (kf + nf) * (kf - nf) * b / ((kf + 0.5) * (kf + 1.0));
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn leibniz_series() {
        let v = alternating_sum(30, |k| Complex64::new(1.0 / (2 * k + 1) as f64, 0.0));
        assert!((v.re - std::f64::consts::FRAC_PI_4).abs() < 1e-15);
    }

    #[test]
    fn log_two() {
        let v = alternating_sum(30, |k| Complex64::new(1.0 / (k + 1) as f64, 0.0));
        assert!((v.re - std::f64::consts::LN_2).abs() < 1e-15);
    }

    #[test]
    fn term_count_grows_with_height() {
        assert!(alternating_terms(100.0, 15, 8) > alternating_terms(10.0, 15, 8));
        assert_eq!(alternating_terms(0.0, 1, 500), 500);
    }
}
