//! Special functions on the whole complex plane: log-gamma, Riemann and
//! Hurwitz zeta, the Dirichlet beta function and the real odd L-functions
//! of small discriminant.
//!
//! Everything here is double precision. The alternating-series routes carry
//! roughly 15 significant digits for |t| <= 200; the Euler-Maclaurin route is
//! used where the alternating series is ill-conditioned.

mod alternating;
mod gamma;
mod lfunc;
mod zeta;

pub use alternating::{alternating_sum, alternating_terms};
pub use gamma::{ln_sin_scaled, log_gamma};
pub use lfunc::{beta_l, character, dirichlet_l, Discriminant};
pub use zeta::{hurwitz_zeta, zeta};

use crate::error::{Error, Result};
use num_complex::Complex64;

/// A point `s = sigma + i t` of the complex plane.
pub type ComplexValue = Complex64;

/// Reject NaN and infinite inputs at API boundaries.
pub fn checked(s: ComplexValue) -> Result<ComplexValue> {
    if s.re.is_finite() && s.im.is_finite() {
        Ok(s)
    } else {
        Err(Error::NonFinite(s))
    }
}

pub(crate) fn finite_result(v: ComplexValue) -> Result<ComplexValue> {
    if v.re.is_finite() && v.im.is_finite() {
        Ok(v)
    } else {
        Err(Error::NonFinite(v))
    }
}

/// Accuracy knobs shared by every series evaluation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EvalOptions {
    /// Lower bound on the number of directly summed terms.
    pub series_terms: usize,
    /// Number of Bernoulli corrections in Euler-Maclaurin tails.
    pub em_order: usize,
    /// Requested significant digits.
    pub target_digits: u32,
}

impl EvalOptions {
    pub fn new(series_terms: usize, em_order: usize, target_digits: u32) -> Result<Self> {
        if series_terms < 8 {
            return Err(Error::DomainError(format!("series_terms must be >= 8, got {series_terms}")));
        }
        if em_order > 12 {
            return Err(Error::DomainError(format!("em_order must be <= 12, got {em_order}")));
        }
        if target_digits == 0 || target_digits > 15 {
            return Err(Error::DomainError(format!(
                "target_digits must be in 1..=15, got {target_digits}"
            )));
        }
        Ok(EvalOptions { series_terms, em_order, target_digits })
    }
}

impl Default for EvalOptions {
    fn default() -> Self {
        EvalOptions { series_terms: 16, em_order: 12, target_digits: 15 }
    }
}
