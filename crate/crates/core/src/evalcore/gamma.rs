use super::{checked, ComplexValue};
use crate::error::{Error, Result};
use num_complex::Complex64;

const HALF_LN_TWO_PI: f64 = 0.918_938_533_204_672_8;

// B_{2k} / (2k (2k - 1)), k = 1..10
const STIRLING: [f64; 10] = [
    0.08333333333333333,
    -0.002777777777777778,
    0.0007936507936507937,
    -0.0005952380952380953,
    0.0008417508417508417,
    -0.0019175269175269176,
    0.00641025641025641,
    -0.029550653594771242,
    0.17964437236883057,
    -1.3924322169059011,
];

const POLE_TOL: f64 = 1e-12;
const SHIFT_TO: f64 = 10.0;

/// Principal branch of `ln Gamma(s)`.
///
/// The argument is shifted up with `Gamma(z) = Gamma(z + 1) / z` until
/// `Re z >= 10` and the Stirling series is summed there. The imaginary part
/// is continuous along paths that avoid the negative real axis.
pub fn log_gamma(s: ComplexValue) -> Result<ComplexValue> {
    let s = checked(s)?;
    if s.im.abs() <= POLE_TOL {
        let r = s.re.round();
        if r <= 0.0 && (s.re - r).abs() <= POLE_TOL {
            return Err(Error::PoleOfGamma(s));
        }
    }
    let mut z = s;
    let mut shift = Complex64::new(0.0, 0.0);
    while z.re < SHIFT_TO {
        shift += z.ln();
        z += 1.0;
    }
    Ok(stirling(z) - shift)
}

fn stirling(z: Complex64) -> Complex64 {
    let w = (z * z).inv();
    let mut series = Complex64::new(0.0, 0.0);
    for c in STIRLING.iter().rev() {
        series = series * w + c;
    }
    (z - 0.5) * z.ln() - z + HALF_LN_TWO_PI + series / z
}

/// `sin(z) * exp(log_scale)` without overflow when `|Im z|` is large.
pub fn ln_sin_scaled(z: Complex64, log_scale: Complex64) -> Complex64 {
    const DIRECT: f64 = 30.0;
    let i = Complex64::i();
    if z.im.abs() < DIRECT {
        z.sin() * log_scale.exp()
    } else if z.im > 0.0 {
        // sin z = e^{-iz} (e^{2iz} - 1) / 2i
        (log_scale - i * z).exp() * ((2.0 * i * z).exp() - 1.0) / (2.0 * i)
    } else {
        // sin z = e^{iz} (1 - e^{-2iz}) / 2i
        (log_scale + i * z).exp() * (1.0 - (-2.0 * i * z).exp()) / (2.0 * i)
    }
}
