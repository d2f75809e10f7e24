//! Numerical study of the quotient `Delta5(s) = zeta(s) L_{-4}(s) / zeta(2s - 1/2)`.

pub mod census;
pub mod contours;
pub mod critical;
pub mod error;
pub mod evalcore;
pub mod quotient;
pub mod render;
pub mod verify;

pub use error::{Error, Result};
pub use num_complex::Complex64;
