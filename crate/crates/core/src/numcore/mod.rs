//! Scalar numerics shared by every evaluator: complex helpers, the Gamma and
//! Beta functions, the smooth cutoff and its Mellin transform, adaptive
//! Gauss–Kronrod quadrature for complex-valued integrands, and sieve-backed
//! factorization.

mod cutoff;
mod gamma;
pub mod primes;
pub mod quad;

pub use cutoff::{phi_eval, phi_mellin, phi_mellin_continued, SmoothCutoff};
pub use gamma::{beta, gamma, ln_gamma};

use crate::error::{Error, Result};

/// The universal scalar.
pub type ComplexValue = num_complex::Complex64;

pub(crate) const TAU: f64 = std::f64::consts::TAU;

#[inline]
pub fn c64(re: f64, im: f64) -> ComplexValue {
    ComplexValue::new(re, im)
}

#[inline]
pub fn is_finite(z: ComplexValue) -> bool {
    z.re.is_finite() && z.im.is_finite()
}

/// Rejects NaN/Inf so they never escape an operation silently.
#[inline]
pub fn ensure_finite(z: ComplexValue, what: &'static str) -> Result<ComplexValue> {
    if is_finite(z) {
        Ok(z)
    } else {
        Err(Error::NonFinite(what))
    }
}

/// `x^{-s}` for real `x > 0`.
#[inline]
pub fn pow_neg(x: f64, s: ComplexValue) -> ComplexValue {
    let l = x.ln();
    let (sin, cos) = (-s.im * l).sin_cos();
    let m = (-s.re * l).exp();
    c64(m * cos, m * sin)
}

/// `e^{2πi k/n}` with exact values at quarter turns.
pub fn root_of_unity(k: i64, n: u64) -> ComplexValue {
    let n = n.max(1) as i64;
    let k = k.rem_euclid(n);
    if 4 * k % n == 0 {
        return match 4 * k / n {
            0 => c64(1.0, 0.0),
            1 => c64(0.0, 1.0),
            2 => c64(-1.0, 0.0),
            _ => c64(0.0, -1.0),
        };
    }
    let (s, c) = (TAU * k as f64 / n as f64).sin_cos();
    c64(c, s)
}
