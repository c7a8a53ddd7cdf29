use std::f64::consts::PI;

use super::{c64, ensure_finite, ComplexValue};
use crate::error::{Error, Result};

/// Lanczos coefficients, g = 7, nine terms.
const LANCZOS_G: f64 = 7.0;
const LANCZOS: [f64; 9] = [
    0.999_999_999_999_809_9,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_1,
    -176.615_029_162_140_6,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_572e-6,
    1.505_632_735_149_311_6e-7,
];

const LN_SQRT_2PI: f64 = 0.918_938_533_204_672_8;
const POLE_TOL: f64 = 1e-12;
/// Beyond this imaginary part the direct product under/overflows, so the
/// logarithmic form is used.
const LOG_SWITCH_IM: f64 = 20.0;

fn at_pole(z: ComplexValue) -> bool {
    z.im.abs() < POLE_TOL && z.re < 0.5 && (z.re - z.re.round()).abs() < POLE_TOL
}

fn lanczos_sum(zm1: ComplexValue) -> ComplexValue {
    let mut x = c64(LANCZOS[0], 0.0);
    for (i, &p) in LANCZOS.iter().enumerate().skip(1) {
        x += p / (zm1 + i as f64);
    }
    x
}

/// ln sin(πz), stable for large |Im z|. Branch is unspecified.
fn ln_sin_pi(z: ComplexValue) -> ComplexValue {
    let i = c64(0.0, 1.0);
    let ln_2i = c64(std::f64::consts::LN_2, PI / 2.0);
    if z.im >= 0.0 {
        -i * PI * z + ((2.0 * PI * i * z).exp() - 1.0).ln() - ln_2i
    } else {
        i * PI * z + (1.0 - (-2.0 * PI * i * z).exp()).ln() - ln_2i
    }
}

fn ln_gamma_right(z: ComplexValue) -> ComplexValue {
    let zm1 = z - 1.0;
    let t = zm1 + LANCZOS_G + 0.5;
    LN_SQRT_2PI + (zm1 + 0.5) * t.ln() - t + lanczos_sum(zm1).ln()
}

fn ln_gamma_unchecked(z: ComplexValue) -> ComplexValue {
    if z.re < 0.5 {
        c64(PI.ln(), 0.0) - ln_sin_pi(z) - ln_gamma_right(1.0 - z)
    } else {
        ln_gamma_right(z)
    }
}

/// A logarithm of Γ(z). The imaginary part is not normalised to the
/// principal branch; only `exp` of the result is meaningful.
pub fn ln_gamma(z: ComplexValue) -> Result<ComplexValue> {
    if at_pole(z) {
        return Err(Error::Pole(format!("Gamma at {z}")));
    }
    ensure_finite(ln_gamma_unchecked(z), "ln_gamma")
}

fn gamma_direct(z: ComplexValue) -> ComplexValue {
    if z.re < 0.5 {
        // reflection
        PI / ((PI * z).sin() * gamma_direct(1.0 - z))
    } else {
        let zm1 = z - 1.0;
        let t = zm1 + LANCZOS_G + 0.5;
        (2.0 * PI).sqrt() * t.powc(zm1 + 0.5) * (-t).exp() * lanczos_sum(zm1)
    }
}

/// Γ(z) by the Lanczos approximation with reflection for Re z < 1/2.
pub fn gamma(z: ComplexValue) -> Result<ComplexValue> {
    if at_pole(z) {
        return Err(Error::Pole(format!("Gamma at {z}")));
    }
    let v = if z.im.abs() > LOG_SWITCH_IM { ln_gamma_unchecked(z).exp() } else { gamma_direct(z) };
    ensure_finite(v, "gamma")
}

/// B(z, s) = Γ(z)Γ(s−z)/Γ(s), the Beta-function form of the Mellin–Barnes
/// kernel.
pub fn beta(z: ComplexValue, s: ComplexValue) -> Result<ComplexValue> {
    let w = s - z;
    for a in [z, w, s] {
        if at_pole(a) {
            return Err(Error::Pole(format!("Beta({z}, {s}) has a Gamma pole at {a}")));
        }
    }
    let big = [z, w, s].iter().any(|a| a.im.abs() > LOG_SWITCH_IM || a.norm() > 100.0);
    let v = if big {
        (ln_gamma_unchecked(z) + ln_gamma_unchecked(w) - ln_gamma_unchecked(s)).exp()
    } else {
        gamma_direct(z) * gamma_direct(w) / gamma_direct(s)
    };
    ensure_finite(v, "beta")
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn rel(a: ComplexValue, b: ComplexValue) -> f64 {
        (a - b).norm() / b.norm()
    }

    #[test]
    fn base_values() {
        assert_relative_eq!(gamma(c64(1.0, 0.0)).unwrap().re, 1.0, max_relative = 1e-14);
        // Γ(1/2)² = π by the reflection formula at z = 1/2
        let h = gamma(c64(0.5, 0.0)).unwrap();
        assert_relative_eq!(h.re, PI.sqrt(), max_relative = 1e-13);
        assert_relative_eq!(h.re, 1.772_453_850_9, max_relative = 1e-10);
        assert!(matches!(gamma(c64(0.0, 0.0)), Err(Error::Pole(_))));
        assert!(matches!(gamma(c64(-3.0, 0.0)), Err(Error::Pole(_))));
    }

    #[test]
    fn factorials() {
        let mut f = 1.0;
        for n in 1..25 {
            let g = gamma(c64(n as f64, 0.0)).unwrap();
            assert!(rel(g, c64(f, 0.0)) < 1e-13, "n = {n}");
            f *= n as f64;
        }
    }

    #[test]
    fn reflection_on_imaginary_axis() {
        // |Γ(iy)|² = π / (y sinh πy)
        for y in [0.3, 1.0, 5.0, 30.0] {
            let g = gamma(c64(0.0, y)).unwrap();
            let expect = PI / (y * (PI * y).sinh());
            assert!((g.norm_sqr() - expect).abs() / expect < 1e-12, "y = {y}");
        }
    }

    #[test]
    fn beta_examples() {
        // kernel form: the classical B(a, b) is beta(a, a + b)
        // ∫₀¹ (1−x) dx = 1/2
        let b = beta(c64(1.0, 0.0), c64(3.0, 0.0)).unwrap();
        assert_relative_eq!(b.re, 0.5, max_relative = 1e-13);
        let s = c64(3.0, 4.0);
        let b = beta(c64(1.0, 0.0), s + 1.0).unwrap();
        assert!(rel(b, 1.0 / s) < 1e-12);
        let z = c64(0.3, -2.0);
        let s = c64(1.7, 25.0);
        assert!(rel(beta(z, s).unwrap(), beta(s - z, s).unwrap()) < 1e-11);
        assert!(matches!(beta(c64(-1.0, 0.0), s), Err(Error::Pole(_))));
    }
}
