use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numcore::{c64, ensure_finite, phi_mellin_continued, pow_neg, ComplexValue, SmoothCutoff};

/// Radius of the exclusion disc around the pole at s = 1.
pub const POLE_RADIUS: f64 = 1e-12;

/// B_{2j} for j = 1..=12 as (numerator, denominator).
const BERNOULLI: [(f64, f64); 12] = [
    (1.0, 6.0),
    (-1.0, 30.0),
    (1.0, 42.0),
    (-1.0, 30.0),
    (5.0, 66.0),
    (-691.0, 2730.0),
    (7.0, 6.0),
    (-3617.0, 510.0),
    (43867.0, 798.0),
    (-174611.0, 330.0),
    (854513.0, 138.0),
    (-236364091.0, 2730.0),
];

/// B_{2j}/(2j)!.
fn bernoulli_coeff(j: usize) -> f64 {
    let (num, den) = BERNOULLI[j - 1];
    let fact: f64 = (1..=2 * j).map(|k| k as f64).product();
    num / den / fact
}

/// Euler–Maclaurin settings.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct EmOptions {
    /// Terms summed directly. `None` picks `max(50, 2|Im s|, |s|)` for
    /// Re s ≥ 0; for Re s < 0, where a long head sum cancels, the smallest
    /// shift whose truncation bound falls below the rounding estimate.
    pub em_terms: Option<usize>,
    pub bernoulli_order: usize,
}

impl Default for EmOptions {
    fn default() -> Self {
        EmOptions { em_terms: None, bernoulli_order: 12 }
    }
}

impl EmOptions {
    fn shift(&self, s: ComplexValue, alpha: f64) -> usize {
        if let Some(m) = self.em_terms {
            return m;
        }
        let wide = 50usize.max((2.0 * s.im.abs()).ceil() as usize).max(s.norm().ceil() as usize);
        if s.re >= 0.0 {
            return wide;
        }
        // Balance rounding in the head sum, ~ε·x^{1−σ}, against the first
        // omitted Bernoulli term, ~2(2π)^{−2p−2}|(s)_{2p+1}| x^{−σ−2p−1}.
        let p = self.bernoulli_order;
        let ln_poch: f64 = (0..=2 * p).map(|k| (s + k as f64).norm().max(1e-300).ln()).sum();
        let ln_coeff = std::f64::consts::LN_2 - (2 * p + 2) as f64 * crate::numcore::TAU.ln();
        let sigma = s.re;
        for m in 4..wide {
            let lx = (m as f64 + alpha).ln();
            let cancel = (40.0 * f64::EPSILON).ln() + (1.0 - sigma) * lx;
            let trunc = ln_coeff + ln_poch - (sigma + (2 * p + 1) as f64) * lx;
            if trunc <= cancel {
                return m;
            }
        }
        wide
    }
}

/// (e^z − 1)/z, accurate near 0.
fn exprel(z: ComplexValue) -> ComplexValue {
    if z.norm() < 0.1 {
        let mut term = c64(1.0, 0.0);
        let mut sum = term;
        for k in 2..20 {
            term = term * z / k as f64;
            sum += term;
        }
        sum
    } else {
        (z.exp() - 1.0) / z
    }
}

/// ζ(s, α) − 1/(s − 1): entire in s. At s = 1 this is −ψ(α).
pub fn hurwitz_regular(s: ComplexValue, alpha: f64, opts: &EmOptions) -> Result<ComplexValue> {
    if !(alpha > 0.0 && alpha.is_finite()) {
        return Err(Error::Domain(format!("Hurwitz parameter {alpha} must be positive")));
    }
    let order = opts.bernoulli_order;
    if order > BERNOULLI.len() {
        return Err(Error::Domain(format!("bernoulli_order {order} exceeds {}", BERNOULLI.len())));
    }
    let m = opts.shift(s, alpha);
    let mut head = c64(0.0, 0.0);
    for k in (0..m).rev() {
        head += pow_neg(k as f64 + alpha, s);
    }
    let x = m as f64 + alpha;
    let lx = x.ln();
    let xs = pow_neg(x, s);
    // (x^{1−s} − 1)/(s − 1) = −log x · exprel((1 − s) log x)
    let integral = -lx * exprel((1.0 - s) * lx);
    let mut tail = xs * 0.5;
    let mut poch = s; // (s)_{2j−1}
    let mut xp = xs / x; // x^{−s−2j+1}
    let x2 = x * x;
    for j in 1..=order {
        tail += poch * xp * bernoulli_coeff(j);
        poch *= (s + (2 * j) as f64 - 1.0) * (s + (2 * j) as f64);
        xp /= x2;
    }
    ensure_finite(head + integral + tail, "hurwitz_regular")
}

/// ζ(s, α) by Euler–Maclaurin with default settings.
pub fn hurwitz_zeta(s: ComplexValue, alpha: f64) -> Result<ComplexValue> {
    hurwitz_zeta_with(s, alpha, &EmOptions::default())
}

pub fn hurwitz_zeta_with(s: ComplexValue, alpha: f64, opts: &EmOptions) -> Result<ComplexValue> {
    let d = s - 1.0;
    if d.norm() < POLE_RADIUS {
        return Err(Error::Pole(format!("Hurwitz zeta at s = {s}")));
    }
    let r = hurwitz_regular(s, alpha, opts)?;
    ensure_finite(r + 1.0 / d, "hurwitz_zeta")
}

/// Σ_{n≥0} φ((n+α)/T)(n+α)^{−s}, smallest terms first.
pub fn hurwitz_smoothed(s: ComplexValue, alpha: f64, t_scale: f64, cutoff: &SmoothCutoff) -> Result<ComplexValue> {
    if !(t_scale >= 1.0) {
        return Err(Error::Domain(format!("smoothing scale T = {t_scale} must be ≥ 1")));
    }
    if !(alpha > 0.0) {
        return Err(Error::Domain(format!("Hurwitz parameter {alpha} must be positive")));
    }
    let limit = cutoff.support_end * t_scale;
    if alpha >= limit {
        return Ok(c64(0.0, 0.0));
    }
    let last = (limit - alpha).ceil() as usize;
    let mut acc = c64(0.0, 0.0);
    let flip = s.re < 0.0;
    let mut add = |n: usize| {
        let x = n as f64 + alpha;
        let w = cutoff.value(x / t_scale);
        if w != 0.0 {
            acc += pow_neg(x, s) * w;
        }
    };
    if flip {
        (0..=last).for_each(&mut add);
    } else {
        (0..=last).rev().for_each(&mut add);
    }
    ensure_finite(acc, "hurwitz_smoothed")
}

/// T^{1−s}Φ(1−s): the contribution of the pole at s = 1 to the smoothed
/// sum. `hurwitz_smoothed − hurwitz_zeta` is this term up to a remainder
/// that is small away from the real axis.
pub fn pole_term(s: ComplexValue, t_scale: f64, cutoff: &SmoothCutoff) -> Result<ComplexValue> {
    let w = 1.0 - s;
    let phi = phi_mellin_continued(cutoff, w)?;
    ensure_finite(pow_neg(t_scale, s - 1.0) * phi, "pole_term")
}

/// Which error bound of the one-variable approximate functional equation
/// applies.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Regime {
    /// T^ξ ≤ |Im s| ≤ T: error O(T^{−A}).
    FarFromOne,
    /// |Im s| < T^ξ: error O((1 + 1/|s−1|) T^{1−Re s}).
    NearOne,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AfeValue {
    pub value: ComplexValue,
    pub regime: Regime,
}

/// Bounds checked by [`hurwitz_afe`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct AfeOptions {
    /// |Re s| must not exceed this.
    pub re_bound: f64,
    pub cutoff: SmoothCutoff,
}

impl Default for AfeOptions {
    fn default() -> Self {
        AfeOptions { re_bound: 10.0, cutoff: SmoothCutoff::default() }
    }
}

/// The smoothed Dirichlet polynomial as an approximation of ζ(s, α),
/// tagged with its error regime.
pub fn hurwitz_afe(s: ComplexValue, alpha: f64, t_scale: f64, xi: f64, opts: &AfeOptions) -> Result<AfeValue> {
    if !(xi > 0.0 && xi < 1.0) {
        return Err(Error::Domain(format!("xi = {xi} must lie in (0, 1)")));
    }
    if s.im.abs() > t_scale {
        return Err(Error::Range(format!("|Im s| = {} exceeds T = {t_scale}", s.im.abs())));
    }
    if s.re.abs() > opts.re_bound {
        return Err(Error::Range(format!("|Re s| = {} exceeds {}", s.re.abs(), opts.re_bound)));
    }
    let regime = if s.im.abs() >= t_scale.powf(xi) { Regime::FarFromOne } else { Regime::NearOne };
    let value = hurwitz_smoothed(s, alpha, t_scale, &opts.cutoff)?;
    Ok(AfeValue { value, regime })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use std::f64::consts::PI;

    /// Independent oracle: direct partial sum plus the integral tail
    /// ∫_N^∞ (x+α)^{−s} dx and a half-term correction; valid for Re s > 1.
    fn direct(s: ComplexValue, alpha: f64, n: usize) -> ComplexValue {
        let mut acc = c64(0.0, 0.0);
        for k in (0..n).rev() {
            acc += (c64(k as f64 + alpha, 0.0)).powc(-s);
        }
        let x = c64(n as f64 + alpha, 0.0);
        acc + x.powc(1.0 - s) / (s - 1.0) + x.powc(-s) * 0.5
    }

    #[test]
    fn zeta_two() {
        let z = hurwitz_zeta(c64(2.0, 0.0), 1.0).unwrap();
        assert!((z.re - PI * PI / 6.0).abs() < 1e-14);
        assert!((z.re - 1.644_934_066_8).abs() < 1e-10);
        let o = direct(c64(2.0, 0.0), 1.0, 200_000);
        assert!((z - o).norm() < 1e-12);
    }

    #[test]
    fn known_values() {
        // ζ(0, α) = 1/2 − α; ζ(−1, 1) = −1/12; ζ(1/2, 1) ≈ −1.4603545088
        let z = hurwitz_zeta(c64(0.0, 0.0), 0.3).unwrap();
        assert!((z - c64(0.2, 0.0)).norm() < 1e-13);
        let z = hurwitz_zeta(c64(-1.0, 0.0), 1.0).unwrap();
        assert!((z.re + 1.0 / 12.0).abs() < 1e-13);
        let z = hurwitz_zeta(c64(0.5, 0.0), 1.0).unwrap();
        assert!((z.re + 1.460_354_508_809_586_8).abs() < 1e-12);
        // ζ(−3, 1) = 1/120, the Bernoulli value at negative integers
        let z = hurwitz_zeta(c64(-3.0, 0.0), 1.0).unwrap();
        assert!((z.re - 1.0 / 120.0).abs() < 1e-13);
        // first Riemann zero
        let z = hurwitz_zeta(c64(0.5, 14.134_725_141_734_693), 1.0).unwrap();
        assert!(z.norm() < 1e-12);
    }

    #[test]
    fn pole_and_domain() {
        assert!(matches!(hurwitz_zeta(c64(1.0, 0.0), 1.0), Err(Error::Pole(_))));
        assert!(hurwitz_zeta(c64(1.0 + 1e-9, 0.0), 1.0).is_ok());
        assert!(matches!(hurwitz_zeta(c64(2.0, 0.0), 0.0), Err(Error::Domain(_))));
        // −ψ(1) = γ
        let r = hurwitz_regular(c64(1.0, 0.0), 1.0, &EmOptions::default()).unwrap();
        assert!((r.re - 0.577_215_664_901_532_9).abs() < 1e-14);
    }

    #[test]
    fn half_parameter_relation() {
        let s = c64(0.75, 10.0);
        let lhs = hurwitz_zeta(s, 0.5).unwrap();
        let two_s = c64(2.0, 0.0).powc(s);
        let rhs = (two_s - 1.0) * hurwitz_zeta(s, 1.0).unwrap();
        assert!((lhs - rhs).norm() < 1e-10);
    }

    #[test]
    fn high_on_the_line() {
        // agreement with the absolutely convergent oracle at Re s = 3
        for t in [100.0, 500.0, 1000.0] {
            let s = c64(3.0, t);
            let z = hurwitz_zeta(s, 0.7).unwrap();
            let o = direct(s, 0.7, 200_000);
            assert!((z - o).norm() / z.norm() < 1e-10, "t = {t}");
        }
    }

    #[test]
    fn smoothed_examples() {
        let c = SmoothCutoff::default();
        let v = hurwitz_smoothed(c64(20.0, 0.0), 1.0, 10.0, &c).unwrap();
        assert!((v - 1.0).norm() < 1e-5);
        // plateau terms enter with weight one
        let s = c64(0.7, 3.0);
        let v = hurwitz_smoothed(s, 0.4, 5.0, &c).unwrap();
        let mut by_hand = c64(0.0, 0.0);
        for n in 0..40 {
            let x = n as f64 + 0.4;
            let w = if x <= 10.0 { 1.0 } else { c.value(x / 5.0) };
            by_hand += c64(x, 0.0).powc(-s) * w;
        }
        assert!((v - by_hand).norm() < 1e-13);
        // at s = 1.5 the dropped tail Σ_{n>2.5T} n^{-3/2} ≈ 0.056 is the
        // pole term, not a small quantity
        let s = c64(1.5, 0.0);
        let v = hurwitz_smoothed(s, 1.0, 500.0, &c).unwrap();
        let z = hurwitz_zeta(s, 1.0).unwrap();
        let p = pole_term(s, 500.0, &c).unwrap();
        assert!((v - z - p).norm() < 1e-10);
        assert!((p.re + 2.0 / 1250f64.sqrt()).abs() < 2e-3);
        assert!(hurwitz_smoothed(c64(1.5, 0.0), 1.0, 0.5, &c).is_err());
    }

    #[test]
    fn smoothing_error_is_the_pole_term() {
        let c = SmoothCutoff::default();
        let s = c64(1.5, 50.0);
        let v = hurwitz_smoothed(s, 1.0, 100.0, &c).unwrap();
        let z = hurwitz_zeta(s, 1.0).unwrap();
        let p = pole_term(s, 100.0, &c).unwrap();
        assert!((v - z - p).norm() < 1e-10, "{}", (v - z - p).norm());
    }

    #[test]
    fn afe_regimes() {
        let o = AfeOptions::default();
        let r = hurwitz_afe(c64(1.5, 50.0), 1.0, 100.0, 0.3, &o).unwrap();
        assert_eq!(r.regime, Regime::FarFromOne);
        let r = hurwitz_afe(c64(1.5, 0.5), 1.0, 100.0, 0.3, &o).unwrap();
        assert_eq!(r.regime, Regime::NearOne);
        assert!(matches!(hurwitz_afe(c64(1.5, 200.0), 1.0, 100.0, 0.3, &o), Err(Error::Range(_))));
        assert!(matches!(hurwitz_afe(c64(1.5, 2.0), 1.0, 100.0, 1.0, &o), Err(Error::Domain(_))));
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(100))]

        #[test]
        fn third_parameter_relation(sigma in 0.5001f64..0.9999, t in -50.0f64..50.0) {
            let s = c64(sigma, t);
            let lhs = (hurwitz_zeta(s, 1.0 / 3.0).unwrap() + hurwitz_zeta(s, 2.0 / 3.0).unwrap())
                / (c64(3.0, 0.0).powc(s) - 1.0);
            let rhs = hurwitz_zeta(s, 0.5).unwrap() / (c64(2.0, 0.0).powc(s) - 1.0);
            prop_assert!((lhs - rhs).norm() <= 1e-9);
        }

        #[test]
        fn index_shift(sigma in -2.0f64..5.0, t in -300.0f64..300.0, alpha in 0.05f64..5.0) {
            let s = c64(sigma, t);
            prop_assume!((s - 1.0).norm() > 1e-3);
            let a = hurwitz_zeta(s, alpha).unwrap();
            let b = hurwitz_zeta(s, alpha + 1.0).unwrap();
            let d = a - b - c64(alpha, 0.0).powc(-s);
            prop_assert!(d.norm() <= 1e-10 * a.norm().max(1.0));
        }

        #[test]
        fn far_regime_matches_up_to_pole_term(sigma in 0.5f64..2.0, t in 4.92f64..200.0) {
            let c = SmoothCutoff::default();
            let s = c64(sigma, t);
            let r = hurwitz_afe(s, 1.0, 200.0, 0.3, &AfeOptions::default()).unwrap();
            prop_assert_eq!(r.regime, Regime::FarFromOne);
            let z = hurwitz_zeta(s, 1.0).unwrap();
            let p = pole_term(s, 200.0, &c).unwrap();
            prop_assert!((r.value - p - z).norm() <= 1e-6);
        }
    }
}
