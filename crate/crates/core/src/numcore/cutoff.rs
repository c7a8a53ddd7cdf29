use serde::{Deserialize, Serialize};

use super::quad::{integrate, QuadOptions};
use super::{c64, ensure_finite, ComplexValue};
use crate::error::{Error, Result};

/// The smooth cutoff φ: 1 on `[0, plateau_end]`, 0 from `support_end` on,
/// with an exp-based smooth-step bridge in between.
///
/// The bridge is `1 − step(u)` with `u = (x − plateau_end)/(support_end −
/// plateau_end)` and `step(u) = f(u)/(f(u) + f(1−u))`, `f(v) = exp(−a/v)`.
/// `a` is `steepness`. Every derivative vanishes at both ends.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SmoothCutoff {
    pub plateau_end: f64,
    pub support_end: f64,
    pub steepness: f64,
}

impl Default for SmoothCutoff {
    fn default() -> Self {
        SmoothCutoff { plateau_end: 2.0, support_end: 3.0, steepness: 1.0 }
    }
}

impl SmoothCutoff {
    pub fn new(plateau_end: f64, support_end: f64, steepness: f64) -> Result<Self> {
        let c = SmoothCutoff { plateau_end, support_end, steepness };
        c.validate()?;
        Ok(c)
    }

    pub fn validate(&self) -> Result<()> {
        let ok = self.plateau_end > 0.0
            && self.support_end > self.plateau_end
            && self.steepness > 0.0
            && self.support_end.is_finite()
            && self.steepness.is_finite();
        if ok {
            Ok(())
        } else {
            Err(Error::Domain(format!("invalid cutoff {self:?}")))
        }
    }

    #[inline]
    fn width(&self) -> f64 {
        self.support_end - self.plateau_end
    }

    /// log(f(1−u)/f(u)) for u in (0, 1).
    #[inline]
    fn log_ratio(&self, u: f64) -> f64 {
        self.steepness * (1.0 / u - 1.0 / (1.0 - u))
    }

    /// φ(x) for `x ≥ 0`; callers guarantee the sign.
    #[inline]
    pub fn value(&self, x: f64) -> f64 {
        if x <= self.plateau_end {
            return 1.0;
        }
        if x >= self.support_end {
            return 0.0;
        }
        let u = (x - self.plateau_end) / self.width();
        // 1 − step(u) = r/(1+r) with r = f(1−u)/f(u)
        let g = self.log_ratio(u);
        if g >= 0.0 {
            1.0 / (1.0 + (-g).exp())
        } else {
            let r = g.exp();
            r / (1.0 + r)
        }
    }

    /// φ'(x); zero outside the bridge.
    pub fn derivative(&self, x: f64) -> f64 {
        if x <= self.plateau_end || x >= self.support_end {
            return 0.0;
        }
        let w = self.width();
        let u = (x - self.plateau_end) / w;
        let g = self.log_ratio(u);
        let dg = -self.steepness * (1.0 / (u * u) + 1.0 / ((1.0 - u) * (1.0 - u)));
        // d/du [1/(1+e^{-g})] = g'/(4 cosh²(g/2))
        let c = (0.5 * g).cosh();
        if !c.is_finite() {
            return 0.0;
        }
        dg / (4.0 * c * c) / w
    }

    /// Mass of φ outside the plateau, `∫ φ` over the bridge.
    pub fn bridge_mass(&self) -> f64 {
        integrate(
            |x| Ok(c64(self.value(x), 0.0)),
            self.plateau_end,
            self.support_end,
            QuadOptions { abs_tol: 1e-14, rel_tol: 1e-14, ..Default::default() },
        )
        .map(|r| r.value.re)
        .unwrap_or(f64::NAN)
    }
}

/// φ(x) with a domain check.
pub fn phi_eval(cutoff: &SmoothCutoff, x: f64) -> Result<f64> {
    if !(x >= 0.0) {
        return Err(Error::Domain(format!("phi at x = {x}")));
    }
    Ok(cutoff.value(x))
}

/// ∫₀^∞ x^{z−1} φ(x) dx for Re z > 0.
pub fn phi_mellin(cutoff: &SmoothCutoff, z: ComplexValue) -> Result<ComplexValue> {
    if !(z.re > 0.0) {
        return Err(Error::Domain(format!("Mellin transform of phi needs Re z > 0, got {z}")));
    }
    let p = cutoff.plateau_end;
    let plateau = c64(p, 0.0).powc(z) / z;
    let bridge = integrate(
        |x| Ok(c64(x, 0.0).powc(z - 1.0) * cutoff.value(x)),
        p,
        cutoff.support_end,
        QuadOptions { abs_tol: 1e-12, rel_tol: 1e-13, ..Default::default() },
    )?;
    ensure_finite(plateau + bridge.value, "phi_mellin")
}

/// The meromorphic continuation `Φ(w) = −(1/w) ∫ x^w φ'(x) dx`, defined
/// for every `w ≠ 0` (simple pole with residue 1 at the origin).
pub fn phi_mellin_continued(cutoff: &SmoothCutoff, w: ComplexValue) -> Result<ComplexValue> {
    if w.norm() < 1e-12 {
        return Err(Error::Pole(format!("Mellin transform of phi at w = {w}")));
    }
    // the bridge integrand oscillates like x^{i Im w}; give the adaptive
    // rule enough room at large heights
    let r = integrate(
        |x| Ok(c64(x, 0.0).powc(w) * cutoff.derivative(x)),
        cutoff.plateau_end,
        cutoff.support_end,
        QuadOptions { abs_tol: 1e-14, rel_tol: 1e-12, max_intervals: 20_000 },
    )?;
    ensure_finite(-r.value / w, "phi_mellin_continued")
}
