use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hurwitz::HurwitzParam;
use crate::numcore::primes::primes_up_to;
use crate::numcore::TAU;

/// Samples drawn from one independently seeded stream.
const BLOCK: usize = 4096;

/// Targets for the Weyl set B_{N,T}(δ): the shifts t whose phases
/// t·log x/(2π) lie within δ/2 of θ_x (mod 1) for every constrained x.
///
/// The constrained x are k + α for 0 ≤ k ≤ N − α (transcendental α) or the
/// primes in `primes`, by default all p ≤ N (rational α). `targets[i]`
/// belongs to the i-th constrained x; missing targets are 0.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct WeylTargetSpec {
    pub targets: Vec<f64>,
    pub delta: f64,
    pub cutoff: u64,
    pub primes: Option<Vec<u64>>,
    /// Use t/(2π log x) in place of t·log x/(2π).
    pub displayed_form: bool,
}

impl Default for WeylTargetSpec {
    fn default() -> Self {
        WeylTargetSpec { targets: Vec::new(), delta: 1.0, cutoff: 1, primes: None, displayed_form: false }
    }
}

impl WeylTargetSpec {
    fn validate(&self) -> Result<()> {
        if !(self.delta > 0.0 && self.delta <= 1.0) {
            return Err(Error::Domain(format!("δ = {} must lie in (0, 1]", self.delta)));
        }
        if let Some(t) = self.targets.iter().find(|t| !(0.0..1.0).contains(*t)) {
            return Err(Error::Domain(format!("target {t} is outside [0, 1)")));
        }
        Ok(())
    }

    /// The constrained points x.
    pub fn constrained(&self, alpha: &HurwitzParam) -> Vec<f64> {
        if alpha.as_rational().is_some() {
            match &self.primes {
                Some(ps) => ps.iter().map(|&p| p as f64).collect(),
                None => primes_up_to(self.cutoff).into_iter().map(|p| p as f64).collect(),
            }
        } else {
            let a = alpha.value();
            let n = self.cutoff as f64;
            if n < a {
                return Vec::new();
            }
            (0..=(n - a).floor() as u64).map(|k| k as f64 + a).collect()
        }
    }
}

/// Distance from x to the nearest integer.
#[inline]
fn frac_dist(x: f64) -> f64 {
    (x - x.round()).abs()
}

/// Monte Carlo estimate of meas(B_{N,T}(δ))/T with t uniform on [0, T].
///
/// Samples come in blocks of 4096; block b uses ChaCha8 seeded with `seed`
/// on stream b, so the estimate does not depend on the thread count. The
/// same seed gives the same t-samples for every δ, which makes the estimate
/// monotone in δ.
pub fn weyl_set_measure(
    alpha: &HurwitzParam,
    spec: &WeylTargetSpec,
    t_max: f64,
    samples: usize,
    seed: u64,
) -> Result<f64> {
    spec.validate()?;
    if samples < 1000 {
        return Err(Error::Domain(format!("{samples} samples; at least 1000 are required")));
    }
    if !(t_max > 0.0 && t_max.is_finite()) {
        return Err(Error::Domain(format!("T = {t_max} must be positive")));
    }
    let xs = spec.constrained(alpha);
    let mut freq = Vec::with_capacity(xs.len());
    for &x in &xs {
        let l = x.ln();
        if spec.displayed_form {
            if l == 0.0 {
                return Err(Error::Domain("t/(2π log x) is undefined at x = 1".into()));
            }
            freq.push(1.0 / (TAU * l));
        } else {
            freq.push(l / TAU);
        }
    }
    let theta: Vec<f64> = (0..xs.len()).map(|i| spec.targets.get(i).copied().unwrap_or(0.0)).collect();
    let half = spec.delta / 2.0;
    let whole = spec.delta >= 1.0;
    let blocks = samples.div_ceil(BLOCK);
    let hits: usize = (0..blocks)
        .into_par_iter()
        .map(|b| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(b as u64);
            let n = BLOCK.min(samples - b * BLOCK);
            (0..n)
                .filter(|_| {
                    let t = t_max * rng.gen::<f64>();
                    whole || freq.iter().zip(&theta).all(|(w, th)| frac_dist(t * w - th) < half)
                })
                .count()
        })
        .sum();
    Ok(hits as f64 / samples as f64)
}

/// The limiting density δ^m, m the number of constrained points.
pub fn weyl_limit_density(alpha: &HurwitzParam, spec: &WeylTargetSpec) -> f64 {
    spec.delta.powi(spec.constrained(alpha).len() as i32)
}
