use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::EvalSettings;
use crate::error::{Error, Result};
use crate::multizeta::{zeta_eval, MultiPoint, ParamVector};
use crate::numcore::c64;

/// Cells drawn from one independently seeded stream.
const BLOCK: usize = 4096;

/// Largest arity accepted by [`mean_square`].
pub const MAX_MOMENT_ARITY: usize = 3;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MeanSquareReport {
    /// Estimate of ∫ |ζ_n(1/2 + it; α)|² dt over [T^ξ, T]^n.
    pub integral_estimate: f64,
    /// Standard error of the estimate.
    pub std_error: f64,
    /// integral_estimate / ((T log T)^n / n!).
    pub ratio_to_asymptotic: f64,
    pub samples: usize,
    pub strata_per_axis: usize,
}

/// Stratified Monte Carlo estimate of the mean square on the critical
/// hyperplane. The cube is cut into k^n cells, k = ⌊samples^{1/n}⌋, and the
/// samples are spread over the cells as evenly as possible, each uniform in
/// its cell; each cell contributes its volume times its sample mean.
pub fn mean_square(
    alpha: &ParamVector,
    big_t: f64,
    eval: &EvalSettings,
    samples: usize,
    seed: u64,
) -> Result<MeanSquareReport> {
    let n = alpha.arity();
    if n > MAX_MOMENT_ARITY {
        return Err(Error::Budget(format!("arity {n} exceeds {MAX_MOMENT_ARITY}")));
    }
    if samples == 0 {
        return Err(Error::Budget("no samples".into()));
    }
    if !(big_t >= 10.0 && big_t.is_finite()) {
        return Err(Error::Domain(format!("T = {big_t} must be at least 10")));
    }
    let lo = big_t.powf(eval.xi);
    let width = big_t - lo;
    let mut k = (samples as f64).powf(1.0 / n as f64).floor() as usize;
    while k.pow(n as u32) > samples {
        k -= 1;
    }
    while (k + 1).pow(n as u32) <= samples {
        k += 1;
    }
    let cells = k.pow(n as u32);
    let (per, extra) = (samples / cells, samples % cells);
    let h = width / k as f64;
    let cell_volume = h.powi(n as i32);

    let blocks = cells.div_ceil(BLOCK);
    // per block: Σ over cells of (estimate, variance of the estimate)
    let parts: Vec<(f64, f64)> = (0..blocks)
        .into_par_iter()
        .map(|b| -> Result<(f64, f64)> {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(b as u64);
            let (mut est, mut var) = (0.0, 0.0);
            // single-sample cells are paired with their neighbour (collapsed strata)
            let mut pending: Option<f64> = None;
            let mut t = vec![0.0; n];
            let mut s = vec![c64(0.5, 0.0); n];
            for cell in b * BLOCK..((b + 1) * BLOCK).min(cells) {
                let count = per + usize::from(cell < extra);
                let (mut sum, mut sum2) = (0.0, 0.0);
                for _ in 0..count {
                    let mut rest = cell;
                    for j in (0..n).rev() {
                        let idx = rest % k;
                        rest /= k;
                        t[j] = lo + h * (idx as f64 + rng.gen::<f64>());
                        s[j] = c64(0.5, t[j]);
                    }
                    let z = zeta_eval(&MultiPoint::new(s.clone())?, alpha, eval.xi, &eval.policy)?.value;
                    let f = z.norm_sqr();
                    sum += f;
                    sum2 += f * f;
                }
                let c = count as f64;
                let mean = sum / c;
                est += cell_volume * mean;
                if count > 1 {
                    let v = (sum2 / c - mean * mean).max(0.0) * c / (c - 1.0);
                    var += cell_volume * cell_volume * v / c;
                } else if let Some(prev) = pending.take() {
                    var += cell_volume * cell_volume * (mean - prev).powi(2);
                } else {
                    pending = Some(mean);
                }
            }
            Ok((est, var))
        })
        .collect::<Result<_>>()?;
    let integral_estimate: f64 = parts.iter().map(|p| p.0).sum();
    let std_error = parts.iter().map(|p| p.1).sum::<f64>().sqrt();
    let main = (big_t * big_t.ln()).powi(n as i32) / (1..=n).product::<usize>() as f64;
    Ok(MeanSquareReport {
        integral_estimate,
        std_error,
        ratio_to_asymptotic: integral_estimate / main,
        samples,
        strata_per_axis: k,
    })
}
