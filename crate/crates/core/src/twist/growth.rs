use serde::{Deserialize, Serialize};

use super::TwistFunction;
use crate::error::{Error, Result};
use crate::numcore::{c64, ComplexValue};

/// Fewest checkpoints used for the fit.
pub const MIN_CHECKPOINTS: usize = 12;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GrowthPoint {
    pub n: u64,
    /// max |S(m)| over the window ending at n, S(m) = Σ_{k≤m} a(k + α).
    pub partial_sum: f64,
}

/// Least-squares fit of log S(N) ≈ log c + β log N.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GrowthReport {
    pub checkpoints: Vec<GrowthPoint>,
    pub exponent: f64,
    pub log_constant: f64,
}

/// The [`MIN_CHECKPOINTS`] halvings n_max, n_max/2, …, n_max/2^11; when
/// n_max is too small for that, that many log-spaced integers on [1, n_max].
fn checkpoints(n_max: u64) -> Vec<u64> {
    let k = MIN_CHECKPOINTS as u32;
    if n_max >> (k - 1) >= 1 {
        return (0..k).rev().map(|i| n_max >> i).collect();
    }
    let top = (n_max as f64).ln();
    let mut pts = Vec::new();
    let mut m = MIN_CHECKPOINTS;
    while pts.len() < MIN_CHECKPOINTS {
        pts = (0..m).map(|i| (top * i as f64 / (m - 1) as f64).exp().round() as u64).collect();
        pts.dedup();
        m += 1;
    }
    pts
}

/// Growth diagnostics for the partial sums of any coefficient sequence.
pub fn fit_partial_sums<F>(mut coeff: F, n_max: u64, window: u64) -> Result<GrowthReport>
where
    F: FnMut(u64) -> Result<ComplexValue>,
{
    if n_max < 100 {
        return Err(Error::Domain(format!("N_max = {n_max} must be at least 100")));
    }
    let window = window.max(1);
    let marks = checkpoints(n_max);
    let mut out = Vec::with_capacity(marks.len());
    let mut sum = c64(0.0, 0.0);
    // running max of |S(m)| restricted to the window before each mark
    let mut next = marks.iter().peekable();
    let mut best = 0.0f64;
    for m in 0..=n_max {
        sum += coeff(m)?;
        let Some(&&mark) = next.peek() else { break };
        if m + window > mark {
            best = best.max(sum.norm());
        }
        if m == mark {
            out.push(GrowthPoint { n: mark, partial_sum: best });
            best = 0.0;
            next.next();
        }
    }
    let pts: Vec<(f64, f64)> =
        out.iter().filter(|p| p.partial_sum > 0.0).map(|p| ((p.n as f64).ln(), p.partial_sum.ln())).collect();
    if pts.len() < 2 {
        return Err(Error::Convergence("fewer than two nonzero checkpoints".into()));
    }
    let k = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / k;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / k;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let exponent = sxy / sxx;
    Ok(GrowthReport { checkpoints: out, exponent, log_constant: my - exponent * mx })
}

/// Fits S(N) = |Σ_{k≤N} a(k + α)| ≈ c·N^β at geometric checkpoints, each
/// taken as the largest |S| over the `window` indices ending there.
pub fn partial_sum_growth(a: &TwistFunction, n_max: u64, window: u64) -> Result<GrowthReport> {
    fit_partial_sums(|k| a.value(k), n_max, window)
}
