use serde::{Deserialize, Serialize};

use super::{check_arity, MultiPoint, ParamVector};
use crate::error::{Error, Result};
use crate::hurwitz::{hurwitz_afe, AfeOptions};
use crate::numcore::{c64, ensure_finite, pow_neg, ComplexValue, SmoothCutoff};

/// Default cap on the work estimate of [`zeta_smoothed`].
pub const DEFAULT_COST_BUDGET: f64 = 1e8;

/// Work estimate of the gap recursion: powers for every reachable index,
/// plateau prefix sums, and the bridge convolution for each inner level.
fn cost_estimate(n: usize, t: f64, cutoff: &SmoothCutoff) -> f64 {
    let st = cutoff.support_end * t;
    let bridge = (cutoff.support_end - cutoff.plateau_end) * t;
    let nf = n as f64;
    nf * (nf + 1.0) / 2.0 * st + (nf - 1.0) * nf / 2.0 * st * (bridge + 2.0)
}

/// ζ_n^{[φ,T]}(s; α) = Σ_{0=k₀≤k₁<…<k_n} Π (k_j+α_j)^{−s_j} φ((k_j−k_{j−1})/T)
/// with the default cost budget.
pub fn zeta_smoothed(s: &MultiPoint, alpha: &ParamVector, t_scale: f64, cutoff: &SmoothCutoff) -> Result<ComplexValue> {
    zeta_smoothed_with_budget(s, alpha, t_scale, cutoff, DEFAULT_COST_BUDGET)
}

/// As [`zeta_smoothed`], failing with a cost error when the work estimate
/// exceeds `budget`.
///
/// Evaluated from the innermost gap outwards:
/// W_n(k) = b_n(k), W_j(k) = b_j(k) Σ_{g≥1} φ(g/T) W_{j+1}(k+g), and the
/// result is Σ_k φ(k/T) W₁(k). The plateau part of each inner sum comes from
/// suffix sums, so only the bridge g ∈ (2T, 3T) is summed term by term.
pub fn zeta_smoothed_with_budget(
    s: &MultiPoint,
    alpha: &ParamVector,
    t_scale: f64,
    cutoff: &SmoothCutoff,
    budget: f64,
) -> Result<ComplexValue> {
    let n = check_arity(s, alpha)?;
    if !(t_scale >= 1.0) {
        return Err(Error::Domain(format!("smoothing scale T = {t_scale} must be ≥ 1")));
    }
    let cost = cost_estimate(n, t_scale, cutoff);
    if cost > budget {
        return Err(Error::Cost { cost, budget });
    }
    let alphas = alpha.values();
    // gaps g with φ(g/T) = 1 are g ≤ plateau; φ vanishes from g ≥ support
    let plateau = (cutoff.plateau_end * t_scale).floor() as usize;
    let support = (cutoff.support_end * t_scale).ceil() as usize;
    let weights: Vec<f64> = (0..=support).map(|g| cutoff.value(g as f64 / t_scale)).collect();
    // k_j ranges over [j−1, j·support)
    let len = |j: usize| j * support;

    let column = |j: usize| -> Vec<ComplexValue> {
        let sj = s.coords()[j - 1];
        let aj = alphas[j - 1];
        (0..len(j)).map(|k| pow_neg(k as f64 + aj, sj)).collect()
    };

    let mut w = column(n);
    for j in (1..n).rev() {
        let inner = &w;
        // suffix[k] = Σ_{k' ≥ k} inner[k']
        let mut suffix = vec![c64(0.0, 0.0); inner.len() + 1];
        for k in (0..inner.len()).rev() {
            suffix[k] = suffix[k + 1] + inner[k];
        }
        let at = |k: usize| suffix[k.min(inner.len())];
        let b = column(j);
        let mut next = vec![c64(0.0, 0.0); len(j)];
        for k in (j - 1)..len(j) {
            let mut acc = at(k + 1) - at(k + plateau + 1);
            for g in (plateau + 1)..support {
                let idx = k + g;
                if idx >= inner.len() {
                    break;
                }
                acc += inner[idx] * weights[g];
            }
            next[k] = b[k] * acc;
        }
        w = next;
    }
    let mut total = c64(0.0, 0.0);
    for k in (0..w.len()).rev() {
        let wt = if k < weights.len() { weights[k] } else { 0.0 };
        if wt != 0.0 {
            total += w[k] * wt;
        }
    }
    ensure_finite(total, "zeta_smoothed")
}

/// Settings of the weak approximate functional equation evaluator.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct EvalPolicy {
    /// Exponent A of the error bound B·T^{−A}; also bounds |Re s_j|.
    pub a: f64,
    /// Constant B of the error bound.
    pub b: f64,
    /// T = scale · max_j |Im s_j|.
    pub scale: f64,
    pub cutoff: SmoothCutoff,
    pub cost_budget: f64,
}

impl Default for EvalPolicy {
    fn default() -> Self {
        EvalPolicy {
            a: 2.0,
            b: DEFAULT_B,
            scale: 1.0,
            cutoff: SmoothCutoff::default(),
            cost_budget: DEFAULT_COST_BUDGET,
        }
    }
}

/// Calibrated at Re s_j = 1.5, n = 2, α = (1, 1), T ≤ 200 against the
/// Mellin–Barnes value: about twice the largest observed |error|·T^A.
pub const DEFAULT_B: f64 = 40.0;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EvalResult {
    pub value: ComplexValue,
    pub error_estimate: f64,
    /// The smoothing scale used.
    pub t_scale: f64,
}

/// ζ_n(s; α) by the smoothed sum at the scale T = scale·max Im s_j, valid
/// when every Im s_j lies in [T^ξ, T].
///
/// All imaginary parts must share one sign; a point with negative
/// imaginary parts is evaluated through ζ_n(s̄) = conj ζ_n(s).
pub fn zeta_eval(s: &MultiPoint, alpha: &ParamVector, xi: f64, policy: &EvalPolicy) -> Result<EvalResult> {
    let n = check_arity(s, alpha)?;
    if !(xi > 0.0 && xi < 1.0) {
        return Err(Error::Domain(format!("xi = {xi} must lie in (0, 1)")));
    }
    if !(policy.scale >= 1.0) {
        return Err(Error::Domain(format!("scale {} must be ≥ 1", policy.scale)));
    }
    let pos = s.coords().iter().all(|z| z.im > 0.0);
    let neg = s.coords().iter().all(|z| z.im < 0.0);
    if !pos && !neg {
        if s.coords().iter().any(|z| z.im == 0.0) {
            return Err(Error::Range("an imaginary part is zero".into()));
        }
        return Err(Error::Sign(format!("{:?}", s.coords().iter().map(|z| z.im).collect::<Vec<_>>())));
    }
    if let Some(z) = s.coords().iter().find(|z| z.re.abs() > policy.a) {
        return Err(Error::Range(format!("|Re s| = {} exceeds A = {}", z.re.abs(), policy.a)));
    }
    let point = if neg { s.conj() } else { s.clone() };
    let ims: Vec<f64> = point.coords().iter().map(|z| z.im).collect();
    let max_im = ims.iter().cloned().fold(0.0, f64::max);
    let min_im = ims.iter().cloned().fold(f64::INFINITY, f64::min);
    let t = (policy.scale * max_im).max(1.0);
    if min_im < t.powf(xi) {
        return Err(Error::Range(format!("Im s_j = {min_im} is below T^xi = {} for T = {t}", t.powf(xi))));
    }
    let value = if n == 1 {
        let opts = AfeOptions { re_bound: policy.a, cutoff: policy.cutoff };
        hurwitz_afe(point.coords()[0], alpha.values()[0], t, xi, &opts)?.value
    } else {
        zeta_smoothed_with_budget(&point, alpha, t, &policy.cutoff, policy.cost_budget)?
    };
    let value = if neg { value.conj() } else { value };
    Ok(EvalResult { value, error_estimate: policy.b * t.powf(-policy.a), t_scale: t })
}
