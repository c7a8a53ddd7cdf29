use super::{check_arity, MultiPoint, ParamVector};
use crate::error::{Error, Result};
use crate::hurwitz::hurwitz_zeta;
use crate::numcore::{c64, ensure_finite, pow_neg, ComplexValue};

/// Σ_{0≤k₁<…<k_n≤N} Π_j cols[j][k_j], with N + 1 the common column length.
///
/// Runs in O(nN) with suffix sums: W_n = b_n and
/// W_j(k) = b_j(k)·Σ_{k'>k} W_{j+1}(k'). Accumulation runs from large k
/// down, so for decaying columns the small terms are added first.
pub fn nested_sum(cols: &[Vec<ComplexValue>]) -> ComplexValue {
    let n = cols.len();
    if n == 0 {
        return c64(1.0, 0.0);
    }
    let len = cols[0].len();
    let mut w = cols[n - 1].clone();
    for j in (0..n - 1).rev() {
        let mut next = vec![c64(0.0, 0.0); len];
        let mut suffix = c64(0.0, 0.0);
        for k in (0..len).rev() {
            next[k] = cols[j][k] * suffix;
            suffix += w[k];
        }
        w = next;
    }
    w.iter().rev().sum()
}

pub(crate) fn power_columns(s: &MultiPoint, alpha: &ParamVector, n_max: usize) -> Vec<Vec<ComplexValue>> {
    s.coords()
        .iter()
        .zip(alpha.values())
        .map(|(&sj, aj)| (0..=n_max).map(|k| pow_neg(k as f64 + aj, sj)).collect())
        .collect()
}

/// ζ_n^{[N]}(s; α) = Σ_{0≤k₁<…<k_n≤N} Π (k_j+α_j)^{−s_j}.
pub fn zeta_trunc(s: &MultiPoint, alpha: &ParamVector, n_max: usize) -> Result<ComplexValue> {
    check_arity(s, alpha)?;
    let cols = power_columns(s, alpha, n_max);
    ensure_finite(nested_sum(&cols), "zeta_trunc")
}

fn symmetric(n: usize, p: [ComplexValue; 3]) -> Result<ComplexValue> {
    let [s1, s2, s3] = p;
    match n {
        2 => Ok((s1 * s1 - s2) / 2.0),
        3 => Ok((s1 * s1 * s1 - s1 * s2 * 3.0 + s3 * 2.0) / 6.0),
        _ => Err(Error::Arity(format!("power-sum identity for n = {n}; only 2 and 3 are available"))),
    }
}

/// ζ_n^{[N]}((s,…,s); (α,…,α)) through the power sums
/// S_m = Σ_{k≤N} (k+α)^{−ms}: (S₁²−S₂)/2 for n = 2 and
/// (S₁³−3S₁S₂+2S₃)/6 for n = 3.
pub fn zeta_diag_powersum(s: ComplexValue, alpha: f64, n: usize, n_max: usize) -> Result<ComplexValue> {
    if !(2..=3).contains(&n) {
        return symmetric(n, [c64(0.0, 0.0); 3]);
    }
    let mut p = [c64(0.0, 0.0); 3];
    for k in (0..=n_max).rev() {
        let x = pow_neg(k as f64 + alpha, s);
        let mut xm = x;
        for pm in p.iter_mut().take(n) {
            *pm += xm;
            xm *= x;
        }
    }
    ensure_finite(symmetric(n, p)?, "zeta_diag_powersum")
}

/// ζ_n((s,…,s); (α,…,α)) through ζ(ms, α) in place of S_m. Valid wherever
/// the Hurwitz values are, including the strip.
pub fn zeta_diag(s: ComplexValue, alpha: f64, n: usize) -> Result<ComplexValue> {
    if !(2..=3).contains(&n) {
        return symmetric(n, [c64(0.0, 0.0); 3]);
    }
    let mut p = [c64(0.0, 0.0); 3];
    for (m, pm) in p.iter_mut().enumerate().take(n) {
        *pm = hurwitz_zeta(s * (m + 1) as f64, alpha)?;
    }
    ensure_finite(symmetric(n, p)?, "zeta_diag")
}
