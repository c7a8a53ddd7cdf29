use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::smoothed::{zeta_eval, EvalPolicy};
use super::{check_arity, MultiPoint, ParamVector};
use crate::error::{Error, Result};
use crate::hurwitz::hurwitz_zeta;
use crate::numcore::quad::{integrate, QuadOptions};
use crate::numcore::{beta, c64, ensure_finite, ComplexValue, TAU};

/// Geometry and quadrature settings of the Mellin–Barnes contour
/// Γ = I₁ ∪ I₂ ∪ I₃ ∪ I₄ ∪ I₅.
///
/// I₁ runs up the line Re z = −L from −i∞ to −ih, I₂ right along
/// Im z = −h to Re z = L, I₃ up to +ih, I₄ back left to Re z = −L and I₅ up
/// to +i∞. The detour encloses the poles at z = 1, 0, −1, … that lie in
/// (−L, L).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct ContourSpec {
    /// L; must exceed 1 so that the pole of ζ(z; ·) at z = 1 is enclosed.
    /// On Re z = −L the factors ζ(z; ·) and B(z, s_n) are of size
    /// (|Im z|/2π)^{±L}, so larger L costs accuracy to cancellation.
    pub half_width: f64,
    /// h; `None` uses T^{ξ/2} with T the largest imaginary part.
    pub height: Option<f64>,
    pub xi: f64,
    pub rel_tol: f64,
    pub abs_tol: f64,
    /// Infinite legs stop once a chunk contributes less than this
    /// (relative to max(1, |leg|)).
    pub tail_tol: f64,
    /// Length of one chunk of an infinite leg.
    pub chunk: f64,
    pub max_chunks: usize,
    /// Used for the inner ζ_{n−1} once the recursion depth is spent.
    pub inner_policy: EvalPolicy,
}

impl Default for ContourSpec {
    fn default() -> Self {
        ContourSpec {
            half_width: 1.5,
            height: None,
            xi: 0.3,
            rel_tol: 1e-11,
            abs_tol: 1e-13,
            tail_tol: 1e-16,
            chunk: 4.0,
            max_chunks: 400,
            inner_policy: EvalPolicy::default(),
        }
    }
}

/// ζ_n(s; α) by the Mellin–Barnes recursion
///
/// ζ_n(s; α) = (1/2πi) ∫_Γ B(z, s_n) ζ(z; 1+α_n−α_{n−1})
///             ζ_{n−1}(s₁, …, s_{n−2}, s_{n−1}+s_n−z; α₁, …, α_{n−1}) dz
///
/// with B(z, s) = Γ(z)Γ(s−z)/Γ(s). The one-variable base case is
/// [`hurwitz_zeta`]. `depth` is the number of recursion levels evaluated by
/// contour integrals; below that the inner ζ_{n−1} comes from
/// [`zeta_eval`].
pub fn zeta_mb(s: &MultiPoint, alpha: &ParamVector, contour: &ContourSpec, depth: usize) -> Result<ComplexValue> {
    let n = check_arity(s, alpha)?;
    if n < 2 {
        return Err(Error::Arity("the Mellin–Barnes recursion needs n ≥ 2".into()));
    }
    if depth == 0 {
        return Err(Error::Domain("recursion depth must be at least 1".into()));
    }
    if !(contour.half_width > 1.0) {
        return Err(Error::Contour(format!("half-width {} must exceed 1", contour.half_width)));
    }
    let last = s.coords()[n - 1];
    if last.im < 0.0 {
        // ζ_n(s̄) = conj ζ_n(s)
        return Ok(mb(&s.conj(), &alpha.values(), contour, depth)?.conj());
    }
    mb(s, &alpha.values(), contour, depth)
}

fn mb(s: &MultiPoint, alpha: &[f64], spec: &ContourSpec, depth: usize) -> Result<ComplexValue> {
    let c = s.coords();
    let n = c.len();
    if n == 1 {
        return hurwitz_zeta(c[0], alpha[0]);
    }
    let shift = 1.0 + alpha[n - 1] - alpha[n - 2];
    if !(shift > 0.0) {
        return Err(Error::Contour(format!("parameter 1 + α_n − α_(n−1) = {shift} is not positive")));
    }
    let sn = c[n - 1];
    let merged = c[n - 2] + sn;
    let l = spec.half_width;
    let t = c.iter().map(|z| z.im.abs()).fold(0.0, f64::max);
    let h = spec.height.unwrap_or_else(|| t.max(1.0).powf(spec.xi / 2.0));
    if !(h > 0.0 && sn.im > h && merged.im > h) {
        return Err(Error::Contour(format!(
            "height {h} must lie below Im s_n = {} and Im(s_(n−1)+s_n) = {}",
            sn.im, merged.im
        )));
    }
    let tail_sum: f64 = c[..n].iter().map(|z| z.re).sum::<f64>() - (n - 1) as f64;
    if sn.re <= -l || merged.re - 1.0 <= -l || tail_sum <= -l {
        return Err(Error::Contour(format!("poles of the right family cross Re z = −{l}")));
    }
    let prefix = &c[..n - 2];
    let inner_alpha = &alpha[..n - 1];
    let integrand = |z: ComplexValue| -> Result<ComplexValue> {
        let k = beta(z, sn)?;
        let z1 = hurwitz_zeta(z, shift)?;
        let mut u = prefix.to_vec();
        u.push(merged - z);
        let inner = if u.len() == 1 {
            hurwitz_zeta(u[0], inner_alpha[0])?
        } else {
            let p = MultiPoint::new(u)?;
            if depth > 1 {
                mb(&p, inner_alpha, spec, depth - 1)?
            } else {
                let a = ParamVector::from_values(inner_alpha)?;
                zeta_eval(&p, &a, spec.xi, &spec.inner_policy)?.value
            }
        };
        Ok(k * z1 * inner)
    };
    let opts = QuadOptions { abs_tol: spec.abs_tol, rel_tol: spec.rel_tol, max_intervals: 4000 };
    let i = c64(0.0, 1.0);
    let on_left = |y: f64| c64(-l, y);
    let legs: Vec<Result<ComplexValue>> = (0..5usize)
        .into_par_iter()
        .map(|leg| match leg {
            0 => infinite_leg(&integrand, &on_left, -h, -1.0, None, spec, opts).map(|v| -v * i),
            1 => integrate(|x| integrand(c64(x, -h)), -l, l, opts).map(|r| r.value),
            2 => integrate(|y| Ok(integrand(c64(l, y))? * i), -h, h, opts).map(|r| r.value),
            3 => integrate(|x| integrand(c64(x, h)), -l, l, opts).map(|r| -r.value),
            _ => infinite_leg(&integrand, &on_left, h, 1.0, Some(sn.im), spec, opts).map(|v| v * i),
        })
        .collect();
    let mut total = c64(0.0, 0.0);
    for v in legs {
        total += v?;
    }
    ensure_finite(total / c64(0.0, TAU), "zeta_mb")
}

/// ∫ f(path(y)) dy from `start` towards ±∞ (`dir`), in chunks until the
/// contribution is negligible. Tail checks only begin past `quiet_after`.
/// The result is oriented from `start` outwards.
fn infinite_leg<F, P>(
    f: &F,
    path: &P,
    start: f64,
    dir: f64,
    quiet_after: Option<f64>,
    spec: &ContourSpec,
    opts: QuadOptions,
) -> Result<ComplexValue>
where
    F: Fn(ComplexValue) -> Result<ComplexValue> + Sync,
    P: Fn(f64) -> ComplexValue + Sync,
{
    let mut acc = c64(0.0, 0.0);
    let mut quiet = 0;
    for k in 0..spec.max_chunks {
        let a = start + dir * spec.chunk * k as f64;
        let b = a + dir * spec.chunk;
        let part = integrate(|y| f(path(y)), a.min(b), a.max(b), opts)?.value * dir;
        acc += part;
        let past = quiet_after.is_none_or(|q| dir * a > q.abs());
        if past && part.norm() < spec.tail_tol * acc.norm().max(1.0) {
            quiet += 1;
            if quiet == 2 {
                return Ok(acc);
            }
        } else {
            quiet = 0;
        }
    }
    Err(Error::Convergence(format!("infinite contour leg did not settle in {} chunks", spec.max_chunks)))
}
