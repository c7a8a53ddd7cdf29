use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::EvalSettings;
use crate::error::{Error, Result};
use crate::hurwitz::hurwitz_zeta;
use crate::multizeta::{zeta_smoothed_with_budget, CompactBox, MultiPoint, ParamVector};
use crate::numcore::{c64, ComplexValue, TAU};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct ZeroOptions {
    /// Grid points per coordinate along the real and imaginary axes.
    pub grid: (usize, usize),
    /// A refined point is kept when its residual is below this.
    pub refine_tol: f64,
    /// Grid minima above this are not refined.
    pub seed_threshold: f64,
    pub max_iterations: usize,
    /// Cap on the number of grid points.
    pub max_points: usize,
    pub eval: EvalSettings,
}

impl Default for ZeroOptions {
    fn default() -> Self {
        ZeroOptions {
            grid: (21, 2001),
            refine_tol: 1e-8,
            seed_threshold: 0.5,
            max_iterations: 60,
            max_points: 4_000_000,
            eval: EvalSettings::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ZeroRecord {
    pub location: MultiPoint,
    pub residual: f64,
    /// Winding number of the last coordinate's slice around the zero.
    pub winding: i64,
    /// The same on a circle of 1.5 times the radius.
    pub winding_check: i64,
    pub radius: f64,
}

/// The function whose zeros are sought: ζ(s, α) by Euler–Maclaurin for one
/// variable, otherwise the smoothed sum at the box-wide scale T, which is
/// analytic in each coordinate.
struct Evaluator<'a> {
    alpha: &'a ParamVector,
    t_scale: f64,
    eval: EvalSettings,
}

impl Evaluator<'_> {
    fn at(&self, s: &[ComplexValue]) -> Result<ComplexValue> {
        if s.len() == 1 {
            hurwitz_zeta(s[0], self.alpha.values()[0])
        } else {
            let p = MultiPoint::new(s.to_vec())?;
            zeta_smoothed_with_budget(
                &p,
                self.alpha,
                self.t_scale,
                &self.eval.policy.cutoff,
                self.eval.policy.cost_budget,
            )
        }
    }
}

fn inside(bx: &CompactBox, s: &[ComplexValue]) -> bool {
    bx.rects.iter().zip(s).all(|(r, z)| r.re.0 <= z.re && z.re <= r.re.1 && r.im.0 <= z.im && z.im <= r.im.1)
}

/// Damped Newton in one coordinate at a time, with the derivative from a
/// central difference.
fn refine(
    f: &Evaluator,
    bx: &CompactBox,
    start: Vec<ComplexValue>,
    opts: &ZeroOptions,
) -> Result<Option<(Vec<ComplexValue>, f64)>> {
    let mut s = start;
    let mut val = f.at(&s)?;
    let target = opts.refine_tol * 1e-3;
    for _ in 0..opts.max_iterations {
        if val.norm() < target {
            break;
        }
        let mut moved = false;
        for j in 0..s.len() {
            let h = 1e-6 * (1.0 + s[j].norm());
            let mut sp = s.clone();
            let mut sm = s.clone();
            sp[j] += h;
            sm[j] -= h;
            let d = (f.at(&sp)? - f.at(&sm)?) / (2.0 * h);
            if d.norm() == 0.0 {
                continue;
            }
            let step = val / d;
            let mut lambda = 1.0;
            while lambda > 1e-4 {
                let mut trial = s.clone();
                trial[j] -= step * lambda;
                let v = f.at(&trial)?;
                if v.norm() < val.norm() {
                    moved |= trial[j] != s[j];
                    s = trial;
                    val = v;
                    break;
                }
                lambda *= 0.5;
            }
        }
        if !moved || !inside(bx, &s) {
            break;
        }
    }
    Ok((inside(bx, &s) && val.norm() < opts.refine_tol).then(|| (s, val.norm())))
}

/// Winding number of z ↦ f(…, z) around the circle |z − s_last| = r,
/// sampled adaptively so that no step turns by more than π/4.
fn winding(f: &Evaluator, s: &[ComplexValue], r: f64) -> Result<i64> {
    let n = s.len();
    let at = |theta: f64| {
        let mut p = s.to_vec();
        p[n - 1] += c64(0.0, theta).exp() * r;
        f.at(&p)
    };
    let mut total = 0.0;
    let mut stack = Vec::new();
    let k = 64;
    let mut prev = at(0.0)?;
    for i in 0..k {
        let (a, b) = (TAU * i as f64 / k as f64, TAU * (i + 1) as f64 / k as f64);
        let next = at(b)?;
        stack.push((a, b, prev, next));
        prev = next;
        while let Some((a, b, fa, fb)) = stack.pop() {
            let turn = (fb / fa).arg();
            if turn.abs() > std::f64::consts::FRAC_PI_4 && b - a > 1e-9 {
                let m = 0.5 * (a + b);
                let fm = at(m)?;
                stack.push((m, b, fm, fb));
                stack.push((a, m, fa, fm));
            } else {
                total += turn;
            }
        }
    }
    Ok((total / TAU).round() as i64)
}

/// Grid minima of |ζ_n| below the seed threshold, refined by damped Newton
/// and certified by the winding number of the last coordinate on a small
/// circle. Zeros closer than half a grid cell are merged, keeping the
/// smallest residual.
pub fn find_zeros(alpha: &ParamVector, bx: &CompactBox, opts: &ZeroOptions) -> Result<Vec<ZeroRecord>> {
    let n = alpha.arity();
    if bx.arity() != n {
        return Err(Error::Arity(format!("box arity {} for {n} parameters", bx.arity())));
    }
    let (gr, gi) = opts.grid;
    if gr < 2 || gi < 2 {
        return Err(Error::Domain("at least two grid points per axis are required".into()));
    }
    let per = gr * gi;
    let total = (per as f64).powi(n as i32);
    if total > opts.max_points as f64 {
        return Err(Error::Budget(format!("{total:.3e} grid points exceed the cap {}", opts.max_points)));
    }
    let (im_lo, im_hi) = bx.im_range();
    let t_scale = (opts.eval.policy.scale * im_hi.abs().max(im_lo.abs())).max(1.0);
    if n > 1 && !(im_lo > 0.0 && im_lo >= t_scale.powf(opts.eval.xi)) {
        return Err(Error::Range(format!(
            "imaginary parts from {im_lo} must be at least T^xi = {} for T = {t_scale}",
            t_scale.powf(opts.eval.xi)
        )));
    }
    let f = Evaluator { alpha, t_scale, eval: opts.eval };

    let axes: Vec<Vec<ComplexValue>> = bx
        .rects
        .iter()
        .map(|r| {
            let lin = |(a, b): (f64, f64), i: usize, m: usize| a + (b - a) * i as f64 / (m - 1) as f64;
            (0..gi).flat_map(|i| (0..gr).map(move |j| c64(lin(r.re, j, gr), lin(r.im, i, gi)))).collect()
        })
        .collect();
    let total = total as usize;
    let point = |mut idx: usize| -> Vec<ComplexValue> {
        let mut s = vec![c64(0.0, 0.0); n];
        for j in (0..n).rev() {
            s[j] = axes[j][idx % per];
            idx /= per;
        }
        s
    };
    let values: Vec<f64> = (0..total)
        .into_par_iter()
        .map(|i| match f.at(&point(i)) {
            Err(Error::Pole(_)) => Ok(f64::INFINITY),
            v => v.map(|z| z.norm()),
        })
        .collect::<Result<_>>()?;

    // discrete local minima over the 3^{2n} − 1 neighbours
    let coords = |mut idx: usize| -> Vec<(i64, i64)> {
        let mut c = vec![(0, 0); n];
        for j in (0..n).rev() {
            let k = idx % per;
            c[j] = ((k % gr) as i64, (k / gr) as i64);
            idx /= per;
        }
        c
    };
    let index = |c: &[(i64, i64)]| -> Option<usize> {
        let mut idx = 0usize;
        for &(a, b) in c {
            if a < 0 || b < 0 || a >= gr as i64 || b >= gi as i64 {
                return None;
            }
            idx = idx * per + b as usize * gr + a as usize;
        }
        Some(idx)
    };
    let seeds: Vec<usize> = (0..total)
        .into_par_iter()
        .filter(|&i| {
            let v = values[i];
            if !(v < opts.seed_threshold) {
                return false;
            }
            let c = coords(i);
            let offsets = 9usize.pow(n as u32);
            (0..offsets).all(|mut o| {
                let mut d = c.clone();
                for dj in d.iter_mut() {
                    dj.0 += (o % 3) as i64 - 1;
                    dj.1 += ((o / 3) % 3) as i64 - 1;
                    o /= 9;
                }
                index(&d).is_none_or(|k| k == i || values[k] >= v)
            })
        })
        .collect();

    let cell = bx
        .rects
        .iter()
        .map(|r| ((r.re.1 - r.re.0) / (gr - 1) as f64).min((r.im.1 - r.im.0) / (gi - 1) as f64))
        .fold(f64::INFINITY, f64::min);
    let refined: Vec<(Vec<ComplexValue>, f64)> = seeds
        .into_par_iter()
        .map(|i| refine(&f, bx, point(i), opts))
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .flatten()
        .collect();

    let mut kept: Vec<(Vec<ComplexValue>, f64)> = Vec::new();
    for (s, r) in refined {
        let near = kept.iter().position(|(k, _)| k.iter().zip(&s).all(|(a, b)| (a - b).norm() < 0.5 * cell));
        match near {
            Some(p) if kept[p].1 <= r => {}
            Some(p) => kept[p] = (s, r),
            None => kept.push((s, r)),
        }
    }
    kept.sort_by(|a, b| {
        let key = |s: &[ComplexValue]| s.iter().flat_map(|z| [z.im, z.re]).collect::<Vec<f64>>();
        key(&a.0).partial_cmp(&key(&b.0)).unwrap_or(std::cmp::Ordering::Equal)
    });
    let radius = 0.25 * cell;
    kept.into_iter()
        .map(|(s, residual)| {
            Ok(ZeroRecord {
                winding: winding(&f, &s, radius)?,
                winding_check: winding(&f, &s, 1.5 * radius)?,
                location: MultiPoint::new(s)?,
                residual,
                radius,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::multizeta::Rect;

    fn one(re: (f64, f64), im: (f64, f64)) -> CompactBox {
        CompactBox::rectangle(vec![Rect { re, im }], 2).unwrap()
    }

    #[test]
    fn zero_free_region() {
        let alpha = ParamVector::from_values(&[1.0]).unwrap();
        let opts = ZeroOptions { grid: (7, 401), ..Default::default() };
        assert!(find_zeros(&alpha, &one((1.5, 1.8), (0.5, 40.0)), &opts).unwrap().is_empty());
    }

    #[test]
    fn riemann_zeros_on_the_line() {
        let alpha = ParamVector::from_values(&[1.0]).unwrap();
        let opts = ZeroOptions { grid: (5, 401), ..Default::default() };
        let z = find_zeros(&alpha, &one((0.4, 0.6), (10.0, 30.0)), &opts).unwrap();
        let ts: Vec<f64> = z.iter().map(|r| r.location.coords()[0].im).collect();
        let known = [14.134_725_141_734_693, 21.022_039_638_771_555, 25.010_857_580_145_69];
        assert_eq!(ts.len(), 3, "{ts:?}");
        for (t, k) in ts.iter().zip(known) {
            assert!((t - k).abs() < 1e-8);
        }
        for r in &z {
            assert!((r.location.coords()[0].re - 0.5).abs() < 1e-8);
            assert!(r.residual < opts.refine_tol);
            assert_eq!((r.winding, r.winding_check), (1, 1));
        }
    }

    #[test]
    fn winding_counts_multiplicity() {
        let alpha = ParamVector::from_values(&[1.0]).unwrap();
        let f = Evaluator { alpha: &alpha, t_scale: 1.0, eval: EvalSettings::default() };
        let rho = c64(0.5, 14.134_725_141_734_693);
        assert_eq!(winding(&f, &[rho], 0.1).unwrap(), 1);
        assert_eq!(winding(&f, &[rho + 1.0], 0.1).unwrap(), 0);
        // the pole at 1 counts −1
        assert_eq!(winding(&f, &[c64(1.0, 0.0)], 0.2).unwrap(), -1);
    }

    #[test]
    fn budget_and_arity() {
        let alpha = ParamVector::from_values(&[1.0, 1.0]).unwrap();
        let bx = CompactBox::strip(&[(0.6, 0.9), (0.6, 0.9)], &[1.0, 1.0], 2).unwrap();
        let opts = ZeroOptions::default();
        assert!(matches!(find_zeros(&alpha, &bx, &opts), Err(Error::Budget(_))));
        assert!(matches!(find_zeros(&ParamVector::from_values(&[1.0]).unwrap(), &bx, &opts), Err(Error::Arity(_))));
        let small = ZeroOptions { grid: (3, 3), ..Default::default() };
        assert!(matches!(find_zeros(&alpha, &bx, &small), Err(Error::Range(_))));
    }
}
