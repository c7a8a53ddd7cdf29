//! Adaptive Gauss–Kronrod (7/15) quadrature for complex-valued integrands.

use super::{c64, ComplexValue};
use crate::error::{Error, Result};

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_5,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_48,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_224,
    0.063_092_092_629_978_56,
    0.104_790_010_322_250_19,
    0.140_653_259_715_525_92,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_42,
    0.204_432_940_075_298_89,
    0.209_482_141_084_727_82,
];
const WG: [f64; 4] =
    [0.129_484_966_168_869_7, 0.279_705_391_489_276_64, 0.381_830_050_505_118_9, 0.417_959_183_673_469_4];

#[derive(Debug, Clone, Copy)]
pub struct QuadOptions {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_intervals: usize,
}

impl Default for QuadOptions {
    fn default() -> Self {
        QuadOptions { abs_tol: 1e-12, rel_tol: 1e-12, max_intervals: 4000 }
    }
}

#[derive(Debug, Clone, Copy)]
pub struct QuadResult {
    pub value: ComplexValue,
    pub error: f64,
    pub evals: usize,
}

struct Segment {
    a: f64,
    b: f64,
    value: ComplexValue,
    error: f64,
}

fn gk15<F>(f: &mut F, a: f64, b: f64) -> Result<Segment>
where
    F: FnMut(f64) -> Result<ComplexValue>,
{
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c)?;
    let mut kron = fc * WGK[7];
    let mut gauss = fc * WG[3];
    for j in 0..7 {
        let x = h * XGK[j];
        let s = f(c - x)? + f(c + x)?;
        kron += s * WGK[j];
        if j % 2 == 1 {
            gauss += s * WG[j / 2];
        }
    }
    let value = kron * h;
    let error = ((kron - gauss) * h).norm();
    Ok(Segment { a, b, value, error })
}

/// Integrates `f` over `[a, b]`, bisecting the worst segment until the
/// summed error estimate meets `max(abs_tol, rel_tol·|I|)`.
pub fn integrate<F>(mut f: F, a: f64, b: f64, opts: QuadOptions) -> Result<QuadResult>
where
    F: FnMut(f64) -> Result<ComplexValue>,
{
    if a == b {
        return Ok(QuadResult { value: c64(0.0, 0.0), error: 0.0, evals: 0 });
    }
    let mut segs = vec![gk15(&mut f, a, b)?];
    let mut evals = 15;
    loop {
        let total: ComplexValue = segs.iter().map(|s| s.value).sum();
        let err: f64 = segs.iter().map(|s| s.error).sum();
        if !(total.re.is_finite() && total.im.is_finite()) {
            return Err(Error::NonFinite("quadrature"));
        }
        if err <= opts.abs_tol.max(opts.rel_tol * total.norm()) {
            return Ok(QuadResult { value: total, error: err, evals });
        }
        if segs.len() >= opts.max_intervals {
            return Err(Error::Convergence(format!(
                "quadrature on [{a}, {b}] stalled at error {err:.3e} after {} segments",
                segs.len()
            )));
        }
        let (worst, _) = segs.iter().enumerate().max_by(|x, y| x.1.error.total_cmp(&y.1.error)).expect("non-empty");
        let s = segs.swap_remove(worst);
        let mid = 0.5 * (s.a + s.b);
        segs.push(gk15(&mut f, s.a, mid)?);
        segs.push(gk15(&mut f, mid, s.b)?);
        evals += 30;
    }
}

/// Integrates `f(z) dz` along the straight segment from `z0` to `z1`.
pub fn integrate_segment<F>(mut f: F, z0: ComplexValue, z1: ComplexValue, opts: QuadOptions) -> Result<QuadResult>
where
    F: FnMut(ComplexValue) -> Result<ComplexValue>,
{
    let dz = z1 - z0;
    let r = integrate(|tau| Ok(f(z0 + dz * tau)? * dz), 0.0, 1.0, opts)?;
    Ok(r)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn polynomial_is_exact() {
        let r = integrate(|x| Ok(c64(x.powi(5) - 2.0 * x, 0.0)), 0.0, 2.0, QuadOptions::default()).unwrap();
        assert!((r.value.re - (64.0 / 6.0 - 4.0)).abs() < 1e-13);
    }

    #[test]
    fn oscillatory_complex() {
        // ∫₀^{10} e^{i 7 x} dx
        let r = integrate(|x| Ok(c64(0.0, 7.0 * x).exp()), 0.0, 10.0, QuadOptions::default()).unwrap();
        let exact = (c64(0.0, 70.0).exp() - 1.0) / c64(0.0, 7.0);
        assert!((r.value - exact).norm() < 1e-12);
    }

    #[test]
    fn contour_segment() {
        // ∮ dz/z over the square with corners ±1±i equals 2πi
        let corners = [c64(1.0, -1.0), c64(1.0, 1.0), c64(-1.0, 1.0), c64(-1.0, -1.0)];
        let mut total = c64(0.0, 0.0);
        for k in 0..4 {
            let r =
                integrate_segment(|z| Ok(1.0 / z), corners[k], corners[(k + 1) % 4], QuadOptions::default()).unwrap();
            total += r.value;
        }
        assert!((total - c64(0.0, std::f64::consts::TAU)).norm() < 1e-12);
    }
}
