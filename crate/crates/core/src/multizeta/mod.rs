//! Multiple Hurwitz zeta-functions
//! ζ_n(s; α) = Σ_{0≤k₁<…<k_n} Π_j (k_j + α_j)^{−s_j}:
//! plain and smoothed truncations, the weak approximate functional
//! equation, the Mellin–Barnes recursion and the equal-parameter power-sum
//! identities.

mod mb;
mod smoothed;
mod trunc;

pub use mb::{zeta_mb, ContourSpec};
pub use smoothed::{zeta_eval, zeta_smoothed, zeta_smoothed_with_budget, EvalPolicy, EvalResult};
pub(crate) use trunc::power_columns;
pub use trunc::{nested_sum, zeta_diag, zeta_diag_powersum, zeta_trunc};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hurwitz::HurwitzParam;
use crate::numcore::{c64, is_finite, ComplexValue};

/// Largest supported number of variables.
pub const MAX_ARITY: usize = 8;

/// A point (s₁, …, s_n) ∈ ℂⁿ.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<ComplexValue>", into = "Vec<ComplexValue>")]
pub struct MultiPoint(Vec<ComplexValue>);

impl MultiPoint {
    pub fn new(coords: Vec<ComplexValue>) -> Result<Self> {
        if coords.is_empty() || coords.len() > MAX_ARITY {
            return Err(Error::Arity(format!("{} coordinates, expected 1..={MAX_ARITY}", coords.len())));
        }
        if !coords.iter().all(|z| is_finite(*z)) {
            return Err(Error::NonFinite("MultiPoint"));
        }
        Ok(MultiPoint(coords))
    }

    pub fn arity(&self) -> usize {
        self.0.len()
    }

    pub fn coords(&self) -> &[ComplexValue] {
        &self.0
    }

    /// s + i·t.
    pub fn shifted(&self, t: &[f64]) -> Result<Self> {
        if t.len() != self.arity() {
            return Err(Error::Arity(format!("shift of length {} for arity {}", t.len(), self.arity())));
        }
        MultiPoint::new(self.0.iter().zip(t).map(|(z, t)| z + c64(0.0, *t)).collect())
    }

    pub fn conj(&self) -> Self {
        MultiPoint(self.0.iter().map(|z| z.conj()).collect())
    }
}

impl TryFrom<Vec<ComplexValue>> for MultiPoint {
    type Error = Error;
    fn try_from(v: Vec<ComplexValue>) -> Result<Self> {
        MultiPoint::new(v)
    }
}

impl From<MultiPoint> for Vec<ComplexValue> {
    fn from(p: MultiPoint) -> Self {
        p.0
    }
}

/// The parameters (α₁, …, α_n).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ParamVector(pub Vec<HurwitzParam>);

impl ParamVector {
    pub fn new(entries: Vec<HurwitzParam>) -> Result<Self> {
        if entries.is_empty() || entries.len() > MAX_ARITY {
            return Err(Error::Arity(format!("{} parameters", entries.len())));
        }
        Ok(ParamVector(entries))
    }

    /// All entries tagged transcendental.
    pub fn from_values(values: &[f64]) -> Result<Self> {
        ParamVector::new(values.iter().map(|&a| HurwitzParam::transcendental(a)).collect::<Result<_>>()?)
    }

    pub fn arity(&self) -> usize {
        self.0.len()
    }

    pub fn values(&self) -> Vec<f64> {
        self.0.iter().map(|p| p.value()).collect()
    }

    pub fn entries(&self) -> &[HurwitzParam] {
        &self.0
    }
}

pub(crate) fn check_arity(s: &MultiPoint, alpha: &ParamVector) -> Result<usize> {
    if s.arity() != alpha.arity() {
        return Err(Error::Arity(format!("point has {} coordinates, parameters {}", s.arity(), alpha.arity())));
    }
    Ok(s.arity())
}

/// A closed rectangle in one complex coordinate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Rect {
    pub re: (f64, f64),
    pub im: (f64, f64),
}

impl Rect {
    pub fn centered(center: ComplexValue, half_width: f64) -> Self {
        Rect {
            re: (center.re - half_width, center.re + half_width),
            im: (center.im - half_width, center.im + half_width),
        }
    }

    /// `grid × grid` points, row-major in the imaginary direction.
    pub fn grid(&self, grid: usize) -> Vec<ComplexValue> {
        let lin = |(a, b): (f64, f64), i: usize| {
            if grid == 1 {
                0.5 * (a + b)
            } else {
                a + (b - a) * i as f64 / (grid - 1) as f64
            }
        };
        let mut out = Vec::with_capacity(grid * grid);
        for i in 0..grid {
            for j in 0..grid {
                out.push(c64(lin(self.re, j), lin(self.im, i)));
            }
        }
        out
    }

    /// The point of the rectangle nearest the origin.
    pub fn nearest_to_origin(&self) -> ComplexValue {
        c64(0f64.clamp(self.re.0, self.re.1), 0f64.clamp(self.im.0, self.im.1))
    }

    /// The point of the rectangle farthest from the origin (a corner).
    pub fn farthest_from_origin(&self) -> ComplexValue {
        let pick = |(a, b): (f64, f64)| if a.abs() > b.abs() { a } else { b };
        c64(pick(self.re), pick(self.im))
    }
}

/// A product of per-coordinate rectangles with a grid resolution.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CompactBox {
    pub rects: Vec<Rect>,
    pub grid: usize,
}

impl CompactBox {
    /// A box inside the strip 1/2 < Re s < 1 in every coordinate, symmetric
    /// about the real axis.
    pub fn strip(sigma: &[(f64, f64)], height: &[f64], grid: usize) -> Result<Self> {
        if sigma.len() != height.len() {
            return Err(Error::Arity("sigma and height lengths differ".into()));
        }
        for (&(lo, hi), &r) in sigma.iter().zip(height) {
            if !(0.5 < lo && lo < hi && hi < 1.0) {
                return Err(Error::Domain(format!("[{lo}, {hi}] is not inside (1/2, 1)")));
            }
            if !(r >= 0.0) {
                return Err(Error::Domain(format!("height {r} must be non-negative")));
            }
        }
        let rects = sigma.iter().zip(height).map(|(&re, &r)| Rect { re, im: (-r, r) }).collect();
        CompactBox::rectangle(rects, grid)
    }

    /// Any product of rectangles.
    pub fn rectangle(rects: Vec<Rect>, grid: usize) -> Result<Self> {
        if rects.is_empty() || rects.len() > MAX_ARITY {
            return Err(Error::Arity(format!("{} rectangles", rects.len())));
        }
        if grid < 2 {
            return Err(Error::Domain("grid resolution must be at least 2".into()));
        }
        for r in &rects {
            if !(r.re.0 <= r.re.1 && r.im.0 <= r.im.1) || !r.re.0.is_finite() || !r.im.1.is_finite() {
                return Err(Error::Domain(format!("degenerate rectangle {r:?}")));
            }
        }
        Ok(CompactBox { rects, grid })
    }

    pub fn arity(&self) -> usize {
        self.rects.len()
    }

    pub fn with_grid(&self, grid: usize) -> Result<Self> {
        CompactBox::rectangle(self.rects.clone(), grid)
    }

    /// Every grid point of the product box, as coordinate vectors.
    pub fn points(&self) -> Vec<Vec<ComplexValue>> {
        let axes: Vec<Vec<ComplexValue>> = self.rects.iter().map(|r| r.grid(self.grid)).collect();
        let mut out: Vec<Vec<ComplexValue>> = vec![Vec::new()];
        for axis in &axes {
            let mut next = Vec::with_capacity(out.len() * axis.len());
            for p in &out {
                for z in axis {
                    let mut q = p.clone();
                    q.push(*z);
                    next.push(q);
                }
            }
            out = next;
        }
        out
    }

    /// Smallest and largest imaginary parts over all coordinates.
    pub fn im_range(&self) -> (f64, f64) {
        let lo = self.rects.iter().map(|r| r.im.0).fold(f64::INFINITY, f64::min);
        let hi = self.rects.iter().map(|r| r.im.1).fold(f64::NEG_INFINITY, f64::max);
        (lo, hi)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn point_validation() {
        assert!(MultiPoint::new(vec![]).is_err());
        assert!(MultiPoint::new(vec![c64(1.0, 0.0); 9]).is_err());
        assert!(MultiPoint::new(vec![c64(f64::NAN, 0.0)]).is_err());
        let p = MultiPoint::new(vec![c64(0.5, 1.0), c64(0.7, 2.0)]).unwrap();
        let q = p.shifted(&[10.0, 20.0]).unwrap();
        assert_eq!(q.coords()[1], c64(0.7, 22.0));
        let j = serde_json::to_string(&p).unwrap();
        assert_eq!(serde_json::from_str::<MultiPoint>(&j).unwrap(), p);
        assert!(serde_json::from_str::<MultiPoint>("[]").is_err());
    }

    #[test]
    fn boxes() {
        assert!(CompactBox::strip(&[(0.6, 0.9)], &[1.0], 3).is_ok());
        assert!(CompactBox::strip(&[(0.4, 0.9)], &[1.0], 3).is_err());
        assert!(CompactBox::strip(&[(0.6, 1.0)], &[1.0], 3).is_err());
        assert!(CompactBox::strip(&[(0.6, 0.9)], &[1.0], 1).is_err());
        let b = CompactBox::strip(&[(0.6, 0.9), (0.7, 0.8)], &[1.0, 2.0], 3).unwrap();
        let pts = b.points();
        assert_eq!(pts.len(), 81);
        assert_eq!(pts[0], vec![c64(0.6, -1.0), c64(0.7, -2.0)]);
        assert_eq!(b.im_range(), (-2.0, 2.0));
        let r = Rect { re: (0.6, 0.9), im: (-1.0, 2.0) };
        assert_eq!(r.nearest_to_origin(), c64(0.6, 0.0));
        assert_eq!(r.farthest_from_origin(), c64(0.9, 2.0));
    }
}
