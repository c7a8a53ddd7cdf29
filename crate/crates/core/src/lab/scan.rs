use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::decomp::Polynomial;
use crate::error::{Error, Result};
use crate::multizeta::{zeta_eval, CompactBox, EvalPolicy, MultiPoint, ParamVector};
use crate::numcore::ComplexValue;

/// Default cap on the number of shifts in one scan.
pub const DEFAULT_MAX_SHIFTS: usize = 2_000_000;

/// A function the shifted zeta-function should approximate on the box.
pub trait TargetFunction: Sync {
    fn eval(&self, s: &[ComplexValue]) -> Result<ComplexValue>;
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Target {
    Constant(ComplexValue),
    Polynomial(Polynomial),
}

impl TargetFunction for Target {
    fn eval(&self, s: &[ComplexValue]) -> Result<ComplexValue> {
        match self {
            Target::Constant(c) => Ok(*c),
            Target::Polynomial(p) => p.eval(s),
        }
    }
}

/// Evaluator settings shared by scans and moments.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct EvalSettings {
    pub xi: f64,
    pub policy: EvalPolicy,
}

impl Default for EvalSettings {
    fn default() -> Self {
        EvalSettings { xi: 0.3, policy: EvalPolicy::default() }
    }
}

/// Whether every point of the box shifted by t lies in the evaluator window
/// T^ξ ≤ Im s_j ≤ T, T = scale·max Im s_j, with |Re s_j| ≤ A.
pub fn in_window(bx: &CompactBox, t: &[f64], eval: &EvalSettings) -> bool {
    if t.len() != bx.arity() {
        return false;
    }
    let lo = bx.rects.iter().zip(t).map(|(r, &t)| r.im.0 + t).fold(f64::INFINITY, f64::min);
    let hi = bx.rects.iter().zip(t).map(|(r, &t)| r.im.1 + t).fold(f64::NEG_INFINITY, f64::max);
    let re_ok = bx.rects.iter().all(|r| r.re.0.abs().max(r.re.1.abs()) <= eval.policy.a);
    let big_t = (eval.policy.scale * hi).max(1.0);
    re_ok && lo > 0.0 && lo >= big_t.powf(eval.xi)
}

/// max over the box grid of |ζ_n(s + it; α) − f(s)|.
pub fn sup_distance(
    alpha: &ParamVector,
    t: &[f64],
    target: &dyn TargetFunction,
    bx: &CompactBox,
    eval: &EvalSettings,
) -> Result<f64> {
    if bx.arity() != alpha.arity() || t.len() != alpha.arity() {
        return Err(Error::Arity(format!("box {}, shift {}, parameters {}", bx.arity(), t.len(), alpha.arity())));
    }
    let mut worst = 0.0f64;
    for s in bx.points() {
        let p = MultiPoint::new(s.clone())?.shifted(t)?;
        let z = zeta_eval(&p, alpha, eval.xi, &eval.policy)?.value;
        worst = worst.max((z - target.eval(&s)?).norm());
    }
    Ok(worst)
}

/// How the shifts are laid out.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ScanMode {
    /// t = (i₁·step₁, …, i_n·step_n) with every t_j in the range.
    Continuous { step: Vec<f64> },
    /// t = (k₁Δ₁, …, k_nΔ_n), k_j ≥ 0, with every t_j in the range.
    Discrete { delta: Vec<f64> },
    /// t = τ·v with τ = i·step in the range.
    Line { direction: Vec<f64>, step: f64 },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct JointTarget {
    pub alpha: ParamVector,
    pub target: Target,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScanSpec {
    pub alpha: ParamVector,
    pub mode: ScanMode,
    /// Range of each t_j (of τ in line mode).
    pub t_range: (f64, f64),
    pub target: Target,
    #[serde(rename = "box")]
    pub bx: CompactBox,
    pub epsilon: f64,
    #[serde(default)]
    pub joint: Vec<JointTarget>,
    #[serde(default)]
    pub eval: EvalSettings,
    #[serde(default = "default_max_shifts")]
    pub max_shifts: usize,
}

fn default_max_shifts() -> usize {
    DEFAULT_MAX_SHIFTS
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ShiftRecord {
    pub t: Vec<f64>,
    pub sup_distance: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScanOutcome {
    /// Fraction of evaluated shifts with sup_distance < ε.
    pub density: f64,
    pub evaluated: usize,
    /// Shifts outside the evaluator window.
    pub skipped: usize,
    pub best: Option<ShiftRecord>,
    /// In shift order.
    pub records: Vec<ShiftRecord>,
}

/// Integer indices i with lo ≤ i·h ≤ hi (and i ≥ 0).
fn index_range(lo: f64, hi: f64, h: f64) -> (i64, i64) {
    let a = ((lo / h).ceil() as i64).max(0);
    let b = (hi / h).floor() as i64;
    (a, b)
}

impl ScanSpec {
    fn validate(&self) -> Result<()> {
        let n = self.alpha.arity();
        if self.bx.arity() != n {
            return Err(Error::Arity(format!("box arity {} for {n} parameters", self.bx.arity())));
        }
        if let Some(j) = self.joint.iter().find(|j| j.alpha.arity() != n) {
            return Err(Error::Arity(format!("joint target with {} parameters", j.alpha.arity())));
        }
        if self.epsilon.is_nan() || self.epsilon < 0.0 {
            return Err(Error::Domain(format!("ε = {} must be non-negative", self.epsilon)));
        }
        let (lo, hi) = self.t_range;
        if !(lo.is_finite() && hi.is_finite() && lo <= hi) {
            return Err(Error::Domain(format!("shift range [{lo}, {hi}]")));
        }
        let positive = |v: &[f64], what: &str| -> Result<()> {
            if v.len() != n {
                return Err(Error::Arity(format!("{what} has {} entries for arity {n}", v.len())));
            }
            match v.iter().find(|x| !(**x > 0.0 && x.is_finite())) {
                Some(x) => Err(Error::Domain(format!("{what} entry {x} must be positive"))),
                None => Ok(()),
            }
        };
        match &self.mode {
            ScanMode::Continuous { step } => positive(step, "step"),
            ScanMode::Discrete { delta } => positive(delta, "lattice"),
            ScanMode::Line { direction, step } => {
                positive(direction, "direction")?;
                if !(*step > 0.0 && step.is_finite()) {
                    return Err(Error::Domain(format!("line step {step} must be positive")));
                }
                Ok(())
            }
        }
    }

    /// All shifts in order (lexicographic in the last axis fastest).
    pub fn shifts(&self) -> Result<Vec<Vec<f64>>> {
        self.validate()?;
        let (lo, hi) = self.t_range;
        let too_many = |count: f64| -> Result<()> {
            if count > self.max_shifts as f64 {
                return Err(Error::Budget(format!("{count:.3e} shifts exceed the cap {}", self.max_shifts)));
            }
            Ok(())
        };
        match &self.mode {
            ScanMode::Continuous { step: h } | ScanMode::Discrete { delta: h } => {
                let ranges: Vec<(i64, i64)> = h.iter().map(|&h| index_range(lo, hi, h)).collect();
                let count: f64 = ranges.iter().map(|(a, b)| (b - a + 1).max(0) as f64).product();
                too_many(count)?;
                let mut out: Vec<Vec<f64>> = vec![Vec::new()];
                for (&(a, b), &h) in ranges.iter().zip(h) {
                    let mut next = Vec::with_capacity(out.len() * (b - a + 1).max(0) as usize);
                    for p in &out {
                        for i in a..=b {
                            let mut q = p.clone();
                            q.push(i as f64 * h);
                            next.push(q);
                        }
                    }
                    out = next;
                }
                Ok(out)
            }
            ScanMode::Line { direction, step } => {
                let (a, b) = index_range(lo, hi, *step);
                too_many((b - a + 1).max(0) as f64)?;
                Ok((a..=b).map(|i| direction.iter().map(|v| i as f64 * step * v).collect()).collect())
            }
        }
    }
}

/// Evaluates every shift of the scan in parallel. Shifts whose box leaves
/// the evaluator window are skipped; in joint mode the distance is the
/// largest over all (α, f) pairs.
pub fn scan_shifts(spec: &ScanSpec) -> Result<ScanOutcome> {
    let shifts = spec.shifts()?;
    let pairs: Vec<(&ParamVector, &Target)> =
        std::iter::once((&spec.alpha, &spec.target)).chain(spec.joint.iter().map(|j| (&j.alpha, &j.target))).collect();
    let results: Vec<Option<ShiftRecord>> = shifts
        .into_par_iter()
        .map(|t| -> Result<Option<ShiftRecord>> {
            if !in_window(&spec.bx, &t, &spec.eval) {
                return Ok(None);
            }
            let mut d = 0.0f64;
            for (alpha, target) in &pairs {
                d = d.max(sup_distance(alpha, &t, *target, &spec.bx, &spec.eval)?);
            }
            Ok(Some(ShiftRecord { pass: d < spec.epsilon, sup_distance: d, t }))
        })
        .collect::<Result<_>>()?;
    let skipped = results.iter().filter(|r| r.is_none()).count();
    let records: Vec<ShiftRecord> = results.into_iter().flatten().collect();
    let evaluated = records.len();
    let passes = records.iter().filter(|r| r.pass).count();
    let density = if evaluated == 0 { 0.0 } else { passes as f64 / evaluated as f64 };
    let best = records.iter().min_by(|a, b| a.sup_distance.total_cmp(&b.sup_distance)).cloned();
    Ok(ScanOutcome { density, evaluated, skipped, best, records })
}

/// Density of passes among existing records at another ε.
pub fn density_at(records: &[ShiftRecord], epsilon: f64) -> f64 {
    if records.is_empty() {
        return 0.0;
    }
    records.iter().filter(|r| r.sup_distance < epsilon).count() as f64 / records.len() as f64
}

/// The box of the given half-width around a point in one variable.
pub fn square_about(center: ComplexValue, half_width: f64, grid: usize) -> Result<CompactBox> {
    CompactBox::rectangle(vec![crate::multizeta::Rect::centered(center, half_width)], grid)
}
