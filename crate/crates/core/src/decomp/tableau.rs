use serde::{Deserialize, Serialize};

use super::Polynomial;
use crate::error::{Error, Result};
use crate::multizeta::{CompactBox, Rect};
use crate::numcore::{c64, ComplexValue};

/// The single nonzero monomial c·s_j^e of a slot, owned by row j.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Slot {
    /// 1-based slot index m.
    pub m: usize,
    /// 1-based owning row j_m.
    pub j_m: usize,
    pub coefficient: ComplexValue,
    pub exponent: u32,
}

/// Monomials q_{j,m}(s_j), 1 ≤ m ≤ M, with q_{j,m} = 0 unless j = j_m, and
/// the scale B already applied to the coefficients.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "TableauDocument", into = "TableauDocument")]
pub struct MonomialTableau {
    arity: usize,
    slots: Vec<Slot>,
    scale: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TableauDocument {
    pub arity: usize,
    pub scale: f64,
    pub slots: Vec<Slot>,
}

impl TryFrom<TableauDocument> for MonomialTableau {
    type Error = Error;
    fn try_from(d: TableauDocument) -> Result<Self> {
        MonomialTableau::new(d.arity, d.slots, d.scale)
    }
}

impl From<MonomialTableau> for TableauDocument {
    fn from(t: MonomialTableau) -> Self {
        TableauDocument { arity: t.arity, scale: t.scale, slots: t.slots }
    }
}

impl MonomialTableau {
    pub fn new(arity: usize, slots: Vec<Slot>, scale: f64) -> Result<Self> {
        if arity < 2 {
            return Err(Error::Arity(format!("tableau arity {arity}; at least 2 is required")));
        }
        if !(scale > 0.0 && scale.is_finite()) {
            return Err(Error::Domain(format!("scale B = {scale} must be positive")));
        }
        for (i, s) in slots.iter().enumerate() {
            if s.m != i + 1 {
                return Err(Error::Domain(format!("slot {} stored at position {}", s.m, i + 1)));
            }
            if !(1..=arity).contains(&s.j_m) {
                return Err(Error::Domain(format!("slot {} owned by row {} of {arity}", s.m, s.j_m)));
            }
        }
        Ok(MonomialTableau { arity, slots, scale })
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    /// M.
    pub fn len(&self) -> usize {
        self.slots.len()
    }

    pub fn is_empty(&self) -> bool {
        self.slots.is_empty()
    }

    pub fn slots(&self) -> &[Slot] {
        &self.slots
    }

    pub fn scale(&self) -> f64 {
        self.scale
    }

    /// q_{j,m} as (coefficient, exponent), zero when row j does not own
    /// slot m. Both indices 1-based.
    pub fn entry(&self, j: usize, m: usize) -> (ComplexValue, u32) {
        let s = &self.slots[m - 1];
        if s.j_m == j {
            (s.coefficient, s.exponent)
        } else {
            (c64(0.0, 0.0), 0)
        }
    }

    /// Row j as slot-indexed (coefficient, exponent) pairs.
    pub fn row(&self, j: usize) -> Vec<(ComplexValue, u32)> {
        (1..=self.len()).map(|m| self.entry(j, m)).collect()
    }

    /// The same tableau with row 1 multiplied by b^{n−1} and every other
    /// row divided by b, which leaves every product across rows unchanged.
    pub fn rescaled(&self, b: f64) -> Result<Self> {
        let up = b.powi(self.arity as i32 - 1);
        let slots = self
            .slots
            .iter()
            .map(|s| Slot { coefficient: if s.j_m == 1 { s.coefficient * up } else { s.coefficient / b }, ..*s })
            .collect();
        MonomialTableau::new(self.arity, slots, self.scale * b)
    }
}

/// The unscaled construction: for the l-th term a·Π s_j^{c_j}, with centre
/// μ = n(2l − 1), row 1 holds a·s₁^{c₁} at μ and −a·s₁^{c₁} at μ + n, and
/// row j ≥ 2 holds −s_j^{c_j} at μ − j + 1 and s_j^{c_j} at μ + j − 1. The
/// final slot 2nL, which no later slot could pair with, is dropped, so
/// M = 2nL − 1.
pub fn construct(p: &Polynomial) -> Result<MonomialTableau> {
    let n = p.arity();
    if n < 2 {
        return Err(Error::Arity(format!("decomposition needs at least 2 variables, got {n}")));
    }
    let l_count = p.terms().len();
    if l_count == 0 {
        return MonomialTableau::new(n, Vec::new(), 1.0);
    }
    let total = 2 * n * l_count;
    let mut slots: Vec<Option<Slot>> = vec![None; total + 1];
    let mut put = |m: usize, j: usize, coefficient: ComplexValue, exponent: u32| {
        debug_assert!(slots[m].is_none());
        slots[m] = Some(Slot { m, j_m: j, coefficient, exponent });
    };
    for (l, t) in p.terms().iter().enumerate() {
        let mu = n * (2 * (l + 1) - 1);
        put(mu, 1, t.coefficient, t.exponents[0]);
        put(mu + n, 1, -t.coefficient, t.exponents[0]);
        for j in 2..=n {
            let e = t.exponents[j - 1];
            put(mu - j + 1, j, c64(-1.0, 0.0), e);
            put(mu + j - 1, j, c64(1.0, 0.0), e);
        }
    }
    let slots = slots[1..total].iter().map(|s| s.expect("every slot is assigned")).collect();
    MonomialTableau::new(n, slots, 1.0)
}

/// min and max of |s|^e over a rectangle: |s| is extremal at the nearest
/// point and the farthest corner.
pub(crate) fn modulus_range(r: &Rect, e: u32) -> (f64, f64) {
    let lo = r.nearest_to_origin().norm();
    let hi = r.farthest_from_origin().norm();
    (lo.powi(e as i32), hi.powi(e as i32))
}

/// Smallest power of two B with B^{n−1}·min_K |a_l s₁^{c₁}| > C for every
/// term (the nonzero prefix sums of row 1) and max_K |s_j^{c_j}|/B ≤ 1 for
/// every term and j ≥ 2 (the nonzero prefix sums of the other rows).
fn choose_scale(p: &Polynomial, c: f64, bx: &CompactBox) -> Result<f64> {
    let n = p.arity();
    let mut need_low = 0.0f64; // B^{n−1} must exceed this
    let mut need_cap = 0.0f64; // B must be at least this
    for t in p.terms() {
        let (lo, _) = modulus_range(&bx.rects[0], t.exponents[0]);
        let m = t.coefficient.norm() * lo;
        if m == 0.0 {
            return Err(Error::Domain("the box for s1 touches 0 where a monomial vanishes".into()));
        }
        need_low = need_low.max(c / m);
        for j in 2..=n {
            let (_, hi) = modulus_range(&bx.rects[j - 1], t.exponents[j - 1]);
            need_cap = need_cap.max(hi);
        }
    }
    let ok = |b: f64| b.powi(n as i32 - 1) > need_low && b >= need_cap;
    let guess = need_cap.max(need_low.powf(1.0 / (n as f64 - 1.0))).max(f64::MIN_POSITIVE);
    let mut k = guess.log2().floor() as i32 - 1;
    while k > f64::MIN_EXP - 1 && ok(2f64.powi(k - 1)) {
        k -= 1;
    }
    while !ok(2f64.powi(k)) {
        k += 1;
        if k >= f64::MAX_EXP {
            return Err(Error::Domain("no finite power of two satisfies the box conditions".into()));
        }
    }
    Ok(2f64.powi(k))
}

/// The decomposition p(s) = Σ_{m₁<…<m_n} Π q_{j,m_j}(s_j) with vanishing
/// tail sums, scaled by the smallest power of two B for which every nonzero
/// prefix sum of row 1 exceeds C in modulus and every prefix sum of the
/// other rows is at most 1 on the box.
pub fn decompose(p: &Polynomial, c: f64, bx: &CompactBox) -> Result<MonomialTableau> {
    if bx.arity() != p.arity() {
        return Err(Error::Arity(format!("box of arity {} for a polynomial of arity {}", bx.arity(), p.arity())));
    }
    if !(c > 0.0 && c.is_finite()) {
        return Err(Error::Domain(format!("C = {c} must be positive")));
    }
    let base = construct(p)?;
    if base.is_empty() {
        return Ok(base);
    }
    let b = choose_scale(p, c, bx)?;
    base.rescaled(b)
}
