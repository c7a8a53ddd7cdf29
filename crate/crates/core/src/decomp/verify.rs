use std::collections::BTreeMap;
use std::ops::{Add, Mul};

use num_rational::BigRational;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use super::{MonomialTableau, Polynomial};
use crate::error::{Error, Result};
use crate::multizeta::CompactBox;
use crate::numcore::ComplexValue;

/// An exact complex rational.
#[derive(Debug, Clone, PartialEq, Eq)]
struct Exact {
    re: BigRational,
    im: BigRational,
}

impl Exact {
    fn from_value(z: ComplexValue) -> Result<Self> {
        let conv = |x: f64| BigRational::from_float(x).ok_or(Error::NonFinite("tableau coefficient"));
        Ok(Exact { re: conv(z.re)?, im: conv(z.im)? })
    }

    fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }
}

impl Add for &Exact {
    type Output = Exact;
    fn add(self, o: &Exact) -> Exact {
        Exact { re: &self.re + &o.re, im: &self.im + &o.im }
    }
}

impl Mul for &Exact {
    type Output = Exact;
    fn mul(self, o: &Exact) -> Exact {
        Exact { re: &self.re * &o.re - &self.im * &o.im, im: &self.re * &o.im + &self.im * &o.re }
    }
}

/// Exponent tuple (over the trailing variables) → exact coefficient, with
/// zero coefficients removed.
type ExactPoly = BTreeMap<Vec<u32>, Exact>;

fn add_into(acc: &mut ExactPoly, key: Vec<u32>, c: Exact) {
    match acc.get_mut(&key) {
        Some(v) => {
            *v = &*v + &c;
            if v.is_zero() {
                acc.remove(&key);
            }
        }
        None => {
            if !c.is_zero() {
                acc.insert(key, c);
            }
        }
    }
}

fn sum_polys(a: &ExactPoly, b: &ExactPoly) -> ExactPoly {
    let mut out = a.clone();
    for (k, v) in b {
        add_into(&mut out, k.clone(), v.clone());
    }
    out
}

/// Outcome of each check; `None` means the check was not requested.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    /// (i) the ordered product sum reproduces p exactly.
    pub reconstruction: bool,
    /// (ii) every tail sum over rows v..n vanishes identically.
    pub tails_vanish: bool,
    /// The first v ≥ 2 whose tail sum is not identically zero.
    pub failing_tail: Option<usize>,
    /// (iii) every prefix sum of every row is a single monomial or zero.
    pub prefix_monomials: bool,
    /// (iv) row-1 prefix sums exceed C in modulus (or vanish) and the other
    /// rows' prefix sums are at most 1, on the box grid.
    pub box_conditions: Option<bool>,
}

impl VerificationReport {
    pub fn passed(&self) -> bool {
        self.reconstruction && self.tails_vanish && self.prefix_monomials && self.box_conditions.unwrap_or(true)
    }
}

/// Checks (i)–(iii) in exact rational arithmetic on the binary values of the
/// coefficients, and (iv) numerically on the box grid when `bounds = Some((C,
/// box))`.
pub fn verify_tableau(
    t: &MonomialTableau,
    p: &Polynomial,
    bounds: Option<(f64, &CompactBox)>,
) -> Result<VerificationReport> {
    let n = t.arity();
    if p.arity() != n {
        return Err(Error::Arity(format!("tableau arity {n}, polynomial arity {}", p.arity())));
    }
    let m_len = t.len();
    let entry = |j: usize, m: usize| -> Result<Option<(Exact, u32)>> {
        let (c, e) = t.entry(j, m);
        let x = Exact::from_value(c)?;
        Ok((!x.is_zero()).then_some((x, e)))
    };

    // W_j(m) = q_{j,m}·Σ_{m'>m} W_{j+1}(m'), polynomials in s_j..s_n;
    // tails[j] = Σ_m W_j(m)
    let mut tails: Vec<ExactPoly> = vec![ExactPoly::new(); n + 1];
    let mut w: Vec<ExactPoly> = Vec::new();
    for j in (1..=n).rev() {
        let mut next = vec![ExactPoly::new(); m_len];
        let mut suffix = ExactPoly::new();
        for m in (1..=m_len).rev() {
            if let Some((c, e)) = entry(j, m)? {
                if j == n {
                    next[m - 1].insert(vec![e], c);
                } else {
                    for (key, v) in &suffix {
                        let mut k = Vec::with_capacity(key.len() + 1);
                        k.push(e);
                        k.extend_from_slice(key);
                        add_into(&mut next[m - 1], k, &c * v);
                    }
                }
            }
            if j < n {
                suffix = sum_polys(&suffix, &w[m - 1]);
            }
        }
        tails[j] = next.iter().fold(ExactPoly::new(), |acc, x| sum_polys(&acc, x));
        w = next;
    }

    let mut target = ExactPoly::new();
    for term in p.terms() {
        add_into(&mut target, term.exponents.clone(), Exact::from_value(term.coefficient)?);
    }
    let reconstruction = tails[1] == target;
    let failing_tail = (2..=n).find(|&v| !tails[v].is_empty());

    let mut prefix_monomials = true;
    for j in 1..=n {
        let mut acc = ExactPoly::new();
        for m in 1..=m_len {
            if let Some((c, e)) = entry(j, m)? {
                add_into(&mut acc, vec![e], c);
            }
            prefix_monomials &= acc.len() <= 1;
        }
    }

    let box_conditions = match bounds {
        None => None,
        Some((c, bx)) => {
            if bx.arity() != n {
                return Err(Error::Arity(format!("box arity {} for tableau arity {n}", bx.arity())));
            }
            Some(box_check(t, c, bx))
        }
    };

    Ok(VerificationReport {
        reconstruction,
        tails_vanish: failing_tail.is_none(),
        failing_tail,
        prefix_monomials,
        box_conditions,
    })
}

/// (iv) on the grid points of each coordinate rectangle. Prefix sums are
/// accumulated per exponent so that exact cancellation is seen as zero.
fn box_check(t: &MonomialTableau, c: f64, bx: &CompactBox) -> bool {
    for j in 1..=t.arity() {
        let pts = bx.rects[j - 1].grid(bx.grid);
        let mut acc: BTreeMap<u32, ComplexValue> = BTreeMap::new();
        for m in 1..=t.len() {
            let (coef, e) = t.entry(j, m);
            if coef.norm() == 0.0 {
                continue;
            }
            *acc.entry(e).or_default() += coef;
            acc.retain(|_, v| v.norm() != 0.0);
            if acc.is_empty() {
                continue;
            }
            for s in &pts {
                let v: ComplexValue = acc.iter().map(|(&e, &k)| k * s.powu(e)).sum();
                let ok = if j == 1 { v.norm() > c } else { v.norm() <= 1.0 };
                if !ok {
                    return false;
                }
            }
        }
    }
    true
}
