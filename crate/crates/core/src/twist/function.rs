use std::collections::BTreeMap;

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hurwitz::{dirichlet_l, DirichletCharacter, HurwitzParam, ParamTag};
use crate::numcore::primes::{factor, is_prime};
use crate::numcore::{c64, ensure_finite, pow_neg, root_of_unity, ComplexValue};

const UNIMODULAR_TOL: f64 = 1e-12;

/// A completely multiplicative unimodular function a on ℕ + α of type
/// (N₀, χ).
///
/// Below the threshold ⌈log N₀⌉ the values are free; above it they follow
/// the character. For rational α = c/d the function lives on the integers
/// through a(k + α) = a(kd + c)/a(d), and the free values are a(p) for
/// primes p below the threshold and for primes dividing q (where χ(p) = 0
/// could not serve). For transcendental α the free values are a(k + α)
/// with k below the threshold, and a(k + α) = e^{2πik/q} above it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "TwistDocument", into = "TwistDocument")]
pub struct TwistFunction {
    param: HurwitzParam,
    character: DirichletCharacter,
    n0: u64,
    threshold: u64,
    free_values: BTreeMap<u64, ComplexValue>,
}

/// The serialized form; deserialization re-runs every check of
/// [`make_twist`].
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TwistDocument {
    pub param: HurwitzParam,
    pub character: DirichletCharacter,
    pub n0: u64,
    pub threshold: u64,
    pub free_values: BTreeMap<u64, ComplexValue>,
}

impl TryFrom<TwistDocument> for TwistFunction {
    type Error = Error;
    fn try_from(doc: TwistDocument) -> Result<Self> {
        let t = make_twist(&doc.param, &doc.character, doc.n0, &doc.free_values)?;
        if t.threshold != doc.threshold {
            return Err(Error::Domain(format!(
                "stored threshold {} disagrees with ⌈log {}⌉ = {}",
                doc.threshold, doc.n0, t.threshold
            )));
        }
        Ok(t)
    }
}

impl From<TwistFunction> for TwistDocument {
    fn from(t: TwistFunction) -> Self {
        TwistDocument {
            param: t.param,
            character: t.character,
            n0: t.n0,
            threshold: t.threshold,
            free_values: t.free_values,
        }
    }
}

/// ⌈log N₀⌉.
pub fn log_threshold(n0: u64) -> Result<u64> {
    if n0 == 0 {
        return Err(Error::Domain("N0 must be positive".into()));
    }
    Ok((n0 as f64).ln().ceil() as u64)
}

/// Builds a type-(N₀, χ) function. Free values not listed default to 1.
///
/// For transcendental α only the modulus q of `chi` matters (the tail is
/// the additive character e^{2πik/q}, q ≥ 2).
pub fn make_twist(
    alpha: &HurwitzParam,
    chi: &DirichletCharacter,
    n0: u64,
    free_values: &BTreeMap<u64, ComplexValue>,
) -> Result<TwistFunction> {
    let threshold = log_threshold(n0)?;
    let q = chi.modulus;
    match alpha.as_rational() {
        Some((_, d)) => {
            if q.gcd(&d) != 1 {
                return Err(Error::Compatibility(format!("gcd(q, d) = gcd({q}, {d}) ≠ 1")));
            }
            if chi.principal {
                return Err(Error::Compatibility(format!("the character mod {q} is principal")));
            }
            for &p in free_values.keys() {
                if !is_prime(p) || !(p < threshold || q.is_multiple_of(p)) {
                    return Err(Error::Domain(format!(
                        "a({p}) is not free: keys must be primes below {threshold} or dividing {q}"
                    )));
                }
            }
        }
        None => {
            if q < 2 {
                return Err(Error::Compatibility(format!("additive tail needs q ≥ 2, got {q}")));
            }
            if let Some(&k) = free_values.keys().find(|&&k| k >= threshold) {
                return Err(Error::Domain(format!("a({k} + α) is fixed by the tail rule (threshold {threshold})")));
            }
        }
    }
    for (&k, &v) in free_values {
        if !((v.norm() - 1.0).abs() <= UNIMODULAR_TOL) {
            return Err(Error::Unimodular(format!("free value at {k} has modulus {}", v.norm())));
        }
    }
    Ok(TwistFunction { param: *alpha, character: chi.clone(), n0, threshold, free_values: free_values.clone() })
}

impl TwistFunction {
    pub fn param(&self) -> &HurwitzParam {
        &self.param
    }

    pub fn character(&self) -> &DirichletCharacter {
        &self.character
    }

    pub fn n0(&self) -> u64 {
        self.n0
    }

    pub fn threshold(&self) -> u64 {
        self.threshold
    }

    pub fn free_values(&self) -> &BTreeMap<u64, ComplexValue> {
        &self.free_values
    }

    pub fn is_rational(&self) -> bool {
        matches!(self.param.tag(), ParamTag::Rational { .. })
    }

    /// Primes whose value is free (rational case): those below the
    /// threshold and those dividing q.
    pub fn free_primes(&self) -> Vec<u64> {
        let q = self.character.modulus;
        let mut ps: Vec<u64> = (2..self.threshold).filter(|&p| is_prime(p)).collect();
        if let Ok(f) = factor(q) {
            ps.extend(f.into_iter().map(|(p, _)| p).filter(|&p| p >= self.threshold));
        }
        ps.sort_unstable();
        ps
    }

    /// a(p) for a prime p (rational case).
    pub fn prime_value(&self, p: u64) -> ComplexValue {
        if let Some(v) = self.free_values.get(&p) {
            return *v;
        }
        if p < self.threshold || self.character.modulus.is_multiple_of(p) {
            c64(1.0, 0.0)
        } else {
            self.character.value(p)
        }
    }

    /// a(m) for a positive integer m (rational case), by factoring m.
    pub fn integer_value(&self, m: u64) -> Result<ComplexValue> {
        if !self.is_rational() {
            return Err(Error::Domain("integer values exist only for rational parameters".into()));
        }
        let mut acc = c64(1.0, 0.0);
        for (p, e) in factor(m)? {
            acc *= self.prime_value(p).powu(e);
        }
        Ok(acc / acc.norm())
    }

    /// a(k + α).
    pub fn value(&self, k: u64) -> Result<ComplexValue> {
        match self.param.as_rational() {
            Some((c, d)) => {
                let m = k
                    .checked_mul(d)
                    .and_then(|x| x.checked_add(c))
                    .ok_or_else(|| Error::Budget(format!("k·d + c overflows for k = {k}")))?;
                let v = self.integer_value(m)? / self.integer_value(d)?;
                Ok(v / v.norm())
            }
            None => Ok(if k < self.threshold {
                self.free_values.get(&k).copied().unwrap_or(c64(1.0, 0.0))
            } else {
                root_of_unity((k % self.character.modulus) as i64, self.character.modulus)
            }),
        }
    }

    /// a(k + α) for k = 0..=n_max.
    pub fn values(&self, n_max: u64) -> Result<Vec<ComplexValue>> {
        (0..=n_max).map(|k| self.value(k)).collect()
    }
}

/// a(k + α).
pub fn twist_value(a: &TwistFunction, k: u64) -> Result<ComplexValue> {
    a.value(k)
}

/// Σ_{1≤m≤m_max} a(m) m^{−s} for a rational-parameter twist, smallest terms
/// first.
pub fn generating_series_direct(a: &TwistFunction, s: ComplexValue, m_max: u64) -> Result<ComplexValue> {
    let mut acc = c64(0.0, 0.0);
    for m in (1..=m_max).rev() {
        acc += a.integer_value(m)? * pow_neg(m as f64, s);
    }
    ensure_finite(acc, "generating_series_direct")
}

/// Π_p (1 − χ(p)p^{−s})/(1 − a(p)p^{−s}) · L(s, χ) over the free primes:
/// the closed form of the generating Dirichlet series of a.
pub fn generating_series_product(a: &TwistFunction, s: ComplexValue) -> Result<ComplexValue> {
    if !a.is_rational() {
        return Err(Error::Domain("the generating series is defined for rational parameters".into()));
    }
    let chi = a.character();
    let mut acc = dirichlet_l(s, chi)?;
    for p in a.free_primes() {
        let ps = pow_neg(p as f64, s);
        acc *= (1.0 - chi.value(p) * ps) / (1.0 - a.prime_value(p) * ps);
    }
    ensure_finite(acc, "generating_series_product")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hurwitz::character_table;
    use proptest::prelude::*;
    use std::f64::consts::PI;

    fn chi(q: u64, idx: usize) -> DirichletCharacter {
        character_table(q).unwrap().swap_remove(idx)
    }

    fn brute_factor(mut m: u64) -> Vec<u64> {
        let mut out = Vec::new();
        let mut p = 2;
        while m > 1 {
            while m.is_multiple_of(p) {
                out.push(p);
                m /= p;
            }
            p += 1;
        }
        out
    }

    #[test]
    fn transcendental_tail() {
        // ln 20 ≈ 2.996, so the tail starts at k = 3
        let pi = HurwitzParam::transcendental(PI).unwrap();
        let mut free = BTreeMap::new();
        free.insert(1, c64(0.0, -1.0));
        let a = make_twist(&pi, &DirichletCharacter::principal(4), 20, &free).unwrap();
        assert_eq!(a.threshold(), 3);
        assert_eq!(a.value(0).unwrap(), c64(1.0, 0.0));
        assert_eq!(a.value(1).unwrap(), c64(0.0, -1.0));
        for k in 3..40u64 {
            let want = c64(0.0, 1.0).powu(k as u32);
            assert!((a.value(k).unwrap() - want).norm() < 1e-15);
        }
        free.insert(3, c64(1.0, 0.0));
        assert!(matches!(make_twist(&pi, &DirichletCharacter::principal(4), 20, &free), Err(Error::Domain(_))));
        assert!(matches!(
            make_twist(&pi, &DirichletCharacter::principal(1), 20, &BTreeMap::new()),
            Err(Error::Compatibility(_))
        ));
    }

    #[test]
    fn compatibility() {
        let third = HurwitzParam::rational(1, 3).unwrap();
        assert!(matches!(make_twist(&third, &chi(3, 1), 10, &BTreeMap::new()), Err(Error::Compatibility(_))));
        assert!(matches!(
            make_twist(&third, &DirichletCharacter::principal(4), 10, &BTreeMap::new()),
            Err(Error::Compatibility(_))
        ));
        let mut free = BTreeMap::new();
        free.insert(2, c64(2.0, 0.0));
        assert!(matches!(make_twist(&third, &chi(4, 1), 100, &free), Err(Error::Unimodular(_))));
        free.insert(2, c64(1.0, 0.0));
        free.insert(4, c64(1.0, 0.0));
        assert!(matches!(make_twist(&third, &chi(4, 1), 100, &free), Err(Error::Domain(_))));
        assert!(make_twist(&third, &chi(4, 1), 0, &BTreeMap::new()).is_err());
    }

    #[test]
    fn rational_against_brute_factorization() {
        // all free values 1: a(m) = Π χ(p) over primes p ≥ threshold, p ∤ q
        let alpha = HurwitzParam::rational(2, 7).unwrap();
        let x = chi(5, 2);
        let a = make_twist(&alpha, &x, 1000, &BTreeMap::new()).unwrap();
        assert_eq!(a.threshold(), 7);
        let mut k = 0u64;
        while k * 7 + 2 <= 10_000 {
            let want = brute_factor(k * 7 + 2)
                .into_iter()
                .map(|p| if p < 7 || p == 5 { c64(1.0, 0.0) } else { x.value(p) })
                .fold(c64(1.0, 0.0), |acc, v| acc * v);
            // a(d) = a(7) = χ(7)
            let want = want / x.value(7);
            assert!((a.value(k).unwrap() - want).norm() < 1e-12, "k = {k}");
            k += 1;
        }
    }

    #[test]
    fn multiplicativity_witness() {
        let alpha = HurwitzParam::rational(3, 4).unwrap();
        let mut free = BTreeMap::new();
        free.insert(2, root_of_unity(1, 7));
        free.insert(3, root_of_unity(2, 9));
        let a = make_twist(&alpha, &chi(9, 3), 3000, &free).unwrap();
        for (k1, k2) in [(0u64, 5u64), (3, 17), (12, 40), (101, 7)] {
            let (x1, x2) = (4 * k1 + 3, 4 * k2 + 3);
            let lhs = a.value(k1).unwrap() * a.value(k2).unwrap() * a.integer_value(4).unwrap().powu(2);
            assert!((lhs - a.integer_value(x1 * x2).unwrap()).norm() < 1e-12);
        }
    }

    #[test]
    fn generating_series() {
        let alpha = HurwitzParam::rational(2, 3).unwrap();
        let mut free = BTreeMap::new();
        free.insert(2, root_of_unity(1, 6));
        free.insert(5, root_of_unity(3, 10));
        let a = make_twist(&alpha, &chi(5, 3), 1000, &free).unwrap();
        assert_eq!(a.free_primes(), vec![2, 3, 5]);
        let s = c64(2.5, 0.0);
        let direct = generating_series_direct(&a, s, 100_000).unwrap();
        let closed = generating_series_product(&a, s).unwrap();
        assert!((direct - closed).norm() < 1e-6, "{direct} vs {closed}");
    }

    #[test]
    fn json_round_trip() {
        let alpha = HurwitzParam::rational(1, 2).unwrap();
        let mut free = BTreeMap::new();
        free.insert(3, root_of_unity(1, 5));
        let a = make_twist(&alpha, &chi(3, 1), 50, &free).unwrap();
        let j = serde_json::to_string(&a).unwrap();
        let b: TwistFunction = serde_json::from_str(&j).unwrap();
        assert_eq!(a, b);
        let tampered = j.replace("\"threshold\":4", "\"threshold\":5");
        assert!(serde_json::from_str::<TwistFunction>(&tampered).is_err());
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn unimodular_and_consistent(k in 0u64..1_000_000, q_idx in 1usize..4, phase in 0.0f64..1.0) {
            let alpha = HurwitzParam::rational(5, 3).unwrap();
            let mut free = BTreeMap::new();
            free.insert(2, c64(0.0, 2.0 * PI * phase).exp());
            let a = make_twist(&alpha, &chi(5, q_idx), 100_000, &free).unwrap();
            let v = a.value(k).unwrap();
            prop_assert!((v.norm() - 1.0).abs() < 1e-12);
            let lhs = v * a.integer_value(3).unwrap();
            prop_assert!((lhs - a.integer_value(3 * k + 5).unwrap()).norm() < 1e-12);
        }
    }
}
