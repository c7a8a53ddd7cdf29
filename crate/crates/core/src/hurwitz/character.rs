use num_integer::Integer;
use serde::{Deserialize, Serialize};

use super::zeta::{hurwitz_regular, EmOptions};
use crate::error::{Error, Result};
use crate::numcore::primes::factor;
use crate::numcore::{c64, ensure_finite, pow_neg, root_of_unity, ComplexValue};

/// A Dirichlet character stored as an explicit value table.
///
/// `exponents[a]` is `Some(e)` with χ(a) = e^{2πi e/order} when
/// gcd(a, q) = 1, and `None` when χ(a) = 0.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DirichletCharacter {
    pub modulus: u64,
    pub values: Vec<ComplexValue>,
    pub principal: bool,
    pub order: u64,
    pub exponents: Vec<Option<u64>>,
}

impl DirichletCharacter {
    fn from_exponents(modulus: u64, order: u64, exponents: Vec<Option<u64>>) -> Self {
        // reduce to the true order
        let g = exponents.iter().flatten().fold(order, |g, &e| g.gcd(&e));
        let order = order / g;
        let exponents: Vec<Option<u64>> = exponents.into_iter().map(|e| e.map(|e| e / g)).collect();
        let values = exponents
            .iter()
            .map(|e| match e {
                Some(e) => root_of_unity(*e as i64, order),
                None => c64(0.0, 0.0),
            })
            .collect();
        DirichletCharacter { modulus, values, principal: order == 1, order, exponents }
    }

    /// The principal character mod q.
    pub fn principal(q: u64) -> Self {
        let q = q.max(1);
        let ex = (0..q).map(|a| if a.gcd(&q) == 1 { Some(0) } else { None }).collect();
        Self::from_exponents(q, 1, ex)
    }

    /// χ(n) for any integer n.
    #[inline]
    pub fn value(&self, n: u64) -> ComplexValue {
        self.values[(n % self.modulus) as usize]
    }

    #[inline]
    pub fn exponent(&self, n: u64) -> Option<u64> {
        self.exponents[(n % self.modulus) as usize]
    }

    /// χ(−1) = ±1.
    pub fn is_even(&self) -> bool {
        self.value(self.modulus.max(1) - 1).re > 0.0 || self.modulus == 1
    }

    pub fn is_real(&self) -> bool {
        self.order <= 2
    }

    /// The product character modulo lcm of the two moduli.
    pub fn product(&self, other: &DirichletCharacter) -> DirichletCharacter {
        let q = self.modulus.lcm(&other.modulus);
        let order = self.order.lcm(&other.order);
        let (f1, f2) = (order / self.order, order / other.order);
        let ex = (0..q)
            .map(|a| match (self.exponent(a), other.exponent(a)) {
                (Some(x), Some(y)) => Some((x * f1 + y * f2) % order),
                _ => None,
            })
            .collect();
        Self::from_exponents(q, order, ex)
    }
}

fn pow_mod(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut r = 1 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            r = (r as u128 * b as u128 % m as u128) as u64;
        }
        b = (b as u128 * b as u128 % m as u128) as u64;
        e >>= 1;
    }
    r
}

fn primitive_root_mod_p(p: u64) -> Result<u64> {
    if p == 2 {
        return Ok(1);
    }
    let fs = factor(p - 1)?;
    Ok((2..p).find(|&g| fs.iter().all(|&(r, _)| pow_mod(g, (p - 1) / r, p) != 1)).expect("primes have primitive roots"))
}

/// One cyclic factor of (ℤ/q)^*: residues mod `m` (a prime power) with a
/// discrete-log table of order `order`.
struct Component {
    m: u64,
    order: u64,
    /// dlog[a mod m], `None` for non-units or (for the 2-power split) for
    /// the part handled by the sibling factor.
    dlog: Vec<Option<u64>>,
}

fn cyclic_component(m: u64, g: u64, order: u64) -> Component {
    let mut dlog = vec![None; m as usize];
    let mut x = 1 % m;
    for k in 0..order {
        dlog[x as usize] = Some(k);
        x = (x as u128 * g as u128 % m as u128) as u64;
    }
    Component { m, order, dlog }
}

fn components(q: u64) -> Result<Vec<Component>> {
    let mut out = Vec::new();
    for (p, e) in factor(q)? {
        let m = p.pow(e);
        if p == 2 {
            match e {
                1 => {}
                2 => out.push(cyclic_component(4, 3, 2)),
                _ => {
                    // a ≡ (−1)^u 5^v (mod 2^e)
                    let order5 = m / 4;
                    let five = cyclic_component(m, 5, order5);
                    let mut sign = vec![None; m as usize];
                    let mut fivel = vec![None; m as usize];
                    for a in (1..m).step_by(2) {
                        let u = if a % 4 == 1 { 0 } else { 1 };
                        let b = if u == 0 { a } else { m - a };
                        sign[a as usize] = Some(u);
                        fivel[a as usize] = five.dlog[b as usize];
                    }
                    out.push(Component { m, order: 2, dlog: sign });
                    out.push(Component { m, order: order5, dlog: fivel });
                }
            }
        } else {
            let mut g = primitive_root_mod_p(p)?;
            if e >= 2 && pow_mod(g, p - 1, p * p) == 1 {
                g += p;
            }
            out.push(cyclic_component(m, g, m / p * (p - 1)));
        }
    }
    Ok(out)
}

/// All φ(q) Dirichlet characters mod q, principal first.
pub fn character_table(q: u64) -> Result<Vec<DirichletCharacter>> {
    if q == 0 {
        return Err(Error::Domain("modulus must be positive".into()));
    }
    let comps = components(q)?;
    let big = comps.iter().fold(1u64, |l, c| l.lcm(&c.order));
    let total: u64 = comps.iter().map(|c| c.order).product();
    let mut out = Vec::with_capacity(total as usize);
    for mut idx in 0..total {
        let mut js = Vec::with_capacity(comps.len());
        for c in &comps {
            js.push(idx % c.order);
            idx /= c.order;
        }
        let ex = (0..q)
            .map(|a| {
                if a.gcd(&q) != 1 {
                    return None;
                }
                let mut e = 0u64;
                for (c, &j) in comps.iter().zip(&js) {
                    let l = c.dlog[(a % c.m) as usize].expect("unit has a log");
                    e = (e + j * l % c.order * (big / c.order)) % big;
                }
                Some(e)
            })
            .collect();
        out.push(DirichletCharacter::from_exponents(q, big, ex));
    }
    Ok(out)
}

/// L(s, χ) = q^{−s} Σ_a χ(a) ζ(s, a/q).
///
/// For non-principal χ the poles cancel, so the regular parts are summed
/// and s = 1 is allowed.
pub fn dirichlet_l(s: ComplexValue, chi: &DirichletCharacter) -> Result<ComplexValue> {
    let q = chi.modulus;
    let opts = EmOptions::default();
    if chi.principal && (s - 1.0).norm() < super::zeta::POLE_RADIUS {
        return Err(Error::Pole(format!("principal L-function at s = {s}")));
    }
    let mut acc = c64(0.0, 0.0);
    let mut units = 0u64;
    for a in 1..=q {
        let c = chi.value(a);
        if c == c64(0.0, 0.0) {
            continue;
        }
        units += 1;
        acc += c * hurwitz_regular(s, a as f64 / q as f64, &opts)?;
    }
    if chi.principal {
        acc += units as f64 / (s - 1.0);
    }
    ensure_finite(acc * pow_neg(q as f64, s), "dirichlet_l")
}

/// Outcome of the numerical zero scan used as a permissibility heuristic.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PermissibilityReport {
    /// Zeros counted inside the rectangle by the argument principle, per
    /// product character χχ*.
    pub zero_counts: Vec<i64>,
    /// Smallest |L| seen on the boundary and grid.
    pub min_modulus: f64,
    /// No zero was found. This is evidence, not proof.
    pub zero_free: bool,
}

/// Counts zeros of `f` inside the rectangle by the argument principle,
/// refining the boundary sampling until each step turns the argument by
/// less than π/4.
pub fn rectangle_winding<F>(f: F, re: (f64, f64), im: (f64, f64)) -> Result<(i64, f64)>
where
    F: Fn(ComplexValue) -> Result<ComplexValue>,
{
    let corners = [c64(re.0, im.0), c64(re.1, im.0), c64(re.1, im.1), c64(re.0, im.1)];
    let mut total_arg = 0.0;
    let mut min_mod = f64::INFINITY;
    for k in 0..4 {
        let (a, b) = (corners[k], corners[(k + 1) % 4]);
        let mut stack = vec![(0.0f64, 1.0f64, f(a)?, f(b)?)];
        min_mod = min_mod.min(stack[0].2.norm());
        while let Some((u0, u1, f0, f1)) = stack.pop() {
            min_mod = min_mod.min(f1.norm());
            let d = (f1 / f0).arg();
            if d.abs() < std::f64::consts::FRAC_PI_4 || u1 - u0 < 1e-12 {
                if u1 - u0 < 1e-12 && d.abs() >= std::f64::consts::FRAC_PI_4 {
                    return Err(Error::Convergence("zero on the contour".into()));
                }
                total_arg += d;
                continue;
            }
            let um = 0.5 * (u0 + u1);
            let fm = f(a + (b - a) * um)?;
            // process the left half first
            stack.push((um, u1, fm, f1));
            stack.push((u0, um, f0, fm));
        }
    }
    Ok(((total_arg / std::f64::consts::TAU).round() as i64, min_mod))
}

/// Scans L(s, χχ*) for every χ* mod d over the rectangle
/// `re × im` for zeros.
pub fn permissibility_scan(
    chi: &DirichletCharacter,
    d: u64,
    re: (f64, f64),
    im: (f64, f64),
) -> Result<PermissibilityReport> {
    let mut counts = Vec::new();
    let mut min_mod = f64::INFINITY;
    for star in character_table(d)? {
        let prod = chi.product(&star);
        let (n, m) = rectangle_winding(|s| dirichlet_l(s, &prod), re, im)?;
        counts.push(n);
        min_mod = min_mod.min(m);
    }
    let zero_free = counts.iter().all(|&c| c == 0);
    Ok(PermissibilityReport { zero_counts: counts, min_modulus: min_mod, zero_free })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hurwitz::hurwitz_zeta;
    use std::collections::BTreeSet;

    fn brute_totient(q: u64) -> usize {
        (1..=q).filter(|a| a.gcd(&q) == 1).count()
    }

    #[test]
    fn small_tables() {
        let t = character_table(1).unwrap();
        assert_eq!(t.len(), 1);
        assert!(t[0].principal);
        let t = character_table(5).unwrap();
        let orders: Vec<u64> = {
            let mut o: Vec<u64> = t.iter().map(|c| c.order).collect();
            o.sort();
            o
        };
        assert_eq!(orders, vec![1, 2, 4, 4]);
        let t = character_table(8).unwrap();
        assert_eq!(t.len(), 4);
        assert!(t.iter().all(|c| c.is_real()));
    }

    #[test]
    fn invariants_and_orthogonality() {
        for q in 1..=30u64 {
            let table = character_table(q).unwrap();
            assert_eq!(table.len(), brute_totient(q), "q = {q}");
            let distinct: BTreeSet<Vec<Option<u64>>> = table
                .iter()
                .map(|c| c.exponents.iter().map(|e| e.map(|e| e * (60 / c.order.min(60)))).collect())
                .collect();
            assert_eq!(distinct.len(), table.len(), "duplicate characters mod {q}");
            for chi in &table {
                assert_eq!(chi.value(1), c64(1.0, 0.0));
                for a in 0..q {
                    for b in 0..q {
                        let lhs = chi.value(a * b % q);
                        let rhs = chi.value(a) * chi.value(b);
                        assert!((lhs - rhs).norm() < 1e-12);
                    }
                    let v = chi.value(a);
                    if a.gcd(&q) == 1 {
                        assert!((v.powu(chi.order as u32) - 1.0).norm() < 1e-9);
                    } else {
                        assert_eq!(v, c64(0.0, 0.0));
                    }
                }
            }
            for a in (0..q).filter(|a| a.gcd(&q) == 1) {
                let s: ComplexValue = table.iter().map(|c| c.value(a)).sum();
                let expect = if a % q == 1 % q { table.len() as f64 } else { 0.0 };
                assert!((s - expect).norm() < 1e-10, "q = {q}, a = {a}");
            }
        }
    }

    #[test]
    fn l_functions() {
        // q = 1 is the Riemann zeta function
        let s = c64(0.7, 12.0);
        let l = dirichlet_l(s, &DirichletCharacter::principal(1)).unwrap();
        assert!((l - hurwitz_zeta(s, 1.0).unwrap()).norm() < 1e-12);
        // Leibniz
        let chi4 = character_table(4).unwrap().into_iter().find(|c| !c.principal).unwrap();
        let l = dirichlet_l(c64(1.0, 0.0), &chi4).unwrap();
        assert!((l - std::f64::consts::FRAC_PI_4).norm() < 1e-12);
        assert!((l.re - 0.785_398_1).abs() < 1e-7);
        // series at s = 2 for the character mod 3
        let chi3 = character_table(3).unwrap().into_iter().find(|c| !c.principal).unwrap();
        let l = dirichlet_l(c64(2.0, 0.0), &chi3).unwrap();
        let mut series = 0.0;
        for n in (1..3_000_000u64).rev() {
            series += chi3.value(n).re / (n as f64 * n as f64);
        }
        assert!((l.re - series).abs() < 1e-10 && l.im.abs() < 1e-14);
        assert!(matches!(dirichlet_l(c64(1.0, 0.0), &DirichletCharacter::principal(3)), Err(Error::Pole(_))));
    }

    #[test]
    fn products_and_winding() {
        let t5 = character_table(5).unwrap();
        let t3 = character_table(3).unwrap();
        let p = t5[1].product(&t3[1]);
        assert_eq!(p.modulus, 15);
        for a in 0..15 {
            assert!((p.value(a) - t5[1].value(a) * t3[1].value(a)).norm() < 1e-12);
        }
        // ζ has exactly one zero in [0.4, 0.6] × [13, 15]
        let (n, _) = rectangle_winding(|s| hurwitz_zeta(s, 1.0), (0.4, 0.6), (13.0, 15.0)).unwrap();
        assert_eq!(n, 1);
        let chi4 = character_table(4).unwrap().into_iter().find(|c| !c.principal).unwrap();
        let r = permissibility_scan(&chi4, 1, (0.55, 0.95), (-5.0, 5.0)).unwrap();
        assert!(r.zero_free);
    }
}
