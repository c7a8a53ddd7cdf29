//! Completely multiplicative unimodular twists of type (N₀, χ), twisted
//! truncations ζ_a^{[N]}, partial-sum growth and Weyl target-set densities.

mod diagnostics;
mod function;
mod growth;
mod weyl;

pub use diagnostics::{twist_diagnostics, DiagnosticsSpec, SeriesCheck, TwistDiagnostics};
pub use function::{
    generating_series_direct, generating_series_product, log_threshold, make_twist, twist_value, TwistDocument,
    TwistFunction,
};
pub use growth::{fit_partial_sums, partial_sum_growth, GrowthPoint, GrowthReport, MIN_CHECKPOINTS};
pub use weyl::{weyl_limit_density, weyl_set_measure, WeylTargetSpec};

use crate::error::{Error, Result};
use crate::multizeta::{check_arity, nested_sum, power_columns, MultiPoint, ParamVector};
use crate::numcore::{ensure_finite, ComplexValue};

/// ζ_a^{[N]}(s; α) = Σ_{0≤k₁<…<k_n≤N} Π a_j(k_j+α_j)(k_j+α_j)^{−s_j}.
pub fn twisted_zeta_trunc(
    s: &MultiPoint,
    alpha: &ParamVector,
    twists: &[TwistFunction],
    n_max: u64,
) -> Result<ComplexValue> {
    let n = check_arity(s, alpha)?;
    if twists.len() != n {
        return Err(Error::Arity(format!("{} twists for arity {n}", twists.len())));
    }
    for (j, (a, p)) in twists.iter().zip(alpha.entries()).enumerate() {
        if a.param().value() != p.value() {
            return Err(Error::Domain(format!(
                "twist {} is built on α = {}, not {}",
                j + 1,
                a.param().value(),
                p.value()
            )));
        }
    }
    let mut cols = power_columns(s, alpha, n_max as usize);
    for (col, a) in cols.iter_mut().zip(twists) {
        for (k, x) in col.iter_mut().enumerate() {
            *x *= a.value(k as u64)?;
        }
    }
    ensure_finite(nested_sum(&cols), "twisted_zeta_trunc")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hurwitz::{DirichletCharacter, HurwitzParam};
    use crate::multizeta::zeta_trunc;
    use crate::numcore::{c64, pow_neg};
    use std::collections::BTreeMap;

    fn transcendental_twist(alpha: f64, q: u64, n0: u64) -> TwistFunction {
        let p = HurwitzParam::transcendental(alpha).unwrap();
        make_twist(&p, &DirichletCharacter::principal(q), n0, &BTreeMap::new()).unwrap()
    }

    #[test]
    fn trivial_twist() {
        // ⌈log N₀⌉ = 45 > N, so every value used is a free value 1
        let a = [0.3, 1.7];
        let tw: Vec<_> = a.iter().map(|&x| transcendental_twist(x, 3, u64::MAX)).collect();
        let s = MultiPoint::new(vec![c64(0.6, 3.0), c64(1.1, -2.0)]).unwrap();
        let pv = ParamVector::from_values(&a).unwrap();
        let v = twisted_zeta_trunc(&s, &pv, &tw, 40).unwrap();
        assert_eq!(v, zeta_trunc(&s, &pv, 40).unwrap());
    }

    #[test]
    fn alternating_hand_sum() {
        let alpha = 0.4;
        let tw = transcendental_twist(alpha, 2, 1);
        let s = c64(0.7, 5.0);
        let v = twisted_zeta_trunc(
            &MultiPoint::new(vec![s]).unwrap(),
            &ParamVector::from_values(&[alpha]).unwrap(),
            &[tw],
            3,
        )
        .unwrap();
        let hand = pow_neg(0.4, s) - pow_neg(1.4, s) + pow_neg(2.4, s) - pow_neg(3.4, s);
        assert!((v - hand).norm() < 1e-14);
    }

    #[test]
    fn triangle_inequality() {
        let a = [0.5, 0.9, 1.3];
        let tw: Vec<_> = a.iter().map(|&x| transcendental_twist(x, 5, 10)).collect();
        let s = MultiPoint::new(vec![c64(1.2, 0.0), c64(0.8, 0.0), c64(1.5, 0.0)]).unwrap();
        let pv = ParamVector::from_values(&a).unwrap();
        for n in [2, 10, 60] {
            let t = twisted_zeta_trunc(&s, &pv, &tw, n).unwrap();
            assert!(t.norm() <= zeta_trunc(&s, &pv, n as usize).unwrap().re + 1e-12);
        }
    }

    #[test]
    fn mismatches() {
        let tw = transcendental_twist(0.5, 3, 10);
        let s = MultiPoint::new(vec![c64(1.0, 1.0); 2]).unwrap();
        let pv = ParamVector::from_values(&[0.5, 0.5]).unwrap();
        assert!(matches!(twisted_zeta_trunc(&s, &pv, std::slice::from_ref(&tw), 5), Err(Error::Arity(_))));
        let pv2 = ParamVector::from_values(&[0.5, 0.6]).unwrap();
        assert!(matches!(twisted_zeta_trunc(&s, &pv2, &[tw.clone(), tw], 5), Err(Error::Domain(_))));
    }
}
