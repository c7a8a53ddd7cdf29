use serde::{Deserialize, Serialize};

use super::{generating_series_direct, generating_series_product, partial_sum_growth, GrowthReport, TwistFunction};
use crate::error::Result;
use crate::numcore::primes::factor;
use crate::numcore::{root_of_unity, ComplexValue};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiagnosticsSpec {
    /// Indices k < `indices` are checked for unimodularity and consistency.
    pub indices: u64,
    /// Point and length of the generating-series comparison (rational α).
    pub series_s: ComplexValue,
    pub series_terms: u64,
    pub growth_n_max: u64,
    pub growth_window: u64,
}

impl Default for DiagnosticsSpec {
    fn default() -> Self {
        DiagnosticsSpec {
            indices: 1000,
            series_s: ComplexValue::new(2.5, 0.0),
            series_terms: 100_000,
            growth_n_max: 100_000,
            growth_window: 16,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SeriesCheck {
    pub direct: ComplexValue,
    pub product: ComplexValue,
    pub difference: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TwistDiagnostics {
    /// max_k ||a(k + α)| − 1|.
    pub unimodular_deviation: f64,
    /// Rational α = c/d: max_k |a(k + α)a(d) − a(kd + c)|, together with
    /// |a(kd + c) − χ(kd + c)| whenever every prime factor of kd + c obeys
    /// the character. Transcendental α: max over k ≥ threshold of
    /// |a(k + α) − e^{2πik/q}|.
    pub consistency_deviation: f64,
    pub series: Option<SeriesCheck>,
    pub growth: GrowthReport,
}

/// Runs every check on one twist.
pub fn twist_diagnostics(a: &TwistFunction, spec: &DiagnosticsSpec) -> Result<TwistDiagnostics> {
    let mut unimodular_deviation = 0.0f64;
    let mut consistency_deviation = 0.0f64;
    let q = a.character().modulus;
    for k in 0..spec.indices {
        let v = a.value(k)?;
        unimodular_deviation = unimodular_deviation.max((v.norm() - 1.0).abs());
        match a.param().as_rational() {
            Some((c, d)) => {
                let m = k * d + c;
                let am = a.integer_value(m)?;
                consistency_deviation = consistency_deviation.max((v * a.integer_value(d)? - am).norm());
                let on_character = factor(m)?.iter().all(|&(p, _)| p >= a.threshold() && !q.is_multiple_of(p));
                if on_character {
                    consistency_deviation = consistency_deviation.max((am - a.character().value(m)).norm());
                }
            }
            None if k >= a.threshold() => {
                let want = root_of_unity((k % q) as i64, q);
                consistency_deviation = consistency_deviation.max((v - want).norm());
            }
            None => {}
        }
    }
    let series = if a.is_rational() {
        let direct = generating_series_direct(a, spec.series_s, spec.series_terms)?;
        let product = generating_series_product(a, spec.series_s)?;
        Some(SeriesCheck { direct, product, difference: (direct - product).norm() })
    } else {
        None
    };
    let growth = partial_sum_growth(a, spec.growth_n_max, spec.growth_window)?;
    Ok(TwistDiagnostics { unimodular_deviation, consistency_deviation, series, growth })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hurwitz::{character_table, DirichletCharacter, HurwitzParam};
    use crate::numcore::c64;
    use crate::twist::make_twist;
    use std::collections::BTreeMap;

    #[test]
    fn rational_twist_passes() {
        let alpha = HurwitzParam::rational(1, 3).unwrap();
        let chi = character_table(5).unwrap().swap_remove(1);
        let mut free = BTreeMap::new();
        free.insert(2, c64(0.0, 1.0));
        free.insert(5, c64(-1.0, 0.0));
        let a = make_twist(&alpha, &chi, 1000, &free).unwrap();
        let spec = DiagnosticsSpec { growth_n_max: 10_000, ..Default::default() };
        let d = twist_diagnostics(&a, &spec).unwrap();
        assert!(d.unimodular_deviation < 1e-12);
        assert!(d.consistency_deviation < 1e-12);
        assert!(d.series.unwrap().difference < 1e-6);
    }

    #[test]
    fn transcendental_twist_passes() {
        let alpha = HurwitzParam::transcendental(std::f64::consts::E).unwrap();
        let a = make_twist(&alpha, &DirichletCharacter::principal(6), 50, &BTreeMap::new()).unwrap();
        let spec = DiagnosticsSpec { growth_n_max: 10_000, ..Default::default() };
        let d = twist_diagnostics(&a, &spec).unwrap();
        assert!(d.series.is_none());
        assert!(d.consistency_deviation < 1e-12);
        assert!(d.growth.exponent.abs() < 0.05);
    }
}
