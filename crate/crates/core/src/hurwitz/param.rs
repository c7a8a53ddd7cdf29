use std::fmt;
use std::str::FromStr;

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Arithmetic nature of a Hurwitz parameter.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ParamTag {
    /// α = c/d in lowest terms.
    Rational { c: u64, d: u64 },
    /// α is treated as transcendental; the float is its approximation.
    Transcendental,
}

/// A positive real shift α with its arithmetic tag.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HurwitzParam {
    alpha: f64,
    tag: ParamTag,
}

impl HurwitzParam {
    pub fn rational(c: u64, d: u64) -> Result<Self> {
        if c == 0 || d == 0 {
            return Err(Error::Domain(format!("rational parameter {c}/{d} must be positive")));
        }
        let g = c.gcd(&d);
        let (c, d) = (c / g, d / g);
        Ok(HurwitzParam { alpha: c as f64 / d as f64, tag: ParamTag::Rational { c, d } })
    }

    pub fn transcendental(alpha: f64) -> Result<Self> {
        if !(alpha > 0.0 && alpha.is_finite()) {
            return Err(Error::Domain(format!("parameter {alpha} must be positive and finite")));
        }
        Ok(HurwitzParam { alpha, tag: ParamTag::Transcendental })
    }

    #[inline]
    pub fn value(&self) -> f64 {
        self.alpha
    }

    pub fn tag(&self) -> ParamTag {
        self.tag
    }

    /// `(c, d)` for a rational parameter.
    pub fn as_rational(&self) -> Option<(u64, u64)> {
        match self.tag {
            ParamTag::Rational { c, d } => Some((c, d)),
            ParamTag::Transcendental => None,
        }
    }
}

/// `r:c/d` (or `r:c`) for rationals, `t:x` for transcendental floats.
impl FromStr for HurwitzParam {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Parse(format!("parameter {s:?}: expected r:c/d or t:x"));
        let (kind, body) = s.trim().split_once(':').ok_or_else(bad)?;
        match kind {
            "r" => {
                let (c, d) = match body.split_once('/') {
                    Some((c, d)) => (c, d),
                    None => (body, "1"),
                };
                let c = c.trim().parse::<u64>().map_err(|_| bad())?;
                let d = d.trim().parse::<u64>().map_err(|_| bad())?;
                HurwitzParam::rational(c, d).map_err(|e| Error::Parse(e.to_string()))
            }
            "t" => {
                let x = body.trim().parse::<f64>().map_err(|_| bad())?;
                HurwitzParam::transcendental(x).map_err(|e| Error::Parse(e.to_string()))
            }
            _ => Err(bad()),
        }
    }
}

impl fmt::Display for HurwitzParam {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.tag {
            ParamTag::Rational { c, d } => write!(f, "r:{c}/{d}"),
            ParamTag::Transcendental => write!(f, "t:{}", self.alpha),
        }
    }
}
