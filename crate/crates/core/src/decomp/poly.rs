use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::multizeta::MAX_ARITY;
use crate::numcore::{c64, is_finite, ComplexValue};

/// One term c·s₁^{e₁}⋯s_n^{e_n}.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Term {
    pub coefficient: ComplexValue,
    pub exponents: Vec<u32>,
}

/// A polynomial in s₁, …, s_n with distinct exponent tuples and nonzero
/// coefficients, kept in input order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "PolynomialDocument", into = "PolynomialDocument")]
pub struct Polynomial {
    arity: usize,
    terms: Vec<Term>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PolynomialDocument {
    pub arity: usize,
    pub terms: Vec<Term>,
}

impl TryFrom<PolynomialDocument> for Polynomial {
    type Error = Error;
    fn try_from(d: PolynomialDocument) -> Result<Self> {
        Polynomial::new(d.arity, d.terms)
    }
}

impl From<Polynomial> for PolynomialDocument {
    fn from(p: Polynomial) -> Self {
        PolynomialDocument { arity: p.arity, terms: p.terms }
    }
}

impl Polynomial {
    /// Merges repeated exponent tuples into their first occurrence and drops
    /// zero coefficients.
    pub fn new(arity: usize, terms: Vec<Term>) -> Result<Self> {
        if arity == 0 || arity > MAX_ARITY {
            return Err(Error::Arity(format!("polynomial arity {arity}, expected 1..={MAX_ARITY}")));
        }
        let mut out: Vec<Term> = Vec::with_capacity(terms.len());
        for t in terms {
            if t.exponents.len() != arity {
                return Err(Error::Arity(format!("term with {} exponents in arity {arity}", t.exponents.len())));
            }
            if !is_finite(t.coefficient) {
                return Err(Error::NonFinite("polynomial coefficient"));
            }
            match out.iter_mut().find(|u| u.exponents == t.exponents) {
                Some(u) => u.coefficient += t.coefficient,
                None => out.push(t),
            }
        }
        out.retain(|t| t.coefficient != c64(0.0, 0.0));
        Ok(Polynomial { arity, terms: out })
    }

    pub fn zero(arity: usize) -> Result<Self> {
        Polynomial::new(arity, Vec::new())
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn degree(&self) -> u32 {
        self.terms.iter().map(|t| t.exponents.iter().sum::<u32>()).max().unwrap_or(0)
    }

    pub fn eval(&self, s: &[ComplexValue]) -> Result<ComplexValue> {
        if s.len() != self.arity {
            return Err(Error::Arity(format!("{} values for arity {}", s.len(), self.arity)));
        }
        Ok(self
            .terms
            .iter()
            .map(|t| t.exponents.iter().zip(s).fold(t.coefficient, |acc, (&e, z)| acc * z.powu(e)))
            .sum())
    }

    /// Parses with a fixed arity; variables beyond it are rejected.
    pub fn parse_with_arity(src: &str, arity: usize) -> Result<Self> {
        let terms = Parser::new(src).parse()?;
        let used = terms.iter().flat_map(|(_, vars)| vars.iter().map(|v| v.0)).max().unwrap_or(0);
        if used > arity {
            return Err(Error::Parse(format!("s{used} used in a polynomial of arity {arity}")));
        }
        Polynomial::new(
            arity,
            terms
                .into_iter()
                .map(|(c, vars)| {
                    let mut e = vec![0; arity];
                    for (v, p) in vars {
                        e[v - 1] += p;
                    }
                    Term { coefficient: c, exponents: e }
                })
                .collect(),
        )
    }
}

/// Arity is the largest variable index used (at least 1).
impl FromStr for Polynomial {
    type Err = Error;
    fn from_str(src: &str) -> Result<Self> {
        let terms = Parser::new(src).parse()?;
        let arity = terms.iter().flat_map(|(_, vars)| vars.iter().map(|v| v.0)).max().unwrap_or(1);
        Polynomial::parse_with_arity(src, arity)
    }
}

fn fmt_real(x: f64) -> String {
    format!("{x}")
}

fn fmt_coeff(c: ComplexValue) -> String {
    match (c.re, c.im) {
        (re, 0.0) => fmt_real(re),
        (0.0, im) => format!("{}i", fmt_real(im)),
        (re, im) if im < 0.0 => format!("({}-{}i)", fmt_real(re), fmt_real(-im)),
        (re, im) => format!("({}+{}i)", fmt_real(re), fmt_real(im)),
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, t) in self.terms.iter().enumerate() {
            let mut c = t.coefficient;
            if i > 0 {
                if (c.im == 0.0 && c.re < 0.0) || (c.re == 0.0 && c.im < 0.0) {
                    write!(f, " - ")?;
                    c = -c;
                } else {
                    write!(f, " + ")?;
                }
            }
            let vars: Vec<String> = t
                .exponents
                .iter()
                .enumerate()
                .filter(|(_, &e)| e > 0)
                .map(|(j, &e)| if e == 1 { format!("s{}", j + 1) } else { format!("s{}^{e}", j + 1) })
                .collect();
            if vars.is_empty() {
                write!(f, "{}", fmt_coeff(c))?;
            } else if c == c64(1.0, 0.0) {
                write!(f, "{}", vars.join("*"))?;
            } else if c == c64(-1.0, 0.0) {
                write!(f, "-{}", vars.join("*"))?;
            } else {
                write!(f, "{}*{}", fmt_coeff(c), vars.join("*"))?;
            }
        }
        Ok(())
    }
}

type RawTerm = (ComplexValue, Vec<(usize, u32)>);

/// Recursive descent over
/// `poly := [±] term (± term)*`, `term := factor (* factor)*`,
/// `factor := number | number? i | ( complex ) | s<j> [^ int]`.
struct Parser<'a> {
    src: &'a str,
    pos: usize,
}

impl<'a> Parser<'a> {
    fn new(src: &'a str) -> Self {
        Parser { src, pos: 0 }
    }

    fn err(&self, what: &str) -> Error {
        Error::Parse(format!("{what} at offset {} in {:?}", self.pos, self.src))
    }

    fn skip_ws(&mut self) {
        while let Some(c) = self.peek().filter(|c| c.is_whitespace()) {
            self.pos += c.len_utf8();
        }
    }

    fn peek(&self) -> Option<char> {
        self.src[self.pos..].chars().next()
    }

    fn eat(&mut self, c: char) -> bool {
        self.skip_ws();
        if self.peek() == Some(c) {
            self.pos += c.len_utf8();
            true
        } else {
            false
        }
    }

    fn sign(&mut self) -> Option<f64> {
        if self.eat('+') {
            Some(1.0)
        } else if self.eat('-') || self.eat('−') {
            Some(-1.0)
        } else {
            None
        }
    }

    fn parse(mut self) -> Result<Vec<RawTerm>> {
        let mut terms = Vec::new();
        let mut sign = self.sign().unwrap_or(1.0);
        loop {
            let (c, vars) = self.term()?;
            terms.push((c * sign, vars));
            self.skip_ws();
            if self.pos == self.src.len() {
                break;
            }
            sign = self.sign().ok_or_else(|| self.err("expected + or -"))?;
        }
        Ok(terms)
    }

    fn term(&mut self) -> Result<RawTerm> {
        let mut c = c64(1.0, 0.0);
        let mut vars = Vec::new();
        loop {
            self.factor(&mut c, &mut vars)?;
            if !self.eat('*') {
                return Ok((c, vars));
            }
        }
    }

    fn factor(&mut self, c: &mut ComplexValue, vars: &mut Vec<(usize, u32)>) -> Result<()> {
        self.skip_ws();
        match self.peek() {
            Some('s') => {
                self.pos += 1;
                let j = self.integer()? as usize;
                if j == 0 || j > MAX_ARITY {
                    return Err(self.err(&format!("variable s{j} outside s1..s{MAX_ARITY}")));
                }
                let e = if self.eat('^') { self.integer()? as u32 } else { 1 };
                vars.push((j, e));
            }
            Some('(') => {
                self.pos += 1;
                let sign = self.sign().unwrap_or(1.0);
                let first = self.number_or_imag()?;
                let mut z = first * sign;
                if let Some(sign) = self.sign() {
                    z += self.number_or_imag()? * sign;
                }
                if !self.eat(')') {
                    return Err(self.err("expected )"));
                }
                *c *= z;
            }
            Some(ch) if ch.is_ascii_digit() || ch == '.' || ch == 'i' => *c *= self.number_or_imag()?,
            _ => return Err(self.err("expected a number, (complex), i or s<j>")),
        }
        Ok(())
    }

    fn integer(&mut self) -> Result<u64> {
        self.skip_ws();
        let start = self.pos;
        while self.peek().is_some_and(|c| c.is_ascii_digit()) {
            self.pos += 1;
        }
        self.src[start..self.pos].parse().map_err(|_| self.err("expected an integer"))
    }

    /// `1.5`, `2e-3`, `3i`, `0.5i` or `i`.
    fn number_or_imag(&mut self) -> Result<ComplexValue> {
        self.skip_ws();
        let start = self.pos;
        let bytes = self.src.as_bytes();
        while self.pos < bytes.len() {
            let b = bytes[self.pos];
            let exp_sign = (b == b'+' || b == b'-')
                && self.pos > start
                && matches!(bytes[self.pos - 1], b'e' | b'E')
                && self.pos >= 2
                && bytes[self.pos - 2].is_ascii_digit();
            if b.is_ascii_digit() || b == b'.' || exp_sign || ((b == b'e' || b == b'E') && self.pos > start) {
                self.pos += 1;
            } else {
                break;
            }
        }
        let text = &self.src[start..self.pos];
        let value = if text.is_empty() {
            1.0
        } else {
            text.parse::<f64>().map_err(|_| self.err(&format!("bad number {text:?}")))?
        };
        if self.peek() == Some('i') {
            self.pos += 1;
            Ok(c64(0.0, value))
        } else if text.is_empty() {
            Err(self.err("expected a number"))
        } else {
            Ok(c64(value, 0.0))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_two_variable_example() {
        let p: Polynomial = "s2+s1+s1^2*s2^2".parse().unwrap();
        assert_eq!(p.arity(), 2);
        let e: Vec<Vec<u32>> = p.terms().iter().map(|t| t.exponents.clone()).collect();
        assert_eq!(e, vec![vec![0, 1], vec![1, 0], vec![2, 2]]);
        assert!(p.terms().iter().all(|t| t.coefficient == c64(1.0, 0.0)));
        assert_eq!(p.to_string(), "s2 + s1 + s1^2*s2^2");
    }

    #[test]
    fn coefficients() {
        let p = Polynomial::parse_with_arity("-2.5*s1*s3 + (1-2i)*s2^3 - 3i + i*s1 + 1e-3*s3^2", 3).unwrap();
        let c: Vec<ComplexValue> = p.terms().iter().map(|t| t.coefficient).collect();
        assert_eq!(c, vec![c64(-2.5, 0.0), c64(1.0, -2.0), c64(0.0, -3.0), c64(0.0, 1.0), c64(1e-3, 0.0)]);
        assert_eq!(p.terms()[0].exponents, vec![1, 0, 1]);
        let q: Polynomial = p.to_string().parse().unwrap();
        assert_eq!(p, q);
        let s = [c64(0.5, 1.0), c64(-1.0, 0.3), c64(2.0, 0.0)];
        let direct = c64(-2.5, 0.0) * s[0] * s[2] + c64(1.0, -2.0) * s[1].powu(3) - c64(0.0, 3.0)
            + c64(0.0, 1.0) * s[0]
            + 1e-3 * s[2] * s[2];
        assert!((p.eval(&s).unwrap() - direct).norm() < 1e-14);
    }

    #[test]
    fn merging_and_zero() {
        let p: Polynomial = "s1*s2 + 2*s2*s1 - 3*s1*s2 + 1".parse().unwrap();
        assert_eq!(p.terms().len(), 1);
        assert_eq!(p.terms()[0].exponents, vec![0, 0]);
        assert!("0".parse::<Polynomial>().unwrap().is_zero());
        assert_eq!(Polynomial::zero(2).unwrap().to_string(), "0");
        assert_eq!("2*s1^3*s2".parse::<Polynomial>().unwrap().degree(), 4);
    }

    #[test]
    fn rejects() {
        for bad in ["", "s0", "s9", "s1 +", "s1 ** 2", "(1+2i", "s1^x", "x", "2 s1"] {
            assert!(matches!(bad.parse::<Polynomial>(), Err(Error::Parse(_))), "{bad}");
        }
        assert!(Polynomial::parse_with_arity("s3", 2).is_err());
    }

    #[test]
    fn json() {
        let p: Polynomial = "(0.1+0.2i)*s1 - s2^2".parse().unwrap();
        let j = serde_json::to_string(&p).unwrap();
        assert_eq!(serde_json::from_str::<Polynomial>(&j).unwrap(), p);
    }
}
