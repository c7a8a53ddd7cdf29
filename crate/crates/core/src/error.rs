use thiserror::Error;

/// Errors raised by the evaluators, constructions and experiments.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("pole: {0}")]
    Pole(String),
    #[error("argument outside domain: {0}")]
    Domain(String),
    #[error("argument outside supported range: {0}")]
    Range(String),
    #[error("imaginary parts must share one sign: {0}")]
    Sign(String),
    #[error("cost {cost:.3e} exceeds budget {budget:.3e}")]
    Cost { cost: f64, budget: f64 },
    #[error("invalid contour: {0}")]
    Contour(String),
    #[error("no convergence: {0}")]
    Convergence(String),
    #[error("arity mismatch: {0}")]
    Arity(String),
    #[error("incompatible character: {0}")]
    Compatibility(String),
    #[error("value is not unimodular: {0}")]
    Unimodular(String),
    #[error("budget exceeded: {0}")]
    Budget(String),
    #[error("non-finite result in {0}")]
    NonFinite(&'static str),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
