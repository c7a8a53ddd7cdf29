//! Numerical laboratory for multiple Hurwitz zeta-functions
//! ζ_n(s; α) = Σ_{0≤k₁<…<k_n} Π (k_j + α_j)^{−s_j}.
//!
//! The modules build on each other: [`numcore`] (special functions,
//! quadrature, smooth cutoffs), [`hurwitz`] (one variable), [`multizeta`]
//! (the evaluators), [`twist`] (unimodular coefficient weights), [`decomp`]
//! (monomial decompositions of polynomials) and [`lab`] (experiments).

pub mod decomp;
pub mod error;
pub mod hurwitz;
pub mod lab;
pub mod multizeta;
pub mod numcore;
pub mod twist;

pub use decomp::{MonomialTableau, Polynomial, VerificationReport};
pub use error::{Error, Result};
pub use hurwitz::{DirichletCharacter, HurwitzParam, ParamTag};
pub use lab::{ScanSpec, ShiftRecord, Target, ZeroRecord};
pub use multizeta::{CompactBox, EvalPolicy, MultiPoint, ParamVector, Rect};
pub use numcore::{c64, ComplexValue, SmoothCutoff};
pub use twist::TwistFunction;
