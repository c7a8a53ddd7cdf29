//! Constructive decomposition of a polynomial p(s₁, …, s_n) into slots of
//! one-variable monomials whose ordered products sum to p, with vanishing
//! tail sums and a power-of-two scale B for the box conditions, plus an
//! exact verifier.

mod poly;
mod tableau;
mod verify;

pub use poly::{Polynomial, PolynomialDocument, Term};
pub use tableau::{construct, decompose, MonomialTableau, Slot, TableauDocument};
pub use verify::{verify_tableau, VerificationReport};
