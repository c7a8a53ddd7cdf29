//! The one-variable Hurwitz zeta-function ζ(s, α) = Σ_{k≥0} (k+α)^{−s}:
//! Euler–Maclaurin continuation, the smoothed Dirichlet polynomial and its
//! approximate functional equation, and Dirichlet L-functions assembled from
//! Hurwitz values.

mod character;
mod param;
mod zeta;

pub use character::{
    character_table, dirichlet_l, permissibility_scan, rectangle_winding, DirichletCharacter, PermissibilityReport,
};
pub use param::{HurwitzParam, ParamTag};
pub use zeta::{
    hurwitz_afe, hurwitz_regular, hurwitz_smoothed, hurwitz_zeta, hurwitz_zeta_with, pole_term, AfeOptions, AfeValue,
    EmOptions, Regime, POLE_RADIUS,
};
