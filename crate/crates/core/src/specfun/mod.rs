//! Special functions consumed by the propagator and the blowup machinery.

mod airy;
mod bessel;
pub(crate) mod dd;
mod gamma;
mod hypergeom;

pub use airy::{
    airy, phi, phi_inverse, tricomi_multipliers, AiryPair, MultiplierValue, AIRY_RANGE, AI0,
    MULTIPLIER_RANGE, NEG_AIP0,
};
pub(crate) use airy::multipliers_raw;
pub use bessel::bessel_j;
pub use gamma::{beta_quadrature, gamma, gamma_beta_identities, ln_gamma, GammaBetaReport, IdentityCheck};
pub use hypergeom::{hypergeom_f16, hypergeom_f16_at_one};
