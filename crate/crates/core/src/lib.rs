//! Numerical laboratory for the Tricomi equation `∂²ₜu − tΔu = F`.
//!
//! The crate provides an exact per-mode spectral propagator on periodic
//! boxes, a small-data nonlinear solver for the source `|u|ᵖ`, and numeric
//! test benches for blowup and Strichartz-type estimates.

pub mod blowup;
mod error;
pub mod exponents;
pub mod grid;
pub mod nonlinear;
pub mod propagator;
pub mod quadrature;
pub mod specfun;
pub mod strichartz;

pub use error::{Error, Result};
pub use exponents::{
    classify_regime, conformal_exponent, critical_exponent, global_indices, ExponentReport,
    Regime, StrichartzIndices,
};
pub use grid::{ComplexField, Field, GridSpec, Spectrum};
pub use specfun::{phi, tricomi_multipliers, AiryPair, MultiplierValue};
pub use nonlinear::{simulate, BlowupVerdict, SimulationConfig, SimulationTrace};
pub use propagator::{Propagator, SpectralState};
